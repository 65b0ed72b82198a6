#include "willoop/dpw.hpp"
#include "willoop/lorentz.hpp"
#include "willoop/config.hpp"
#include "willoop/quadrature.hpp"

#include <json.hpp>
#include <unsupported/Eigen/MatrixFunctions>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace willoop {

CMat Potential::eval_term(int deg, Cx z) const {
  auto it = terms.find(deg);
  const int d = dim();
  CMat M = CMat::Zero(d, d);
  if (it == terms.end()) return M;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) M(r, c) = it->second[r][c].eval(z);
  return M;
}

LoopMat Potential::eval(Cx z) const {
  LoopMat g(dim());
  for (const auto& [deg, mat] : terms) {
    (void)mat;
    g.set_coeff(deg, eval_term(deg, z));
  }
  if (g.empty()) g.set_coeff(0, CMat::Zero(dim(), dim()));
  return g;
}

bool Potential::twist_ok(double tol) const {
  const int d = dim();
  CMat D = sigma_conjugator(d);
  for (Cx z : {Cx(0.37, 0.21), Cx(-0.8, 0.33)}) {
    for (const auto& [deg, mat] : terms) {
      (void)mat;
      CMat X = eval_term(deg, z);
      double sgn = (deg % 2 == 0) ? 1.0 : -1.0;
      if ((D * X * D - sgn * X).cwiseAbs().maxCoeff() > tol * std::max(1.0, X.cwiseAbs().maxCoeff()))
        return false;
    }
  }
  return true;
}

bool Potential::is_polynomial() const {
  for (const auto& [deg, mat] : terms) {
    (void)deg;
    for (const auto& row : mat)
      for (const auto& f : row)
        if (!f.is_polynomial()) return false;
  }
  return true;
}

std::vector<Cx> Potential::poles() const {
  std::vector<Cx> out;
  for (const auto& [deg, mat] : terms) {
    (void)deg;
    for (const auto& row : mat)
      for (const auto& f : row) {
        if (f.is_polynomial()) continue;
        for (Cx r : f.den.roots()) {
          if (std::abs(f.num.eval(r)) < 1e-12) continue;  // removable
          bool dup = false;
          for (Cx q : out)
            if (std::abs(q - r) < 1e-9) dup = true;
          if (!dup) out.push_back(r);
        }
      }
  }
  return out;
}

Potential Potential::normalized(int n, Cx base, const std::vector<std::vector<RationalFn>>& B1hat) {
  Potential eta;
  eta.n = n;
  eta.base_point = base;
  const int d = n + 4;
  std::vector<std::vector<RationalFn>> M(d, std::vector<RationalFn>(d));
  // lower-left block: -B1hat^t I13
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < n; ++c) {
      M[r][4 + c] = B1hat[r][c];
      RationalFn t = B1hat[r][c];
      t.num = t.num * Cx(r == 0 ? 1.0 : -1.0);
      M[4 + c][r] = t;
    }
  eta.terms[-1] = std::move(M);
  return eta;
}

CMat Potential::b1hat_eval(Cx z) const {
  CMat M = eval_term(-1, z);
  return M.topRightCorner(4, n);
}

std::string Potential::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["base_point"] = {base_point.real(), base_point.imag()};
  nlohmann::ordered_json jt = nlohmann::ordered_json::object();
  for (const auto& [deg, mat] : terms) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : mat) {
      nlohmann::ordered_json cols = nlohmann::ordered_json::array();
      for (const auto& f : row) {
        nlohmann::ordered_json e;
        nlohmann::ordered_json num = nlohmann::ordered_json::array();
        for (Cx c : f.num.c) num.push_back({c.real(), c.imag()});
        nlohmann::ordered_json den = nlohmann::ordered_json::array();
        for (Cx c : f.den.c) den.push_back({c.real(), c.imag()});
        e["num"] = num;
        e["den"] = den;
        cols.push_back(e);
      }
      rows.push_back(cols);
    }
    jt[std::to_string(deg)] = rows;
  }
  j["terms"] = jt;
  return j.dump(2);
}

Potential Potential::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Potential eta;
  eta.n = j.at("n").get<int>();
  eta.base_point = Cx(j.at("base_point")[0].get<double>(), j.at("base_point")[1].get<double>());
  for (auto it = j.at("terms").begin(); it != j.at("terms").end(); ++it) {
    int deg = std::stoi(it.key());
    const auto& rows = it.value();
    std::vector<std::vector<RationalFn>> M;
    for (const auto& row : rows) {
      std::vector<RationalFn> r;
      for (const auto& e : row) {
        std::vector<Cx> num, den;
        for (const auto& c : e.at("num")) num.emplace_back(c[0].get<double>(), c[1].get<double>());
        for (const auto& c : e.at("den")) den.emplace_back(c[0].get<double>(), c[1].get<double>());
        r.emplace_back(Poly(num), Poly(den));
      }
      M.push_back(std::move(r));
    }
    if ((int)M.size() != eta.dim()) throw Error("potential json: matrix size mismatch");
    eta.terms[deg] = std::move(M);
  }
  return eta;
}

namespace {

// waypoints of a radial path from base to target with pole detours
std::vector<Cx> detour_path(Cx base, Cx target, const std::vector<Cx>& poles, double radius) {
  std::vector<Cx> pts{base};
  Cx dir = target - base;
  double len = std::abs(dir);
  if (len < 1e-15) return {base, target};
  Cx u = dir / len;
  struct Hit {
    double t;
    Cx pole;
  };
  std::vector<Hit> hits;
  for (Cx p : poles) {
    Cx rel = p - base;
    double t = (rel.real() * u.real() + rel.imag() * u.imag());
    if (t < -radius || t > len + radius) continue;
    double dist = std::abs(rel - t * u);
    if (dist < radius) {
      if (std::abs(p - target) < radius)
        throw PoleOnPath("integrate_potential: target within the pole detour radius");
      hits.push_back({t, p});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.t < b.t; });
  Cx nrm = u * I_UNIT;  // left normal
  for (const auto& h : hits) {
    Cx foot = base + h.t * u;
    pts.push_back(foot - 2.0 * radius * u);
    pts.push_back(foot + 2.0 * radius * nrm);
    pts.push_back(foot + 2.0 * radius * u);
  }
  pts.push_back(target);
  return pts;
}

struct LoopState {
  // coefficients of F on a fixed degree window [lo, hi]
  int dim, lo, hi;
  std::vector<CMat> c;
  LoopState(int d, int l, int h) : dim(d), lo(l), hi(h), c(h - l + 1, CMat::Zero(d, d)) {}
  CMat& at(int j) { return c[j - lo]; }
  const CMat& at(int j) const { return c[j - lo]; }
  LoopState scaled(double s) const {
    LoopState r = *this;
    for (auto& m : r.c) m *= s;
    return r;
  }
  LoopState axpy(double s, const LoopState& o) const {
    LoopState r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += s * o.c[i];
    return r;
  }
  double norm() const {
    double m = 0.0;
    for (const auto& x : c) m = std::max(m, x.cwiseAbs().maxCoeff());
    return m;
  }
};

LoopState rhs_mul(const LoopState& F, const LoopMat& eta_val, Cx dz) {
  LoopState out(F.dim, F.lo, F.hi);
  for (int j = F.lo; j <= F.hi; ++j) {
    CMat acc = CMat::Zero(F.dim, F.dim);
    for (int d = eta_val.lo(); d <= eta_val.hi(); ++d) {
      int k = j - d;
      if (k < F.lo || k > F.hi) continue;
      acc += F.at(k) * eta_val.coeff(d);
    }
    out.at(j) = acc * dz;
  }
  return out;
}

}  // namespace

LoopMat integrate_potential(const Potential& eta, Cx target, IntegrateMethod method, int trunc) {
  const auto& cfg = Config::get();
  if (trunc < 0) trunc = cfg.trunc_default;
  const int d = eta.dim();

  if (method == IntegrateMethod::NilpotentExact) {
    if (!eta.is_polynomial() || eta.terms.size() != 1 || eta.terms.begin()->first != -1)
      throw Error("nilpotent_exact: requires a polynomial degree -1 potential");
    // polynomial antiderivatives: A1 = int M, A2 = int A1 M
    const auto& M = eta.terms.at(-1);
    std::vector<std::vector<Poly>> P(d, std::vector<Poly>(d));
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) P[r][c] = M[r][c].num.antiderivative();
    auto eval_poly_mat = [&](const std::vector<std::vector<Poly>>& Q, Cx z) {
      CMat out(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) out(r, c) = Q[r][c].eval(z);
      return out;
    };
    // A1(z) = P(z) - P(base); A2(z) = int_base^z A1 M dz (polynomial again)
    CMat Pb = eval_poly_mat(P, eta.base_point);
    std::vector<std::vector<Poly>> A1poly(d, std::vector<Poly>(d));
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        A1poly[r][c] = P[r][c];
        A1poly[r][c].c[0] -= Pb(r, c);
      }
    std::vector<std::vector<Poly>> A2int(d, std::vector<Poly>(d));
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        Poly acc;
        for (int m = 0; m < d; ++m) acc = acc + A1poly[r][m] * M[m][c].num;
        A2int[r][c] = acc.antiderivative();
      }
    CMat A2b = eval_poly_mat(A2int, eta.base_point);
    CMat A1 = eval_poly_mat(A1poly, target);
    CMat A2 = eval_poly_mat(A2int, target) - A2b;
    // termination check: the lambda^{-3} coefficient must vanish
    CMat Mz = eta.eval_term(-1, target);
    if ((A2 * Mz).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, A2.cwiseAbs().maxCoeff()) *
                                              std::max(1.0, Mz.cwiseAbs().maxCoeff()))
      throw Error("nilpotent_exact: lambda expansion does not terminate at degree -2");
    LoopMat F = LoopMat::identity(d);
    F.add_coeff(-1, A1);
    F.add_coeff(-2, A2);
    return F;
  }

  // adaptive Dormand-Prince 5(4) along a pole-avoiding polyline
  std::vector<Cx> way = detour_path(eta.base_point, target, eta.poles(), cfg.pole_detour);
  int lo = -trunc, hi = 0;
  for (const auto& [deg, mat] : eta.terms) {
    (void)mat;
    hi = std::max(hi, deg > 0 ? trunc : 0);
  }
  LoopState F(d, lo, hi);
  F.at(0) = CMat::Identity(d, d);

  static const double A[7][6] = {
      {0, 0, 0, 0, 0, 0},
      {1.0 / 5, 0, 0, 0, 0, 0},
      {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
      {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double B5[7] = {35.0 / 384,      0, 500.0 / 1113, 125.0 / 192,
                               -2187.0 / 6784, 11.0 / 84, 0};
  static const double B4[7] = {5179.0 / 57600, 0,           7571.0 / 16695, 393.0 / 640,
                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  for (size_t seg = 0; seg + 1 < way.size(); ++seg) {
    Cx a = way[seg], b = way[seg + 1];
    Cx dz = b - a;
    if (std::abs(dz) < 1e-15) continue;
    double t = 0.0, h = 0.25;
    while (t < 1.0) {
      h = std::min(h, 1.0 - t);
      LoopState k[7] = {F, F, F, F, F, F, F};
      for (int s = 0; s < 7; ++s) {
        LoopState y = F;
        for (int q = 0; q < s; ++q) y = y.axpy(h * A[s][q], k[q]);
        Cx zs = a + (t + (s == 0 ? 0.0 : (s == 1 ? 0.2 : s == 2 ? 0.3 : s == 3 ? 0.8 : s == 4 ? 8.0 / 9 : 1.0)) * h) * dz;
        k[s] = rhs_mul(y, eta.eval(zs), dz);
      }
      LoopState y5 = F, y4 = F;
      for (int s = 0; s < 7; ++s) {
        y5 = y5.axpy(h * B5[s], k[s]);
        y4 = y4.axpy(h * B4[s], k[s]);
      }
      double err = y5.axpy(-1.0, y4).norm();
      double tolstep = cfg.rk_tol * std::max(1.0, F.norm());
      if (err < tolstep || h < 1e-12) {
        F = y5;
        t += h;
        h *= std::min(4.0, 0.9 * std::pow(tolstep / std::max(err, 1e-300), 0.2));
      } else {
        h *= std::max(0.1, 0.9 * std::pow(tolstep / err, 0.2));
        if (h < 1e-13) throw Error("integrate_potential: step size underflow");
      }
    }
  }
  LoopMat out(d);
  for (int j = lo; j <= hi; ++j)
    if (F.at(j).cwiseAbs().maxCoeff() > 0) out.set_coeff(j, F.at(j));
  if (out.empty()) out.set_coeff(0, CMat::Identity(d, d));
  return out;
}

SynthesisResult dpw_synthesize(const Potential& eta, const Grid& grid, int trunc) {
  const auto& cfg = Config::get();
  if (trunc < 0) trunc = cfg.trunc_default;
  SynthesisResult out;
  out.n = eta.n;
  out.grid = grid;
  out.pts.resize(grid.size());
  const int d = eta.dim();
  if (!eta.twist_ok()) throw Error("dpw_synthesize: potential violates the twist condition");

  // degenerate potential: constant map
  double etanorm = 0.0;
  for (Cx z : {Cx(0.3, 0.3), Cx(-0.5, 0.1)}) etanorm = std::max(etanorm, eta.eval(z).norm());
  if (etanorm < 1e-14) {
    out.note = "zero potential: constant harmonic map, not a surface";
    out.surface_ok = false;
    return out;
  }

  bool exact_ok = true;
  try {
    (void)integrate_potential(eta, grid.point(0), IntegrateMethod::NilpotentExact, trunc);
  } catch (const Error&) {
    exact_ok = false;
  }

  MovingFrameField field;
  field.grid = grid;
  field.dim = d;
  field.pts.resize(grid.size());
  for (int idx = 0; idx < grid.size(); ++idx) {
    if (!grid.usable(idx)) continue;
    SynthesisPoint& sp = out.pts[idx];
    try {
      LoopMat Fm = integrate_potential(eta, grid.point(idx),
                                       exact_ok ? IntegrateMethod::NilpotentExact
                                                : IntegrateMethod::RkAdaptive,
                                       trunc);
      IwasawaResult iw = iwasawa_factorize(Fm, IwasawaForm::Noncompact, trunc);
      sp.cell = iw.cell.variant;
      if (!iw.ok) continue;
      sp.factorized = true;
      ++out.factorized_count;
      sp.frame = iw.pair.left;
      CMat v0 = iw.pair.right.coeff(0);
      CMat eta_m1 = eta.eval_term(-1, grid.point(idx));
      CMat p_full = v0 * eta_m1 * v0.inverse();
      sp.B1 = p_full.topRightCorner(4, d - 4);

      FramePoint& fp = field.pts[idx];
      fp.valid = true;
      CMat F1 = sp.frame.eval(1.0);
      fp.F = F1.real().cast<Cx>();
      fp.mc.B1 = sp.B1;
      fp.mc.A1 = CMat::Zero(4, 4);
      fp.mc.A2 = CMat::Zero(d - 4, d - 4);
    } catch (const Error&) {
      sp.factorized = false;
    }
  }

  if (out.factorized_count == 0) {
    out.note = "no grid point factorized";
    return out;
  }

  try {
    out.cls = classify_strongly_harmonic(field);
  } catch (const Error& e) {
    out.note = std::string("classification failed: ") + e.what();
    return out;
  }

  if (out.cls.variant == HarmonicCase::CaseA || out.cls.variant == HarmonicCase::CaseB2Minimal) {
    try {
      RecoveredSurface rec = recover_surface(field);
      for (int idx = 0; idx < grid.size(); ++idx) {
        if (!rec.valid[idx]) continue;
        out.pts[idx].point = rec.points[idx];
        out.pts[idx].immersed = rec.immersed[idx];
        if (rec.immersed[idx]) ++out.immersed_count;
      }
      out.surface_ok = out.immersed_count > 0;
    } catch (const Error& e) {
      out.note = std::string("recovery failed: ") + e.what();
    }
  } else {
    out.note = std::string(harmonic_case_name(out.cls.variant)) +
               ": not the conformal Gauss map of an immersion";
  }
  return out;
}

std::vector<CVec> associated_family(const SynthesisResult& syn, Cx lambda0) {
  if (std::abs(std::abs(lambda0) - 1.0) > 1e-12)
    throw Error("associated_family: lambda0 must lie on the unit circle");
  MovingFrameField field;
  field.grid = syn.grid;
  field.dim = syn.n + 4;
  field.pts.resize(syn.pts.size());
  for (size_t i = 0; i < syn.pts.size(); ++i) {
    const SynthesisPoint& sp = syn.pts[i];
    if (!sp.factorized) continue;
    FramePoint& fp = field.pts[i];
    CMat Fl = sp.frame.eval(lambda0);
    if (Fl.imag().cwiseAbs().maxCoeff() > 1e-6 * std::max(1.0, Fl.real().cwiseAbs().maxCoeff()))
      continue;
    fp.F = Fl.real().cast<Cx>();
    fp.mc.B1 = sp.B1 / lambda0;  // p'-part coefficient at lambda0
    fp.mc.A1 = CMat::Zero(4, 4);
    fp.mc.A2 = CMat::Zero(syn.n, syn.n);
    fp.valid = true;
  }
  RecoveredSurface rec = recover_surface(field);
  return rec.points;
}

SeriesMat SeriesMat::identity(int m, int ord) {
  SeriesMat s(m, m, ord);
  for (int i = 0; i < m; ++i) s.at(i, i) = TSeries::constant(1.0, ord);
  return s;
}

SeriesMat SeriesMat::mul(const SeriesMat& o) const {
  if (cols != o.rows) throw DimensionMismatch("SeriesMat::mul");
  int ord = e.empty() ? 0 : e[0].order();
  SeriesMat r(rows, o.cols, ord);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const TSeries& a = at(i, k);
      if (a.norm() == 0.0) continue;
      for (int j = 0; j < o.cols; ++j) r.at(i, j) += a * o.at(k, j);
    }
  return r;
}

SeriesMat SeriesMat::operator+(const SeriesMat& o) const {
  SeriesMat r = *this;
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] + o.e[i];
  return r;
}

SeriesMat SeriesMat::operator-(const SeriesMat& o) const {
  SeriesMat r = *this;
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] - o.e[i];
  return r;
}

SeriesMat SeriesMat::scale(Cx s) const {
  SeriesMat r = *this;
  for (auto& t : r.e) t = t * s;
  return r;
}

SeriesMat SeriesMat::inverse() const {
  if (rows != cols) throw DimensionMismatch("SeriesMat::inverse");
  int ord = e[0].order();
  CMat c0 = value();
  CMat c0inv = c0.inverse();
  SeriesMat X(rows, cols, ord);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) X.at(i, j) = TSeries::constant(c0inv(i, j), ord);
  SeriesMat two = SeriesMat::identity(rows, ord).scale(2.0);
  int steps = 1;
  while ((1 << steps) <= ord + 1) ++steps;
  for (int s = 0; s <= steps; ++s) X = X.mul(two - this->mul(X));
  return X;
}

SeriesMat SeriesMat::holomorphic_part() const {
  SeriesMat r = *this;
  for (auto& t : r.e) t = t.holomorphic_part();
  return r;
}

SeriesMat SeriesMat::dz() const {
  SeriesMat r = *this;
  for (auto& t : r.e) t = t.dz();
  return r;
}

CMat SeriesMat::value() const {
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = at(i, j).value();
  return m;
}

CMat SeriesMat::z_coeff(int a) const {
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = at(i, j).at(a, 0);
  return m;
}

double SeriesMat::norm() const {
  double s = 0.0;
  for (const auto& t : e) s = std::max(s, t.norm());
  return s;
}

MCSeries mc_series_from_provider(const JetProvider& p, int deg_max) {
  if (deg_max < 0) deg_max = Config::get().deg_max;
  const int ord = deg_max;
  CanonicalData cd = canonical_at(p, 0.0, ord + 3);
  const int n = p.codim();
  MCSeries mc;
  mc.n = n;
  const double rt2 = std::sqrt(2.0);

  TSeries s1 = (TSeries::constant(1.0, ord) - cd.s - cd.k2 * 2.0) * Cx(1.0 / (2.0 * rt2));
  TSeries s2 = (TSeries::constant(1.0, ord) + cd.s - cd.k2 * 2.0) * (-I_UNIT / (2.0 * rt2));
  TSeries s3 = (TSeries::constant(1.0, ord) + cd.s + cd.k2 * 2.0) * Cx(1.0 / (2.0 * rt2));
  TSeries s4 = (TSeries::constant(1.0, ord) - cd.s + cd.k2 * 2.0) * (-I_UNIT / (2.0 * rt2));
  mc.A1 = SeriesMat(4, 4, ord);
  mc.A1.at(0, 2) = s1;
  mc.A1.at(0, 3) = s2;
  mc.A1.at(1, 2) = s3;
  mc.A1.at(1, 3) = s4;
  mc.A1.at(2, 0) = s1;
  mc.A1.at(2, 1) = -s3;
  mc.A1.at(3, 0) = s2;
  mc.A1.at(3, 1) = -s4;

  mc.A2 = SeriesMat(n, n, ord);
  mc.B1 = SeriesMat(4, n, ord);
  for (int j = 0; j < n; ++j) {
    mc.B1.at(0, j) = cd.betacomp[j].truncated(ord) * rt2;
    mc.B1.at(1, j) = cd.betacomp[j].truncated(ord) * (-rt2);
    mc.B1.at(2, j) = -cd.kcomp[j].truncated(ord);
    mc.B1.at(3, j) = cd.kcomp[j].truncated(ord) * (-I_UNIT);
    for (int l = 0; l < n; ++l) mc.A2.at(j, l) = cd.bconn[l][j].truncated(ord);
  }

  const int dim = p.ambient_dim();
  CMat F(dim, dim);
  CVec Yv = cd.Y.value(), Nv = cd.N.value();
  F.col(0) = (Yv + Nv) / rt2;
  F.col(1) = (-Yv + Nv) / rt2;
  F.col(2) = cd.Yz.value() + cd.Yzb.value();
  F.col(3) = I_UNIT * (cd.Yz.value() - cd.Yzb.value());
  for (int j = 0; j < n; ++j) F.col(4 + j) = cd.psi[j].value();
  mc.frame_at_base = F;
  return mc;
}

Potential wu_normalized_potential(const MCSeries& mc, int deg_max) {
  if (deg_max < 0) deg_max = Config::get().deg_max;
  const int n = mc.n;
  const int d = n + 4;
  const int ord = deg_max;

  // frame gauge so that F(0) = I: constant conjugation of the MC form
  CMat k0 = mc.frame_at_base;
  CMat J = minkowski_metric(d);
  if ((k0.transpose() * J * k0 - J).cwiseAbs().maxCoeff() > 1e-8)
    throw Error("wu: frame at the base point is not in the group");
  if ((k0 - k_part(k0)).cwiseAbs().maxCoeff() > 1e-8)
    throw Error("wu: frame at the base point is not in K");
  CMat k1 = k0.topLeftCorner(4, 4), k1i = k1.inverse();
  CMat k2 = k0.bottomRightCorner(n, n), k2i = k2.inverse();

  auto conj_series = [&](const SeriesMat& S, const CMat& Lm, const CMat& Rm) {
    SeriesMat out(S.rows, S.cols, ord);
    for (int i = 0; i < S.rows; ++i)
      for (int j = 0; j < S.cols; ++j) {
        TSeries acc(ord);
        for (int r = 0; r < S.rows; ++r)
          for (int c = 0; c < S.cols; ++c) {
            Cx w = Lm(i, r) * Rm(c, j);
            if (w != Cx(0.0)) acc += S.at(r, c).truncated(ord) * w;
          }
        out.at(i, j) = acc;
      }
    return out;
  };

  SeriesMat A1h = conj_series(mc.A1, k1, k1i).holomorphic_part();
  SeriesMat A2h = conj_series(mc.A2, k2, k2i).holomorphic_part();
  SeriesMat B1h(4, n, ord);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < n; ++j) {
      TSeries acc(ord);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < n; ++c) {
          Cx w = k1(i, r) * k2i(c, j);
          if (w != Cx(0.0)) acc += mc.B1.at(r, c).truncated(ord) * w;
        }
      B1h.at(i, j) = acc.holomorphic_part();
    }

  // solve F0' = F0 delta0 degree by degree, F0(0) = I
  SeriesMat delta0(d, d, ord);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) delta0.at(i, j) = A1h.at(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) delta0.at(4 + i, 4 + j) = A2h.at(i, j);
  std::vector<CMat> F0c(ord + 1, CMat::Zero(d, d));
  F0c[0] = CMat::Identity(d, d);
  for (int a = 0; a < ord; ++a) {
    CMat rhs = CMat::Zero(d, d);
    for (int b = 0; b <= a; ++b) rhs += F0c[b] * delta0.z_coeff(a - b);
    F0c[a + 1] = rhs / (double)(a + 1);
  }
  SeriesMat F0(d, d, ord);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      TSeries t(ord);
      for (int a = 0; a <= ord; ++a) t.at(a, 0) = F0c[a](i, j);
      F0.at(i, j) = t;
    }

  SeriesMat delta1(d, d, ord);
  CMat I13 = CMat::Identity(4, 4);
  I13(0, 0) = -1.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < n; ++j) {
      delta1.at(i, 4 + j) = B1h.at(i, j);
      // lower-left block: -B1^t I13
      delta1.at(4 + j, i) = B1h.at(i, j) * (i == 0 ? Cx(1.0) : Cx(-1.0));
    }

  SeriesMat etam1 = F0.mul(delta1).mul(F0.inverse());

  Potential eta;
  eta.n = n;
  eta.base_point = 0.0;
  std::vector<std::vector<RationalFn>> M(d, std::vector<RationalFn>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      std::vector<Cx> coeffs(ord + 1);
      for (int a = 0; a <= ord; ++a) coeffs[a] = etam1.at(i, j).at(a, 0);
      Poly p(coeffs);
      p.trim(1e-13 * std::max(1.0, etam1.norm()));
      M[i][j] = RationalFn::poly(p);
    }
  eta.terms[-1] = std::move(M);
  return eta;
}

CMat f01_closed_form(const Poly& a13, const Poly& a14, const Poly& a34, Cx z, double quad_target) {
  Poly phi_poly = a34.antiderivative();
  auto phi = [&](Cx s) { return phi_poly.eval(s); };
  auto ib13 = [&](Cx s) { return a13.eval(s) * std::cos(phi(s)) + a14.eval(s) * std::sin(phi(s)); };
  auto ib14 = [&](Cx s) { return -a13.eval(s) * std::sin(phi(s)) + a14.eval(s) * std::cos(phi(s)); };
  Cx b13 = integrate_segment(ib13, 0.0, z, quad_target);
  Cx b14 = integrate_segment(ib14, 0.0, z, quad_target);
  Cx ph = phi(z);
  CMat H = CMat::Identity(4, 4);
  Cx q = 0.5 * (b13 * b13 + b14 * b14);
  H(0, 0) = 1.0 + q;
  H(0, 1) = q;
  H(1, 0) = -q;
  H(1, 1) = 1.0 - q;
  H(0, 2) = b13;
  H(0, 3) = b14;
  H(1, 2) = -b13;
  H(1, 3) = -b14;
  H(2, 0) = b13;
  H(2, 1) = b13;
  H(3, 0) = b14;
  H(3, 1) = b14;
  CMat R = CMat::Identity(4, 4);
  R(2, 2) = std::cos(ph);
  R(2, 3) = std::sin(ph);
  R(3, 2) = -std::sin(ph);
  R(3, 3) = std::cos(ph);
  return H * R;
}

CMat cartan_map(const CMat& g) {
  MembershipReport rep = validate_membership(g, Membership::Group, 1e-8);
  if (!rep.ok) throw Error("cartan_map: input is not in the group");
  CMat D = sigma_conjugator((int)g.rows());
  return g * D * g.inverse() * D;
}

CompactDualResult compact_dual_frame(const LoopMat& F, int trunc) {
  if (trunc < 0) trunc = Config::get().trunc_default;
  IwasawaResult iw = iwasawa_factorize(F, IwasawaForm::Compact, trunc);
  if (!iw.ok) throw Error("compact_dual_frame: compact Iwasawa did not converge");
  CompactDualResult out;
  out.FU = iw.pair.left;
  out.Wplus = iw.pair.right;
  out.residual = iw.pair.residual;
  FactorPair bf = birkhoff_factorize(F, trunc);
  FactorPair bu = birkhoff_factorize(out.FU, trunc);
  out.minus_part_defect = (bf.left - bu.left).norm();
  return out;
}

PotentialFlags classify_potential(const Potential& eta) {
  PotentialFlags flags;
  const int n = eta.n;
  CMat I13 = CMat::Identity(4, 4);
  I13(0, 0) = -1.0;
  std::vector<Cx> samples;
  for (int k = 0; k < 20; ++k)
    samples.push_back(Cx(std::cos(0.7 * k + 0.13), std::sin(1.3 * k + 0.41)) * (0.3 + 0.04 * k));

  double nullres = 0.0, nilres = 0.0, isores = 0.0;
  int rank = 0;
  std::vector<CMat> bs;
  for (Cx z : samples) {
    CMat B = eta.b1hat_eval(z);
    bs.push_back(B);
    double sc = std::max(1.0, B.cwiseAbs().maxCoeff());
    nullres = std::max(nullres, (B.transpose() * I13 * B).cwiseAbs().maxCoeff() / (sc * sc));
    CMat M = eta.eval_term(-1, z);
    CMat M3 = M * M * M;
    nilres = std::max(nilres, M3.cwiseAbs().maxCoeff() / (sc * sc * sc));
    isores = std::max(isores, (B * B.transpose()).cwiseAbs().maxCoeff() / (sc * sc));
    Eigen::JacobiSVD<CMat> svd(B);
    int r = 0;
    for (int i = 0; i < std::min<int>(4, n); ++i)
      if (svd.singularValues()(i) > 1e-8 * std::max(svd.singularValues()(0), 1e-30)) ++r;
    rank = std::max(rank, r);
  }
  flags.null_ok = nullres < 1e-9;
  flags.nilpotent_ok = nilres < 1e-9;
  flags.isotropic_pairs = isores < 1e-9 && rank >= 1;
  flags.rank = rank;

  // minimal pattern: a constant real lightlike u with u^t I13 B(z) = 0,
  // and the remaining rows paired as (g, ig)
  {
    CMat A(4, 20 * n);
    for (int s = 0; s < 20; ++s) A.middleCols(s * n, n) = (I13 * bs[s]).conjugate();
    // u^t I13 B = 0  <=>  (I13 B)^t u = 0; stack over samples
    CMat St(20 * n, 4);
    for (int s = 0; s < 20; ++s) St.middleRows(s * n, n) = (I13 * bs[s]).transpose();
    Eigen::JacobiSVD<CMat> svd(St, Eigen::ComputeFullV);
    CVec u = svd.matrixV().col(3);
    double smin = svd.singularValues()(3);
    double smax = std::max(svd.singularValues()(0), 1e-30);
    flags.minimal_pattern = false;
    if (smin < 1e-9 * smax) {
      // phase-align and check that u is real and lightlike
      int imax = 0;
      u.cwiseAbs().maxCoeff(&imax);
      u /= u(imax) / std::abs(u(imax));
      bool realu = u.imag().cwiseAbs().maxCoeff() < 1e-8;
      Cx uu = -u(0) * u(0) + u(1) * u(1) + u(2) * u(2) + u(3) * u(3);
      if (realu && std::abs(uu) < 1e-8) {
        // remaining-row pairing after mapping u to (1,-1,0,0)
        try {
          B1Normalization nb = normalize_B1(bs[5]);
          CMat Bc = nb.A * bs[5];
          double pair_defect = (Bc.row(3) - Cx(0.0, (double)nb.branch) * Bc.row(2)).norm();
          flags.minimal_pattern = pair_defect < 1e-7 * std::max(1.0, Bc.norm());
        } catch (const Error&) {
          flags.minimal_pattern = false;
        }
      }
    }
  }

  // vacuum: constant degree -1 coefficient with [B, conj B] = 0
  if (eta.terms.size() == 1 && eta.terms.count(-1)) {
    CMat B0 = eta.eval_term(-1, samples[0]);
    bool constant = true;
    for (Cx z : samples)
      if ((eta.eval_term(-1, z) - B0).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, B0.cwiseAbs().maxCoeff()))
        constant = false;
    if (constant) {
      CMat comm = B0 * B0.conjugate() - B0.conjugate() * B0;
      flags.vacuum = comm.cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, B0.cwiseAbs().maxCoeff());
    }
  }
  return flags;
}

HomogeneousFrame homogeneous_frame(const CMat& B, const CMat& A) {
  const int d = (int)B.rows();
  // [lambda^{-1}B + A, lambda conj(B) + conj(A)] = 0 as a Laurent identity
  CMat Bc = B.conjugate(), Ac = A.conjugate();
  CMat c_m1 = B * Ac - Ac * B;
  CMat c_0 = B * Bc - Bc * B + A * Ac - Ac * A;
  CMat c_p1 = A * Bc - Bc * A;
  double viol = std::max({c_m1.cwiseAbs().maxCoeff(), c_0.cwiseAbs().maxCoeff(),
                          c_p1.cwiseAbs().maxCoeff()});
  if (viol > 1e-10 * std::max(1.0, B.cwiseAbs().maxCoeff() + A.cwiseAbs().maxCoeff()))
    throw Error("homogeneous_frame: commutator condition violated, " + std::to_string(viol));
  HomogeneousFrame hf;
  hf.B = B;
  hf.A = A;
  hf.dim = d;
  return hf;
}

CMat HomogeneousFrame::eval(Cx z, Cx lambda) const {
  CMat X = z * (B / lambda + A) + std::conj(z) * (lambda * B.conjugate() + A.conjugate());
  return X.exp();
}

}  // namespace willoop
