#include "willoop/loops.hpp"
#include "willoop/lorentz.hpp"
#include "willoop/config.hpp"

#include <Eigen/SVD>
#include <Eigen/LU>
#include <Eigen/Eigenvalues>
#include <Eigen/Cholesky>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

namespace willoop {

LoopMat LoopMat::identity(int dim) {
  LoopMat g(dim);
  g.set_coeff(0, CMat::Identity(dim, dim));
  return g;
}

LoopMat LoopMat::single(int deg, const CMat& X) {
  LoopMat g((int)X.rows());
  g.set_coeff(deg, X);
  return g;
}

void LoopMat::ensure_range(int j) {
  if (hi_ < lo_) {
    lo_ = hi_ = j;
    coef_.assign(1, CMat::Zero(dim_, dim_));
    return;
  }
  while (j < lo_) {
    coef_.insert(coef_.begin(), CMat::Zero(dim_, dim_));
    --lo_;
  }
  while (j > hi_) {
    coef_.push_back(CMat::Zero(dim_, dim_));
    ++hi_;
  }
}

CMat LoopMat::coeff(int j) const {
  if (hi_ < lo_ || j < lo_ || j > hi_) return CMat::Zero(dim_, dim_);
  return coef_[j - lo_];
}

void LoopMat::set_coeff(int j, const CMat& X) {
  if (dim_ == 0) dim_ = (int)X.rows();
  ensure_range(j);
  coef_[j - lo_] = X;
}

void LoopMat::add_coeff(int j, const CMat& X) {
  if (dim_ == 0) dim_ = (int)X.rows();
  ensure_range(j);
  coef_[j - lo_] += X;
}

CMat LoopMat::eval(Cx lambda) const {
  CMat M = CMat::Zero(dim_, dim_);
  Cx p = std::pow(lambda, lo());
  for (int j = lo(); j <= hi(); ++j) {
    M += coeff(j) * p;
    p *= lambda;
  }
  return M;
}

LoopMat LoopMat::mul(const LoopMat& o, int trunc, double* tail) const {
  if (dim_ != o.dim_) throw DimensionMismatch("loop mul: dimension mismatch");
  LoopMat r(dim_);
  double lost = 0.0;
  for (int j = lo() + o.lo(); j <= hi() + o.hi(); ++j) {
    CMat c = CMat::Zero(dim_, dim_);
    for (int k = std::max(lo(), j - o.hi()); k <= std::min(hi(), j - o.lo()); ++k)
      c += coeff(k) * o.coeff(j - k);
    if (std::abs(j) <= trunc)
      r.add_coeff(j, c);
    else
      lost = std::max(lost, c.cwiseAbs().maxCoeff());
  }
  if (tail) *tail = lost;
  if (r.empty()) r.set_coeff(0, CMat::Zero(dim_, dim_));
  return r;
}

LoopMat LoopMat::inverse(int trunc, double* tail) const {
  int span = hi() - lo() + 1;
  int K = 64;
  while (K < 4 * (span + trunc) + 8 && K < 4096) K *= 2;
  std::vector<CMat> vals(K);
  for (int k = 0; k < K; ++k) {
    Cx lam = std::exp(Cx(0.0, 2.0 * PI * k / K));
    CMat M = eval(lam);
    Eigen::PartialPivLU<CMat> lu(M);
    if (!(lu.rcond() > 1e-14)) throw Error("loop inverse: singular value at a circle sample");
    vals[k] = lu.inverse();
  }
  LoopMat r(dim_);
  double tail_norm = 0.0;
  for (int j = -K / 2; j < K / 2; ++j) {
    CMat c = CMat::Zero(dim_, dim_);
    for (int k = 0; k < K; ++k) c += vals[k] * std::exp(Cx(0.0, -2.0 * PI * k * j / K));
    c /= (double)K;
    double mag = c.cwiseAbs().maxCoeff();
    if (std::abs(j) <= trunc) {
      if (mag > 1e-300) r.add_coeff(j, c);
    } else {
      tail_norm = std::max(tail_norm, mag);
    }
  }
  if (tail) *tail = tail_norm;
  if (r.empty()) r.set_coeff(0, CMat::Zero(dim_, dim_));
  return r.trimmed(0.0);
}

LoopMat LoopMat::tau() const {
  LoopMat r(dim_);
  for (int j = lo(); j <= hi(); ++j) r.set_coeff(-j, coeff(j).conjugate());
  return r;
}

LoopMat LoopMat::tau_compact() const {
  CMat J = minkowski_metric(dim_);
  LoopMat r(dim_);
  for (int j = lo(); j <= hi(); ++j) r.set_coeff(-j, J * coeff(j).conjugate() * J);
  return r;
}

LoopMat LoopMat::transpose() const {
  LoopMat r(dim_);
  for (int j = lo(); j <= hi(); ++j) r.set_coeff(j, coeff(j).transpose());
  return r;
}

LoopMat LoopMat::scaled(Cx s) const {
  LoopMat r = *this;
  for (auto& c : r.coef_) c *= s;
  return r;
}

LoopMat LoopMat::operator-(const LoopMat& o) const {
  LoopMat r = *this;
  for (int j = o.lo(); j <= o.hi(); ++j) r.add_coeff(j, -o.coeff(j));
  return r;
}

LoopMat LoopMat::operator+(const LoopMat& o) const {
  LoopMat r = *this;
  for (int j = o.lo(); j <= o.hi(); ++j) r.add_coeff(j, o.coeff(j));
  return r;
}

LoopMat LoopMat::trimmed(double tol) const {
  LoopMat r(dim_);
  for (int j = lo(); j <= hi(); ++j)
    if (coeff(j).cwiseAbs().maxCoeff() > tol) r.set_coeff(j, coeff(j));
  if (r.empty()) r.set_coeff(0, CMat::Zero(dim_, dim_));
  return r;
}

double LoopMat::norm() const {
  double s = 0.0;
  for (int j = lo(); j <= hi(); ++j) s = std::max(s, coeff(j).cwiseAbs().maxCoeff());
  return s;
}

LoopValidation validate_loop(const LoopMat& g, double tol) {
  if (tol < 0) tol = Config::get().tol_loop;
  LoopValidation v;
  const int dim = g.dim();
  CMat D = sigma_conjugator(dim);
  CMat J = minkowski_metric(dim);
  double sc = std::max(1.0, g.norm());
  for (int j = g.lo(); j <= g.hi(); ++j) {
    CMat X = g.coeff(j);
    double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    v.twist_res = std::max(v.twist_res, (D * X * D - sgn * X).cwiseAbs().maxCoeff());
    v.reality_res = std::max(v.reality_res, (X.conjugate() - g.coeff(-j)).cwiseAbs().maxCoeff());
  }
  for (int k = 0; k < 16; ++k) {
    Cx lam = std::exp(Cx(0.0, 2.0 * PI * k / 16.0));
    CMat M = g.eval(lam);
    v.group_res = std::max(v.group_res, (M.transpose() * J * M - J).cwiseAbs().maxCoeff());
  }
  v.twist_ok = v.twist_res < tol * sc;
  v.reality_ok = v.reality_res < tol * sc;
  v.group_ok = v.group_res < tol * sc * sc;
  return v;
}

std::vector<std::pair<int, int>> twist_entries(int dim, int parity) {
  std::vector<std::pair<int, int>> e;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      bool diag_block = (r < 4) == (c < 4);
      if ((parity % 2 == 0) == diag_block) e.emplace_back(r, c);
    }
  return e;
}

const char* cell_name(CellVariant v) {
  switch (v) {
    case CellVariant::BigCell: return "BigCell";
    case CellVariant::SecondCell: return "SecondCell";
    case CellVariant::NearBoundary: return "NearBoundary";
  }
  return "?";
}

CMat second_cell_marker(int dim) {
  CMat Q = CMat::Identity(dim, dim);
  Q(0, 0) = -1.0;
  Q(4, 4) = -1.0;
  return Q;
}

FactorPair birkhoff_factorize(const LoopMat& g, int trunc) {
  if (trunc < 0) trunc = Config::get().trunc_default;
  const int dim = g.dim();
  const int T = trunc;
  // unknown u = g_+^{-1}, a twisted plus loop; equations (g u)_j = 0 for
  // j >= 1 and (g u)_0 = I are complex-linear in the entries of u.
  std::vector<std::vector<std::pair<int, int>>> pat(T + 1);
  std::vector<int> offset(T + 2, 0);
  for (int k = 0; k <= T; ++k) {
    pat[k] = twist_entries(dim, k % 2);
    offset[k + 1] = offset[k] + (int)pat[k].size();
  }
  int ncols = offset[T + 1];
  int jmax = g.hi() + T;
  int nrows = (jmax + 1) * dim * dim;
  CMat A = CMat::Zero(nrows, ncols);
  CVec b = CVec::Zero(nrows);
  auto row_of = [&](int j, int r, int c) { return j * dim * dim + r * dim + c; };
  for (int j = 0; j <= jmax; ++j)
    for (int k = 0; k <= T; ++k) {
      CMat gk = g.coeff(j - k);
      if (gk.cwiseAbs().maxCoeff() == 0.0) continue;
      for (int e = 0; e < (int)pat[k].size(); ++e) {
        auto [m, c] = pat[k][e];
        for (int r = 0; r < dim; ++r)
          if (gk(r, m) != Cx(0.0)) A(row_of(j, r, c), offset[k] + e) += gk(r, m);
      }
    }
  for (int r = 0; r < dim; ++r) b(row_of(0, r, r)) = 1.0;

  Eigen::ColPivHouseholderQR<CMat> qr(A);
  CVec x = qr.solve(b);
  double lin_res = (A * x - b).norm();

  LoopMat u(dim);
  for (int k = 0; k <= T; ++k) {
    CMat uk = CMat::Zero(dim, dim);
    for (int e = 0; e < (int)pat[k].size(); ++e) uk(pat[k][e].first, pat[k][e].second) = x(offset[k] + e);
    if (uk.cwiseAbs().maxCoeff() > 0) u.set_coeff(k, uk);
  }
  u = u.trimmed(1e-300);
  if (u.empty() || std::abs(u.coeff(0).determinant()) < 1e-10)
    throw NotInBigCell("birkhoff: constant term of the plus factor is singular");

  FactorPair fp;
  double tail1 = 0.0, tail2 = 0.0;
  fp.left = g.mul(u, T + g.hi(), &tail1).trimmed(1e-15);
  LoopMat gm(dim);
  for (int j = fp.left.lo(); j < 0; ++j) gm.set_coeff(j, fp.left.coeff(j));
  gm.set_coeff(0, CMat::Identity(dim, dim));
  fp.left = gm;
  fp.right = u.inverse(T + g.hi() - g.lo(), &tail2);
  fp.tail = std::max({tail1, tail2, lin_res});
  double res = 0.0;
  for (int k = 0; k < 32; ++k) {
    Cx lam = std::exp(Cx(0.0, 2.0 * PI * (k + 0.5) / 32.0));
    res = std::max(res, (fp.left.eval(lam) * fp.right.eval(lam) - g.eval(lam)).cwiseAbs().maxCoeff());
  }
  fp.residual = res;
  if (res > std::max(1e-6 * std::max(1.0, g.norm()), 1e3 * Config::get().tol_fact) || !std::isfinite(res))
    throw NotInBigCell("birkhoff: residual " + std::to_string(res));
  return fp;
}

namespace {

// Candidate plus factor for the real-linear Iwasawa reduction
//   L conj((g v)_{-j}) L = (g v)_j Om   for all j.
// L, Om are diagonal sign matrices selecting the real form and the cell.
struct IwasawaReduction {
  double sigma = 1e300;
  LoopMat v;
  bool valid = false;
};

IwasawaReduction solve_reduction(const LoopMat& g, const CMat& L, const CMat& Om, int T) {
  const int dim = g.dim();
  std::vector<std::vector<std::pair<int, int>>> pat(T + 1);
  std::vector<int> offset(T + 2, 0);
  for (int k = 0; k <= T; ++k) {
    pat[k] = twist_entries(dim, k % 2);
    offset[k + 1] = offset[k] + (int)pat[k].size();
  }
  const int P = offset[T + 1];
  const int jmax = std::max(-g.lo(), g.hi() + T);
  const int ncr = (jmax + 1) * dim * dim;
  RMat A = RMat::Zero(2 * ncr, 2 * P);
  auto row_of = [&](int j, int r, int c) { return j * dim * dim + r * dim + c; };
  for (int j = 0; j <= jmax; ++j)
    for (int k = 0; k <= T; ++k) {
      CMat gjk = g.coeff(j - k);
      CMat gmjk = g.coeff(-j - k);
      bool h1 = gjk.cwiseAbs().maxCoeff() > 0.0;
      bool h2 = gmjk.cwiseAbs().maxCoeff() > 0.0;
      if (!h1 && !h2) continue;
      for (int e = 0; e < (int)pat[k].size(); ++e) {
        auto [m, c] = pat[k][e];
        int col = offset[k] + e;
        for (int r = 0; r < dim; ++r) {
          int rr = row_of(j, r, c);
          if (h1 && gjk(r, m) != Cx(0.0)) {
            Cx a = -gjk(r, m) * Om(c, c);  // linear part, times (x + iy)
            A(2 * rr, 2 * col) += a.real();
            A(2 * rr, 2 * col + 1) += -a.imag();
            A(2 * rr + 1, 2 * col) += a.imag();
            A(2 * rr + 1, 2 * col + 1) += a.real();
          }
          if (h2 && gmjk(r, m) != Cx(0.0)) {
            Cx a = L(r, r) * std::conj(gmjk(r, m)) * L(c, c);  // times conj(x + iy)
            A(2 * rr, 2 * col) += a.real();
            A(2 * rr, 2 * col + 1) += a.imag();
            A(2 * rr + 1, 2 * col) += a.imag();
            A(2 * rr + 1, 2 * col + 1) += -a.real();
          }
        }
      }
    }

  RMat G = A.transpose() * A;
  Eigen::SelfAdjointEigenSolver<RMat> es(G);
  const RVec& ev = es.eigenvalues();  // ascending
  double emax = std::max(ev(2 * P - 1), 1e-300);

  IwasawaReduction red;
  LoopMat best(dim);
  double best_score = 1e300, best_sig = 1e300;
  RVec accum = RVec::Zero(2 * P);
  const int ncand = std::min(2 * P, 30);
  for (int t = 0; t < ncand; ++t) {
    RVec base = es.eigenvectors().col(t);
    accum += base;
    for (int which = 0; which < 2; ++which) {
      RVec x = (which == 0) ? base : RVec(accum / accum.norm());
      LoopMat v(dim);
      for (int k = 0; k <= T; ++k) {
        CMat vk = CMat::Zero(dim, dim);
        for (int e = 0; e < (int)pat[k].size(); ++e) {
          int col = offset[k] + e;
          vk(pat[k][e].first, pat[k][e].second) = Cx(x(2 * col), x(2 * col + 1));
        }
        if (vk.cwiseAbs().maxCoeff() > 0) v.set_coeff(k, vk);
      }
      v = v.trimmed(1e-300);
      if (v.empty()) continue;
      double worst = 1e300;
      for (int kk = 0; kk < 8 && worst > 1e-7; ++kk) {
        Cx lam = std::exp(Cx(0.0, 2.0 * PI * kk / 8.0));
        CMat M = v.eval(lam);
        double nf = M.norm() / std::sqrt((double)dim);
        if (nf == 0.0) {
          worst = 0.0;
          break;
        }
        worst = std::min(worst, std::abs((M / nf).determinant()));
      }
      if (worst < 1e-7) continue;
      double sig = (A * x).norm();
      double score = sig / worst;
      if (score < best_score) {
        best_score = score;
        best_sig = sig;
        best = v;
      }
    }
    if (std::sqrt(std::abs(ev(t)) / emax) > 1e-4 && best_score < 1e290) break;
  }
  if (best_score < 1e290) {
    red.v = best;
    red.sigma = best_sig;
    red.valid = true;
  } else {
    red.sigma = std::sqrt(std::abs(ev(0)) / emax);
  }
  return red;
}

// Factor a real symmetric matrix with signature (1, m-1) as C^t I_{1,m-1} C.
CMat factor_lorentz_gram(const CMat& S) {
  const int m = (int)S.rows();
  RMat Sr = S.real();
  Eigen::SelfAdjointEigenSolver<RMat> es(Sr);
  RVec ev = es.eigenvalues();
  RMat Q = es.eigenvectors();
  int neg = 0, negidx = 0;
  for (int i = 0; i < m; ++i)
    if (ev(i) < 0) {
      ++neg;
      negidx = i;
    }
  if (neg != 1) throw Error("gram factorization: unexpected signature");
  std::vector<int> perm(m);
  perm[0] = negidx;
  int p = 1;
  for (int i = 0; i < m; ++i)
    if (i != negidx) perm[p++] = i;
  RMat C(m, m);
  for (int i = 0; i < m; ++i) C.row(i) = std::sqrt(std::abs(ev(perm[i]))) * Q.col(perm[i]).transpose();
  return C.cast<Cx>();
}

CMat factor_spd_gram(const CMat& S) {
  RMat Sr = S.real();
  Eigen::LLT<RMat> llt(Sr);
  if (llt.info() != Eigen::Success) throw Error("gram factorization: not positive definite");
  RMat Lf = llt.matrixL();
  return CMat(Lf.transpose().cast<Cx>());
}

}  // namespace

IwasawaResult iwasawa_factorize(const LoopMat& g, IwasawaForm form, int trunc) {
  if (trunc < 0) trunc = Config::get().trunc_default;
  const int dim = g.dim();
  const auto& cfg = Config::get();
  CMat Id = CMat::Identity(dim, dim);
  CMat J = minkowski_metric(dim);
  CMat L = (form == IwasawaForm::Compact) ? J : Id;

  {
    LoopValidation val = validate_loop(g);
    if (!val.twist_ok) throw Error("iwasawa: input loop violates the twist condition");
    if (!val.group_ok) throw Error("iwasawa: input loop is not group-valued");
  }

  IwasawaResult out;
  IwasawaReduction big = solve_reduction(g, L, Id, trunc);
  out.cell.sigma_big = big.sigma;

  auto build_factors = [&](const LoopMat& v) -> bool {
    double tail = 0.0;
    LoopMat F = g.mul(v, 2 * trunc + g.hi() - g.lo(), &tail);
    LoopMat Fs(dim);
    for (int j = F.lo(); j <= F.hi(); ++j) {
      CMat half = (form == IwasawaForm::Compact)
                      ? CMat(0.5 * (F.coeff(j) + J * F.coeff(-j).conjugate() * J))
                      : CMat(0.5 * (F.coeff(j) + F.coeff(-j).conjugate()));
      Fs.set_coeff(j, half);
    }
    Fs = Fs.trimmed(1e-14 * std::max(1.0, Fs.norm()));
    // Gram matrix of the candidate: constant for a true solution
    LoopMat Sloop = v.transpose().mul(LoopMat::single(0, J).mul(v));
    CMat S = Sloop.coeff(0);
    double offc = 0.0;
    for (int j = Sloop.lo(); j <= Sloop.hi(); ++j)
      if (j != 0) offc = std::max(offc, Sloop.coeff(j).cwiseAbs().maxCoeff());
    if (offc > 1e-5 * std::max(1.0, S.cwiseAbs().maxCoeff())) return false;
    CMat C = CMat::Zero(dim, dim);
    try {
      if (form == IwasawaForm::Noncompact) {
        C.topLeftCorner(4, 4) = factor_lorentz_gram(S.topLeftCorner(4, 4));
        C.bottomRightCorner(dim - 4, dim - 4) = factor_spd_gram(S.bottomRightCorner(dim - 4, dim - 4));
      } else {
        CMat Di = CMat::Identity(4, 4);
        Di(0, 0) = I_UNIT;
        CMat DiInv = CMat::Identity(4, 4);
        DiInv(0, 0) = -I_UNIT;
        CMat s4p = DiInv.transpose() * S.topLeftCorner(4, 4) * DiInv;
        if (s4p.imag().cwiseAbs().maxCoeff() > 1e-6 * std::max(1.0, s4p.real().cwiseAbs().maxCoeff()))
          return false;
        CMat R4 = factor_spd_gram(s4p.real().cast<Cx>());
        C.topLeftCorner(4, 4) = DiInv * R4 * Di;
        C.bottomRightCorner(dim - 4, dim - 4) = factor_spd_gram(S.bottomRightCorner(dim - 4, dim - 4));
      }
    } catch (const Error&) {
      return false;
    }
    CMat Cinv = C.inverse();
    LoopMat F2 = Fs.mul(LoopMat::single(0, Cinv));
    CMat F1 = F2.eval(1.0);
    CMat flip = CMat::Identity(dim, dim);
    if (form == IwasawaForm::Noncompact) {
      if (F1(0, 0).real() < 0) flip(0, 0) = -1.0;
      if ((F1 * flip).determinant().real() < 0) flip(1, 1) = -1.0;
    } else {
      if (F1.determinant().real() < 0) flip(1, 1) = -1.0;
    }
    F2 = F2.mul(LoopMat::single(0, flip));
    double tail2 = 0.0;
    LoopMat vinv = v.inverse(trunc + 4, &tail2);
    // F = g v C^{-1} flip, so F_+ = flip C v^{-1}
    LoopMat Fplus = LoopMat::single(0, CMat(flip * C)).mul(vinv, trunc + 4);

    // gauge: polar-normalize the constant term of F_+
    CMat v0 = Fplus.coeff(0);
    if (std::abs(v0.determinant()) > 1e-10) {
      try {
        CMat s0 = v0.conjugate().inverse() * v0;
        CMat X = CMat(s0.log()) * Cx(0.0, -0.5);  // s0 = exp(2iX)
        CMat k0 = v0 * CMat(CMat(X * Cx(0.0, -1.0)).exp());
        if (k0.imag().cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, k0.real().cwiseAbs().maxCoeff()) &&
            (k0.transpose() * J * k0 - J).cwiseAbs().maxCoeff() < 1e-6) {
          CMat k0r = k0.real().cast<Cx>();
          F2 = F2.mul(LoopMat::single(0, k0r));
          Fplus = LoopMat::single(0, CMat(k0r.inverse())).mul(Fplus, trunc + 4);
        }
      } catch (...) {
        // keep the un-normalized gauge
      }
    }

    double res = 0.0;
    for (int k = 0; k < 32; ++k) {
      Cx lam = std::exp(Cx(0.0, 2.0 * PI * (k + 0.37) / 32.0));
      res = std::max(res, (F2.eval(lam) * Fplus.eval(lam) - g.eval(lam)).cwiseAbs().maxCoeff());
    }
    if (!(res < std::max(1e-6 * std::max(1.0, g.norm()), 1e3 * cfg.tol_fact)) || !std::isfinite(res))
      return false;
    out.pair.left = F2.trimmed(1e-15);
    out.pair.right = Fplus.trimmed(1e-15);
    out.pair.residual = res;
    out.pair.tail = std::max(tail, tail2);
    return true;
  };

  double scale = std::max(1.0, g.norm());
  if (big.valid && big.sigma < 1e-6 * scale && build_factors(big.v)) {
    out.ok = true;
    out.cell.variant = CellVariant::BigCell;
    out.cell.witness = CMat::Identity(dim, dim);
    return out;
  }

  if (form == IwasawaForm::Compact) {
    out.ok = false;
    out.cell.variant = CellVariant::NearBoundary;
    out.cell.note = "compact Iwasawa reduction did not converge";
    return out;
  }

  CMat Q0 = second_cell_marker(dim);
  IwasawaReduction sec = solve_reduction(g, Id, Q0, trunc);
  out.cell.sigma_second = sec.sigma;
  if (sec.valid && sec.sigma < 1e-6 * scale) {
    // E = g v satisfies tau(E) = E Q0, so the cell witness (tau E)^{-1} E is Q0
    LoopMat E = g.mul(sec.v);
    CMat E1 = E.eval(1.0);
    out.ok = false;
    out.cell.variant = CellVariant::SecondCell;
    out.cell.witness = E1.conjugate().inverse() * E1;
    out.cell.note = "no factorization with a real left factor in the second cell";
    return out;
  }

  out.ok = false;
  out.cell.variant = CellVariant::NearBoundary;
  out.cell.note = "both open-cell reductions degenerate";
  return out;
}

}  // namespace willoop
