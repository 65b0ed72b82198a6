#include "willoop/surface.hpp"
#include "willoop/lorentz.hpp"
#include "willoop/config.hpp"
#include "willoop/quadrature.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace willoop {

JetVec CanonicalData::normal_project(const JetVec& X) const {
  TSeries a = minkowski_inner(X, N);
  TSeries b = minkowski_inner(X, Y);
  TSeries c = minkowski_inner(X, Yzb) * 2.0;
  TSeries d = minkowski_inner(X, Yz) * 2.0;
  JetVec out = X;
  out += Y * a;
  out += N * b;
  out += Yz * (-c);
  out += Yzb * (-d);
  return out;
}

CanonicalData canonical_at(const JetProvider& p, Cx z, int order) {
  const auto& cfg = Config::get();
  if (!p.in_domain(z)) throw Error("canonical_at: point outside provider domain");
  CanonicalData cd;
  cd.z = z;
  cd.order = order;
  JetVec raw = p.lift_jets(z, order + 1);
  const int dim = raw.dim();

  TSeries rz_rz = minkowski_inner(raw.dz(), raw.dz());
  TSeries e2u = minkowski_inner(raw.dz(), raw.dw()) * 2.0;
  double scale = std::abs(e2u.value());
  cd.conf_defect = std::abs(rz_rz.value()) / std::max(scale, 1e-30);
  double conf_tol = p.exact() ? cfg.tol_conf_exact : cfg.tol_conf_fd;
  if (cd.conf_defect > conf_tol)
    throw Error("canonical_at: lift is not conformal, defect " + std::to_string(cd.conf_defect));
  if (!(e2u.value().real() > cfg.tol_null))
    throw NotImmersed("canonical_at: <Y_z, Y_zbar> <= 0 at the point");

  TSeries f = e2u.sqrt().recip();
  JetVec Y(dim, order);
  for (int i = 0; i < dim; ++i) Y.c[i] = raw.c[i].truncated(order) * f.truncated(order);
  cd.Y = Y;
  cd.Yz = Y.dz();
  cd.Yzb = Y.dw();

  JetVec Yzzb = cd.Yz.dw();
  TSeries q = minkowski_inner(Yzzb, Yzzb);
  cd.N = Yzzb * Cx(2.0) + Y * (q * 2.0);

  JetVec Yzz = cd.Yz.dz();
  cd.s = minkowski_inner(Yzz, cd.N) * 2.0;
  cd.kappa = cd.normal_project(Yzz);

  // normal frame by Gram-Schmidt from fixed ambient seeds
  const int n = dim - 4;
  int ord_psi = order - 2;
  std::vector<int> seeds;
  for (int i = 4; i < dim; ++i) seeds.push_back(i);
  for (int i = 1; i < 4; ++i) seeds.push_back(i);
  seeds.push_back(0);
  for (int idx : seeds) {
    if ((int)cd.psi.size() == n) break;
    JetVec seed(dim, ord_psi);
    seed.c[idx] = TSeries::constant(1.0, ord_psi);
    JetVec x = cd.normal_project(seed);
    for (const auto& prev : cd.psi) x += prev * (-minkowski_inner(x, prev));
    TSeries nn = minkowski_inner(x, x);
    if (nn.value().real() < 1e-6) continue;  // degenerate seed, try the next axis
    cd.psi.push_back(x * nn.sqrt().recip());
  }
  if ((int)cd.psi.size() != n) throw Error("canonical_at: could not build a normal frame");

  JetVec Dzbk = cd.cov_zb(cd.kappa);
  cd.kcomp.resize(n);
  cd.betacomp.resize(n);
  cd.bconn.assign(n, std::vector<TSeries>(n));
  cd.k2 = TSeries::constant(0.0, std::max(0, ord_psi - 1));
  for (int j = 0; j < n; ++j) {
    cd.kcomp[j] = minkowski_inner(cd.kappa, cd.psi[j]);
    cd.betacomp[j] = minkowski_inner(Dzbk, cd.psi[j]);
    for (int l = 0; l < n; ++l) cd.bconn[j][l] = minkowski_inner(cd.psi[j].dz(), cd.psi[l]);
    cd.k2 += (cd.kcomp[j] * cd.kcomp[j].conj_swap()).truncated(cd.k2.order());
  }
  return cd;
}

HopfData hopf_schwarzian(const JetProvider& p, Cx z, int order) {
  CanonicalData cd = canonical_at(p, z, order);
  HopfData h;
  h.s = cd.s.value();
  h.kappa = cd.kappa.value();
  const int n = (int)cd.psi.size();
  h.k.resize(n);
  h.beta.resize(n);
  h.bconn = CMat::Zero(n, n);
  h.psi = CMat::Zero(cd.Y.dim(), n);
  for (int j = 0; j < n; ++j) {
    h.k[j] = cd.kcomp[j].value();
    h.beta[j] = cd.betacomp[j].value();
    h.psi.col(j) = cd.psi[j].value();
    for (int l = 0; l < n; ++l) h.bconn(j, l) = cd.bconn[j][l].value();
  }
  return h;
}

HopfData kappa_transform(const HopfData& h, Cx dw_dz) {
  if (dw_dz == Cx(0.0)) throw Error("kappa_transform: zero derivative");
  Cx dz_dw = 1.0 / dw_dz;
  Cx factor = dz_dw * dz_dw / std::abs(dz_dw);
  HopfData out = h;
  out.kappa = h.kappa * factor;
  for (auto& kj : out.k) kj *= factor;
  for (auto& bj : out.beta) bj *= factor;  // same holomorphic weight in kappa's components
  out.s = h.s * dz_dw * dz_dw;             // linear coordinate change: no Schwarzian derivative term
  return out;
}

ResidualReport residuals_at(const JetProvider& p, Cx z, int order) {
  CanonicalData cd = canonical_at(p, z, order);
  ResidualReport rep;
  auto vnorm = [](const JetVec& v) {
    double m = 0.0;
    for (const auto& comp : v.c) m = std::max(m, std::abs(comp.value()));
    return m;
  };

  JetVec Yzz = cd.Yz.dz();
  JetVec Yzzb = cd.Yz.dw();
  TSeries kk = minkowski_inner(cd.kappa, cd.kappa.conj_swap());
  JetVec Dzbk = cd.cov_zb(cd.kappa);

  JetVec r1 = Yzz + cd.Y * (cd.s * Cx(0.5)) - cd.kappa;
  JetVec r2 = Yzzb + cd.Y * kk - cd.N * Cx(0.5);
  JetVec r3 = cd.N.dz() + cd.Yz * (kk * 2.0) + cd.Yzb * cd.s - Dzbk * Cx(2.0);
  rep.structure = std::max({vnorm(r1), vnorm(r2), vnorm(r3)});
  const int n = (int)cd.psi.size();
  for (int j = 0; j < n; ++j) {
    JetVec dpsi(cd.Y.dim(), cd.psi[j].order() - 1);
    for (int l = 0; l < n; ++l) dpsi += cd.psi[l] * cd.bconn[j][l];
    JetVec r4 = cd.psi[j].dz() - dpsi - cd.Y * (minkowski_inner(cd.psi[j], Dzbk) * 2.0) +
                cd.Yzb * (minkowski_inner(cd.psi[j], cd.kappa) * 2.0);
    rep.structure = std::max(rep.structure, vnorm(r4));
  }

  JetVec kbar = cd.kappa.conj_swap();
  JetVec Dzkbar = cd.cov_z(kbar);
  JetVec Dzk = cd.cov_z(cd.kappa);
  TSeries i1 = cd.s.dw() * Cx(0.5) - minkowski_inner(cd.kappa, Dzkbar) * 3.0 -
               minkowski_inner(Dzk, kbar);
  JetVec W = cd.cov_zb(Dzbk) + cd.kappa * (cd.s.conj_swap() * Cx(0.5));
  JetVec Wim = (W - W.conj_swap()) * Cx(0.0, -0.5);
  double ricci = 0.0;
  for (int j = 0; j < n; ++j) {
    JetVec R = cd.cov_zb(cd.cov_z(cd.psi[j])) - cd.cov_z(cd.cov_zb(cd.psi[j])) -
               kbar * (minkowski_inner(cd.psi[j], cd.kappa) * 2.0) +
               cd.kappa * (minkowski_inner(cd.psi[j], kbar) * 2.0);
    ricci = std::max(ricci, vnorm(R));
  }
  rep.gauss_codazzi_ricci = std::max({std::abs(i1.value()), vnorm(Wim), ricci});
  rep.willmore = vnorm(W);
  return rep;
}

EnergyResult willmore_energy(const JetProvider& chart1, const JetProvider* chart2, double target) {
  if (target < 0) target = Config::get().quad_target;
  auto density = [](const JetProvider& p, Cx z) -> double {
    if (!p.in_domain(z)) return 0.0;
    try {
      CanonicalData cd = canonical_at(p, z, 2);
      TSeries kk = minkowski_inner(cd.kappa, cd.kappa.conj_swap());
      return 4.0 * kk.value().real();
    } catch (const Error&) {
      return 0.0;
    }
  };
  EnergyResult out;
  auto f1 = [&](double x, double y) {
    Cx z(x, y);
    if (std::abs(z) > 1.0) return 0.0;
    return density(chart1, z);
  };
  QuadResult q1 = integrate2d(f1, -1.0, 1.0, -1.0, 1.0, target * 0.5);
  auto f2 = [&](double x, double y) {
    Cx w(x, y);
    double r = std::abs(w);
    if (r >= 1.0) return 0.0;
    if (chart2) return density(*chart2, w);
    if (r < 1e-8) return 0.0;
    double r4 = r * r * r * r;
    return density(chart1, 1.0 / w) / r4;
  };
  QuadResult q2 = integrate2d(f2, -1.0, 1.0, -1.0, 1.0, target * 0.5);
  out.value = q1.value + q2.value;
  out.error = q1.error + q2.error;
  out.converged = q1.converged && q2.converged;
  return out;
}

RMat isotropy_residual(const JetProvider& p, Cx z, int max_order) {
  if (max_order > 2) throw Error("isotropy_residual: supports derivative order <= 2");
  CanonicalData cd = canonical_at(p, z, std::max(4, max_order + 2));
  std::vector<JetVec> d(max_order + 1);
  d[0] = cd.kappa;
  for (int j = 1; j <= max_order; ++j) d[j] = cd.cov_z(d[j - 1]);
  RMat out(max_order + 1, max_order + 1);
  for (int j = 0; j <= max_order; ++j)
    for (int l = 0; l <= max_order; ++l) out(j, l) = std::abs(minkowski_inner(d[j], d[l]).value());
  return out;
}

Grid Grid::square(Cx center, double half_width, int n, double eps_exclude) {
  Grid g;
  g.nx = g.ny = std::max(2, n);
  g.hx = g.hy = 2.0 * half_width / (g.nx - 1);
  g.x0 = center.real() - half_width;
  g.y0 = center.imag() - half_width;
  if (eps_exclude > 0) {
    g.mask.assign(g.nx * g.ny, true);
    for (int idx = 0; idx < g.size(); ++idx)
      if (std::abs(g.point(idx)) <= eps_exclude) g.mask[idx] = false;
  }
  return g;
}

CMat MCBlocks::B2() const {
  CMat I13 = CMat::Identity(4, 4);
  I13(0, 0) = -1.0;
  return -B1.transpose() * I13;
}

MovingFrameField build_moving_frame(const JetProvider& p, const Grid& grid) {
  MovingFrameField field;
  field.grid = grid;
  field.dim = p.ambient_dim();
  field.pts.resize(grid.size());
  const int dim = field.dim;
  const int n = dim - 4;
  const double rt2 = std::sqrt(2.0);
  for (int idx = 0; idx < grid.size(); ++idx) {
    if (!grid.usable(idx)) continue;
    FramePoint& fp = field.pts[idx];
    try {
      CanonicalData cd = canonical_at(p, grid.point(idx), 4);
      CVec Yv = cd.Y.value(), Nv = cd.N.value();
      CVec Yzv = cd.Yz.value(), Yzbv = cd.Yzb.value();
      CMat F(dim, dim);
      F.col(0) = (Yv + Nv) / rt2;
      F.col(1) = (-Yv + Nv) / rt2;
      F.col(2) = Yzv + Yzbv;
      F.col(3) = I_UNIT * (Yzv - Yzbv);
      for (int j = 0; j < n; ++j) F.col(4 + j) = cd.psi[j].value();
      if (F.imag().cwiseAbs().maxCoeff() > 1e-7 * std::max(1.0, F.real().cwiseAbs().maxCoeff()))
        throw Error("moving frame: frame has a complex part");
      fp.F = F.real().cast<Cx>();

      Cx s = cd.s.value();
      Cx k2 = cd.k2.value();
      Cx s1 = (1.0 - s - 2.0 * k2) / (2.0 * rt2);
      Cx s2 = -I_UNIT * (1.0 + s - 2.0 * k2) / (2.0 * rt2);
      Cx s3 = (1.0 + s + 2.0 * k2) / (2.0 * rt2);
      Cx s4 = -I_UNIT * (1.0 - s + 2.0 * k2) / (2.0 * rt2);
      CMat A1 = CMat::Zero(4, 4);
      A1(0, 2) = s1;
      A1(0, 3) = s2;
      A1(1, 2) = s3;
      A1(1, 3) = s4;
      A1(2, 0) = s1;
      A1(2, 1) = -s3;
      A1(3, 0) = s2;
      A1(3, 1) = -s4;
      CMat A2(n, n), B1(4, n);
      for (int j = 0; j < n; ++j) {
        Cx kj = cd.kcomp[j].value(), bj = cd.betacomp[j].value();
        B1(0, j) = rt2 * bj;
        B1(1, j) = -rt2 * bj;
        B1(2, j) = -kj;
        B1(3, j) = -I_UNIT * kj;
        for (int l = 0; l < n; ++l) A2(j, l) = cd.bconn[l][j].value();
      }
      fp.mc = MCBlocks{A1, A2, B1};
      fp.valid = true;
    } catch (const Error&) {
      fp.valid = false;
    }
  }
  return field;
}

double mc_fd_defect(const MovingFrameField& field) {
  const Grid& g = field.grid;
  const int dim = field.dim;
  double worst = 0.0;
  int checked = 0;
  int stride = std::max(1, g.nx / 6);
  for (int j = 1; j + 1 < g.ny && checked < 30; j += stride)
    for (int i = 1; i + 1 < g.nx && checked < 30; i += stride) {
      const FramePoint& c = field.at(i, j);
      const FramePoint& xm = field.at(i - 1, j);
      const FramePoint& xp = field.at(i + 1, j);
      const FramePoint& ym = field.at(i, j - 1);
      const FramePoint& yp = field.at(i, j + 1);
      if (!c.valid || !xm.valid || !xp.valid || !ym.valid || !yp.valid) continue;
      CMat du = (xp.F - xm.F) / (2.0 * g.hx);
      CMat dv = (yp.F - ym.F) / (2.0 * g.hy);
      CMat dz = 0.5 * (du - I_UNIT * dv);
      CMat alpha_fd = c.F.inverse() * dz;
      CMat alpha(dim, dim);
      alpha.topLeftCorner(4, 4) = c.mc.A1;
      alpha.topRightCorner(4, dim - 4) = c.mc.B1;
      alpha.bottomLeftCorner(dim - 4, 4) = c.mc.B2();
      alpha.bottomRightCorner(dim - 4, dim - 4) = c.mc.A2;
      worst = std::max(worst, (alpha_fd - alpha).cwiseAbs().maxCoeff());
      ++checked;
    }
  return worst;
}

DualSurfaceResult dual_surface_riccati(const JetProvider& p, const Grid& grid) {
  DualSurfaceResult out;
  const int npts = grid.size();
  out.lifts.assign(npts, CVec());
  out.mu.assign(npts, Cx(0.0));
  out.mu_infinite.assign(npts, false);
  int rank2 = 0, usable = 0;
  std::vector<Cx> svals(npts, Cx(0.0));
  for (int idx = 0; idx < npts; ++idx) {
    if (!grid.usable(idx)) continue;
    try {
      CanonicalData cd = canonical_at(p, grid.point(idx), 4);
      const int n = (int)cd.psi.size();
      CVec k(n), beta(n);
      for (int j = 0; j < n; ++j) {
        k(j) = cd.kcomp[j].value();
        beta(j) = cd.betacomp[j].value();
      }
      ++usable;
      // rank of B1 equals 1 iff beta is parallel to k (beta, k as columns)
      CMat B(2, n);
      B.row(0) = k.transpose();
      B.row(1) = beta.transpose();
      Eigen::JacobiSVD<CMat> svd(B);
      double smax = svd.singularValues()(0);
      if (smax > 1e-12 && svd.singularValues()(1) > 1e-8 * smax) {
        ++rank2;
        continue;
      }
      double k2 = k.squaredNorm();
      if (k2 < 1e-18) {
        out.mu_infinite[idx] = true;  // umbilic: Lemma limit policy, treated as [Y]
        out.lifts[idx] = cd.Y.value();
        continue;
      }
      // least-squares solution of 2 beta_j + mubar k_j = 0
      Cx mubar = -2.0 * (k.conjugate().cwiseProduct(beta)).sum() / k2;
      Cx mu = std::conj(mubar);
      out.mu[idx] = mu;
      svals[idx] = cd.s.value();
      if (std::abs(mu) > 1e8) {
        out.mu_infinite[idx] = true;
        out.lifts[idx] = cd.Y.value();
        continue;
      }
      JetVec Ymu = cd.N + cd.Yz * mubar + cd.Yzb * mu + cd.Y * Cx(0.5 * std::norm(mu));
      out.lifts[idx] = Ymu.value();
    } catch (const Error&) {
    }
  }
  if (usable == 0) {
    out.exists = false;
    out.reason = "no usable grid points";
    return out;
  }
  if (rank2 > usable / 8) {
    out.exists = false;
    out.reason = "rank of B1 equals 2 on an open set: no dual surface";
    return out;
  }
  // Riccati residual mu_z - mu^2/2 - s by central differences
  double res = 0.0;
  for (int j = 1; j + 1 < grid.ny; ++j)
    for (int i = 1; i + 1 < grid.nx; ++i) {
      int idx = grid.index(i, j);
      int xm = grid.index(i - 1, j), xp = grid.index(i + 1, j);
      int ym = grid.index(i, j - 1), yp = grid.index(i, j + 1);
      if (!grid.usable(idx) || !grid.usable(xm) || !grid.usable(xp) || !grid.usable(ym) ||
          !grid.usable(yp))
        continue;
      if (out.mu_infinite[idx] || out.mu_infinite[xm] || out.mu_infinite[xp] ||
          out.mu_infinite[ym] || out.mu_infinite[yp])
        continue;
      if (out.lifts[idx].size() == 0) continue;
      Cx du = (out.mu[xp] - out.mu[xm]) / (2.0 * grid.hx);
      Cx dv = (out.mu[yp] - out.mu[ym]) / (2.0 * grid.hy);
      Cx muz = 0.5 * (du - I_UNIT * dv);
      res = std::max(res, std::abs(muz - out.mu[idx] * out.mu[idx] * 0.5 - svals[idx]));
    }
  out.riccati_residual = res;
  out.exists = true;
  return out;
}

}  // namespace willoop
