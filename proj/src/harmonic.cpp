#include "willoop/harmonic.hpp"
#include "willoop/lorentz.hpp"
#include "willoop/config.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace willoop {

namespace {

CMat metric4() {
  CMat J = CMat::Identity(4, 4);
  J(0, 0) = -1.0;
  return J;
}

Cx minkowski4(const CVec& a, const CVec& b) {
  return -a(0) * b(0) + a(1) * b(1) + a(2) * b(2) + a(3) * b(3);
}

// real null direction inside the span of the given columns, if any
bool real_null_direction(const CMat& cols, CVec& out) {
  const int m = (int)cols.cols();
  // solve Im(cols * c) = 0 for c in C^m, nontrivial
  RMat A(4, 2 * m);
  for (int j = 0; j < m; ++j)
    for (int r = 0; r < 4; ++r) {
      A(r, 2 * j) = cols(r, j).imag();
      A(r, 2 * j + 1) = cols(r, j).real();
    }
  Eigen::JacobiSVD<RMat> svd(A, Eigen::ComputeFullV);
  double smin = svd.singularValues()(std::min<int>(3, 2 * m - 1));
  if (2 * m > 4) smin = 0.0;  // underdetermined: always solvable
  RVec v = svd.matrixV().col(2 * m - 1);
  CVec c(m);
  for (int j = 0; j < m; ++j) c(j) = Cx(v(2 * j), v(2 * j + 1));
  CVec cand = cols * c;
  if (cand.norm() < 1e-10) return false;
  if (cand.imag().cwiseAbs().maxCoeff() > 1e-8 * cand.norm()) return false;
  (void)smin;
  out = cand;
  return true;
}

// rotation of R^3 sending unit vector a to unit vector b, embedded in SO+(1,3)
CMat rotation_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  Eigen::Vector3d v = a.cross(b);
  double c = a.dot(b);
  Eigen::Matrix3d R;
  if (v.norm() < 1e-14) {
    if (c > 0)
      R = Eigen::Matrix3d::Identity();
    else {
      // pick any axis orthogonal to a
      Eigen::Vector3d axis = std::abs(a(0)) < 0.9 ? Eigen::Vector3d(1, 0, 0) : Eigen::Vector3d(0, 1, 0);
      axis = (axis - axis.dot(a) * a).normalized();
      R = Eigen::AngleAxisd(3.14159265358979323846, axis).toRotationMatrix();
    }
  } else {
    double ang = std::atan2(v.norm(), c);
    R = Eigen::AngleAxisd(ang, v.normalized()).toRotationMatrix();
  }
  CMat out = CMat::Identity(4, 4);
  out.bottomRightCorner(3, 3) = R.cast<Cx>();
  return out;
}

}  // namespace

B1Normalization normalize_B1(const CMat& B1) {
  const auto& cfg = Config::get();
  B1Normalization out;
  out.A = CMat::Identity(4, 4);
  const int n = (int)B1.cols();
  CMat J4 = metric4();
  double scale = B1.cwiseAbs().maxCoeff();
  CMat nullres = B1.transpose() * J4 * B1;
  out.defect = nullres.cwiseAbs().maxCoeff();
  if (scale > 0 && out.defect > 1e-7 * scale * scale)
    throw NullConditionViolated("normalize_B1: B1^t I13 B1 != 0, residual " +
                                std::to_string(out.defect));
  if (scale < cfg.tol_null) {
    out.rank = 0;
    out.B1can = B1;
    return out;
  }

  Eigen::JacobiSVD<CMat> svd(B1, Eigen::ComputeFullU);
  double smax = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < std::min<int>(4, n); ++i)
    if (svd.singularValues()(i) > 1e-8 * smax) ++rank;
  if (rank > 2) throw Error("normalize_B1: rank exceeds 2, null condition violated");
  out.rank = rank;

  // already canonical: rows (r0, -r0) and r3 = (+-i) r2; keep A = I so that
  // frames built from canonical lifts recover their own surface
  {
    double d0 = (B1.row(0) + B1.row(1)).norm();
    double dp = (B1.row(3) - I_UNIT * B1.row(2)).norm();
    double dm = (B1.row(3) + I_UNIT * B1.row(2)).norm();
    if (d0 < 1e-9 * scale && std::min(dp, dm) < 1e-9 * scale) {
      out.branch = dp <= dm ? +1 : -1;
      out.B1can = B1;
      return out;
    }
  }

  CMat colspace = svd.matrixU().leftCols(rank);
  CVec lr;
  bool has_real = real_null_direction(colspace, lr);

  CMat A = CMat::Identity(4, 4);
  if (has_real) {
    // map the real null direction to the ray through (1,-1,0,0)
    Eigen::Vector4d v = lr.real();
    if (v(0) < 0) v = -v;
    v /= v(0);
    Eigen::Vector3d nhat = v.tail<3>();
    nhat.normalize();
    A = rotation_between(nhat, Eigen::Vector3d(-1, 0, 0));
  } else {
    // purely spacelike pair: l = a + i b with a, b real orthonormal (after scale)
    CVec l = colspace.col(0);
    Eigen::Vector4d a = l.real(), b = l.imag();
    Cx c2 = minkowski4(l, l.conjugate());
    double c = 0.5 * c2.real();
    if (c <= 0) throw Error("normalize_B1: degenerate column space");
    a /= std::sqrt(c);
    b /= std::sqrt(c);
    // complete (a, b) to a Lorentz frame (t, x, a, b)
    auto minkr = [](const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
      return -p(0) * q(0) + p(1) * q(1) + p(2) * q(2) + p(3) * q(3);
    };
    Eigen::Vector4d t = Eigen::Vector4d::Zero(), x = Eigen::Vector4d::Zero();
    bool ok_t = false;
    for (int seed = 0; seed < 4 && !ok_t; ++seed) {
      Eigen::Vector4d cand = Eigen::Vector4d::Unit(seed);
      cand = cand - minkr(cand, a) * a - minkr(cand, b) * b;
      double nn = minkr(cand, cand);
      if (nn < -1e-10) {
        t = cand / std::sqrt(-nn);
        if (t(0) < 0) t = -t;
        ok_t = true;
      }
    }
    if (!ok_t) throw Error("normalize_B1: no timelike complement direction");
    for (int seed = 0; seed < 4; ++seed) {
      Eigen::Vector4d cand = Eigen::Vector4d::Unit(seed);
      cand = cand - minkr(cand, a) * a - minkr(cand, b) * b + minkr(cand, t) * t;
      double nn = minkr(cand, cand);
      if (nn > 1e-10) {
        x = cand / std::sqrt(nn);
        break;
      }
    }
    CMat M(4, 4);
    M.col(0) = t.cast<Cx>();
    M.col(1) = x.cast<Cx>();
    M.col(2) = a.cast<Cx>();
    M.col(3) = b.cast<Cx>();
    if (M.real().determinant() < 0) M.col(1) = -M.col(1);
    // A = M^{-1} = I13 M^t I13 maps (t,x,a,b) to the standard basis
    A = J4 * M.transpose() * J4;
  }

  CMat Bc = A * B1;
  // determine the branch from the (row2, row3) pattern
  double n2 = Bc.row(2).norm(), n3 = Bc.row(3).norm();
  if (n2 > 1e-10 * std::max(1.0, scale) && n3 > 1e-10 * std::max(1.0, scale)) {
    Cx ratio = 0.0;
    int jbest = 0;
    Bc.row(2).cwiseAbs().maxCoeff(&jbest);
    ratio = Bc(3, jbest) / Bc(2, jbest);
    out.branch = (ratio.imag() >= 0) ? +1 : -1;
  }
  out.A = A;
  out.B1can = Bc;
  // consistency: rows (r0, r1) opposite, row3 = (+-i) row2
  double defect = (Bc.row(0) + Bc.row(1)).norm();
  defect = std::max(defect, (Bc.row(3) - Cx(0.0, (double)out.branch) * Bc.row(2)).norm());
  out.defect = std::max(out.defect, defect);
  return out;
}

StrongConformalReport strong_conformal_check(const MCBlocks& mc) {
  StrongConformalReport rep;
  CMat R = mc.B1.transpose() * metric4() * mc.B1;
  rep.residual = R.cwiseAbs().maxCoeff();
  double scale = std::max(1.0, mc.B1.cwiseAbs().maxCoeff());
  rep.ok = rep.residual < 1e-9 * scale * scale;
  return rep;
}

const char* harmonic_case_name(HarmonicCase c) {
  switch (c) {
    case HarmonicCase::CaseA: return "CaseA";
    case HarmonicCase::CaseB1: return "CaseB1";
    case HarmonicCase::CaseB2Minimal: return "CaseB2_minimal";
    case HarmonicCase::CaseB2Reduced: return "CaseB2_reduced";
  }
  return "?";
}

namespace {

struct GaugedPoint {
  bool valid = false;
  CMat Ahat;      // diag(A, I_n)
  CMat B1can;
  CVec Y0;        // F Ahat^{-1} (1,-1,0,...)^t / sqrt(2)
  int rank = 0;
  double knorm = 0.0;
};

std::vector<GaugedPoint> gauge_field(const MovingFrameField& field) {
  const int dim = field.dim;
  std::vector<GaugedPoint> out(field.pts.size());
  CVec eminus = CVec::Zero(dim);
  eminus(0) = 1.0;
  eminus(1) = -1.0;
  for (size_t i = 0; i < field.pts.size(); ++i) {
    const FramePoint& fp = field.pts[i];
    if (!fp.valid) continue;
    GaugedPoint& gp = out[i];
    try {
      B1Normalization nb = normalize_B1(fp.mc.B1);
      CMat Ahat = CMat::Identity(dim, dim);
      Ahat.topLeftCorner(4, 4) = nb.A;
      gp.Ahat = Ahat;
      gp.B1can = nb.B1can;
      gp.rank = nb.rank;
      gp.knorm = nb.B1can.row(2).norm();
      gp.Y0 = fp.F * (Ahat.inverse() * eminus) / std::sqrt(2.0);
      gp.valid = true;
    } catch (const Error&) {
      gp.valid = false;
    }
  }
  return out;
}

}  // namespace

Classification classify_strongly_harmonic(const MovingFrameField& field) {
  Classification cls;
  int checked = 0;
  for (const auto& fp : field.pts) {
    if (!fp.valid) continue;
    StrongConformalReport sc = strong_conformal_check(fp.mc);
    if (!sc.ok)
      throw Error("classify: frame is not strongly conformally harmonic, residual " +
                  std::to_string(sc.residual));
    ++checked;
  }
  if (checked == 0) throw Error("classify: no valid frame points");

  std::vector<GaugedPoint> gauged = gauge_field(field);

  // detect a constant lightlike direction: normalize the first coordinate
  double variation = 0.0;
  CVec ref;
  int rank = 0;
  double kmax = 0.0;
  int nval = 0;
  for (const auto& gp : gauged) {
    if (!gp.valid) continue;
    rank = std::max(rank, gp.rank);
    kmax = std::max(kmax, gp.knorm);
    CVec y0 = gp.Y0;
    if (std::abs(y0(0)) < 1e-12) {
      variation = 1e300;
      continue;
    }
    y0 /= y0(0);
    if (ref.size() == 0)
      ref = y0;
    else
      variation = std::max(variation, (y0 - ref).cwiseAbs().maxCoeff());
    ++nval;
  }
  cls.rank = rank;
  cls.lightlike_variation = variation;
  cls.constant_lightlike = (variation < 1e-7);

  // diagnostic |a13 + a23| proxy: variation of the lightlike direction per unit step
  cls.a13a23_sup = variation / std::max(field.grid.hx, 1e-12);

  if (!cls.constant_lightlike) {
    cls.variant = HarmonicCase::CaseA;
    cls.note = "a13 + a23 not identically zero: conformal Gauss map of a Willmore surface";
    return cls;
  }
  if (ref.size() > 0) {
    cls.Y0 = ref;
  }
  if (rank == 2) {
    cls.variant = HarmonicCase::CaseB1;
    cls.note = "constant lightlike vector with rank-2 B1: not a conformal Gauss map";
  } else if (kmax > 1e-7) {
    cls.variant = HarmonicCase::CaseB2Minimal;
    cls.note = "constant lightlike vector, rank 1, k != 0: conformally minimal in R^{n+2}";
  } else {
    cls.variant = HarmonicCase::CaseB2Reduced;
    cls.note = "constant lightlike vector with k = 0: reduced harmonic map, no surface";
  }
  return cls;
}

RecoveredSurface recover_surface(const MovingFrameField& field) {
  Classification cls = classify_strongly_harmonic(field);
  if (cls.variant == HarmonicCase::CaseB1 || cls.variant == HarmonicCase::CaseB2Reduced)
    throw NotASurface(std::string("recover_surface: ") + harmonic_case_name(cls.variant) +
                      " is not the conformal Gauss map of an immersion");

  std::vector<GaugedPoint> gauged = gauge_field(field);
  RecoveredSurface out;
  out.grid = field.grid;
  out.points.assign(field.pts.size(), CVec());
  out.immersed.assign(field.pts.size(), false);
  out.valid.assign(field.pts.size(), false);
  const int dim = field.dim;

  if (cls.variant == HarmonicCase::CaseA) {
    for (size_t i = 0; i < gauged.size(); ++i) {
      if (!gauged[i].valid) continue;
      CVec Y0 = gauged[i].Y0;
      if (Y0(0).real() < 0) Y0 = -Y0;
      try {
        out.points[i] = sphere_projection(Y0);
        out.valid[i] = true;
      } catch (const Error&) {
      }
    }
  } else {
    // CaseB2 minimal: Y_mu = hat Y0 + mubar P + mu bar P + |mu|^2/2 Y0 with
    // 2 beta_j + mubar k_j = 0 read off the canonical B1
    int positive = 0, nonpos = 0;
    for (size_t i = 0; i < gauged.size(); ++i) {
      const GaugedPoint& gp = gauged[i];
      if (!gp.valid) continue;
      const FramePoint& fp = field.pts[i];
      CMat Fh = fp.F * gp.Ahat.inverse();
      CVec e0 = Fh.col(0), e0h = Fh.col(1), e1 = Fh.col(2), e2 = Fh.col(3);
      CVec Y0 = (e0 - e0h) / std::sqrt(2.0);
      CVec Y0h = (e0 + e0h) / std::sqrt(2.0);
      // mubar from the first usable column
      Cx mubar = 0.0;
      bool got = false;
      for (int j = 0; j < (int)gp.B1can.cols(); ++j) {
        Cx k = -gp.B1can(2, j), beta = gp.B1can(0, j) / std::sqrt(2.0);
        if (std::abs(k) > 1e-10) {
          mubar = -2.0 * beta / k;
          got = true;
          break;
        }
      }
      if (!got) continue;
      Cx mu = std::conj(mubar);
      CVec P = 0.5 * (e1 - I_UNIT * e2), Pb = 0.5 * (e1 + I_UNIT * e2);
      CVec Ymu = Y0h + mubar * P + mu * Pb + 0.5 * std::norm(mu) * Y0;
      if (Ymu(0).real() < 0) Ymu = -Ymu;
      try {
        out.points[i] = sphere_projection(Ymu);
        out.valid[i] = true;
        ++positive;
      } catch (const Error&) {
        ++nonpos;
      }
    }
    if (positive == 0)
      throw Error("recover_surface: DegenerateMetric, <Y_mu_z, Y_mu_zbar> <= 0 everywhere");
  }

  // immersion flags from first differences of the projected surface
  const Grid& g = out.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int idx = g.index(i, j);
      if (!out.valid[idx]) continue;
      int ip = g.index(std::min(i + 1, g.nx - 1), j);
      int jp = g.index(i, std::min(j + 1, g.ny - 1));
      if (!out.valid[ip] || !out.valid[jp]) continue;
      double du = (out.points[ip] - out.points[idx]).norm();
      double dv = (out.points[jp] - out.points[idx]).norm();
      out.immersed[idx] = (du + dv) > 1e-10;
      (void)dim;
    }
  return out;
}

double harmonic_residual(const MovingFrameField& field, const std::vector<Cx>& lambda_samples) {
  const Grid& g = field.grid;
  const int dim = field.dim;
  const int n = dim - 4;
  auto assemble = [&](const MCBlocks& mc) {
    CMat a(dim, dim);
    a.topLeftCorner(4, 4) = mc.A1;
    a.topRightCorner(4, n) = mc.B1;
    a.bottomLeftCorner(n, 4) = mc.B2();
    a.bottomRightCorner(n, n) = mc.A2;
    return a;
  };
  CMat J4 = metric4();
  double worst = 0.0;
  for (int j = 1; j + 1 < g.ny; ++j)
    for (int i = 1; i + 1 < g.nx; ++i) {
      const FramePoint& c = field.at(i, j);
      const FramePoint& xm = field.at(i - 1, j);
      const FramePoint& xp = field.at(i + 1, j);
      const FramePoint& ym = field.at(i, j - 1);
      const FramePoint& yp = field.at(i, j + 1);
      if (!c.valid || !xm.valid || !xp.valid || !ym.valid || !yp.valid) continue;
      auto dzbar_of = [&](auto pick) {
        auto du = (pick(xp) - pick(xm)) / (2.0 * g.hx);
        auto dv = (pick(yp) - pick(ym)) / (2.0 * g.hy);
        return CMat(0.5 * (du + I_UNIT * dv));
      };
      CMat A1 = c.mc.A1, A2 = c.mc.A2, B1 = c.mc.B1;
      CMat dA1 = dzbar_of([](const FramePoint& p) { return p.mc.A1; });
      CMat dA2 = dzbar_of([](const FramePoint& p) { return p.mc.A2; });
      CMat dB1 = dzbar_of([](const FramePoint& p) { return p.mc.B1; });
      CMat r1 = dA1 + A1.conjugate() * A1 - B1.conjugate() * B1.transpose() * J4;
      CMat r2 = dA2 + A2.conjugate() * A2 - B1.conjugate().transpose() * J4 * B1;
      CMat r3 = dB1 + A1.conjugate() * B1 - B1 * A2.conjugate();
      worst = std::max(worst, r1.imag().cwiseAbs().maxCoeff());
      worst = std::max(worst, r2.imag().cwiseAbs().maxCoeff());
      worst = std::max(worst, r3.cwiseAbs().maxCoeff());
      // flatness of alpha_lambda at the sampled circle points
      for (Cx lam : lambda_samples) {
        auto alpha_p = [&](const FramePoint& p, Cx l) {
          CMat ap = assemble(p.mc);
          CMat k = ap, pp = ap;
          k.topRightCorner(4, n).setZero();
          k.bottomLeftCorner(n, 4).setZero();
          pp.topLeftCorner(4, 4).setZero();
          pp.bottomRightCorner(n, n).setZero();
          return CMat(k + pp / l);
        };
        auto alpha_pp = [&](const FramePoint& p, Cx l) {
          // alpha''_lambda = conj(k-part) + lambda conj(p-part)
          return CMat(alpha_p(p, Cx(1.0) / std::conj(l)).conjugate());
        };
        CMat ap = alpha_p(c, lam);
        CMat app = alpha_pp(c, lam);
        auto du_p = (alpha_pp(xp, lam) - alpha_pp(xm, lam)) / (2.0 * g.hx);
        auto dv_p = (alpha_pp(yp, lam) - alpha_pp(ym, lam)) / (2.0 * g.hy);
        CMat dz_app = 0.5 * (du_p - I_UNIT * dv_p);
        auto du_m = (alpha_p(xp, lam) - alpha_p(xm, lam)) / (2.0 * g.hx);
        auto dv_m = (alpha_p(yp, lam) - alpha_p(ym, lam)) / (2.0 * g.hy);
        CMat dzb_ap = 0.5 * (du_m + I_UNIT * dv_m);
        CMat flat = dz_app - dzb_ap + ap * app - app * ap;
        worst = std::max(worst, flat.cwiseAbs().maxCoeff());
      }
    }
  return worst;
}

}  // namespace willoop
