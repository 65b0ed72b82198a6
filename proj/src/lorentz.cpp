#include "willoop/lorentz.hpp"
#include "willoop/config.hpp"

#include <cmath>

namespace willoop {

CMat minkowski_metric(int dim) {
  CMat J = CMat::Identity(dim, dim);
  J(0, 0) = -1.0;
  return J;
}

CMat sigma_conjugator(int dim) {
  if (dim < 6) throw DimensionMismatch("ambient dimension must be n+4 with n >= 2");
  CMat D = CMat::Identity(dim, dim);
  for (int i = 0; i < 4; ++i) D(i, i) = -1.0;
  return D;
}

Cx minkowski_inner(const CVec& u, const CVec& v) {
  if (u.size() != v.size()) throw DimensionMismatch("minkowski_inner: size mismatch");
  Cx s = -u(0) * v(0);
  for (int i = 1; i < u.size(); ++i) s += u(i) * v(i);
  return s;
}

bool is_lightlike(const CVec& v, double tol) {
  if (tol < 0) tol = Config::get().tol_null;
  return std::abs(minkowski_inner(v, v)) < tol * std::max(1.0, v.squaredNorm());
}

CVec sphere_projection(const CVec& x) {
  const double tol = Config::get().tol_null;
  double scale = x.norm();
  if (scale == 0.0) throw Error("sphere_projection: zero vector");
  if (std::abs(minkowski_inner(x, x)) > 1e-6 * scale * scale)
    throw Error("sphere_projection: input not lightlike");
  if (x(0).real() <= tol * scale || std::abs(x(0).imag()) > 1e-8 * scale)
    throw Error("sphere_projection: x0 <= 0, wrong cone branch");
  return x.tail(x.size() - 1) / x(0);
}

CMat apply_involution(Involution which, const CMat& X, bool algebra) {
  const int dim = (int)X.rows();
  switch (which) {
    case Involution::Sigma: {
      CMat D = sigma_conjugator(dim);
      return D * X * D;  // D^{-1} = D
    }
    case Involution::Tau:
      return X.conjugate();
    case Involution::Theta: {
      // Compact anti-involution: fixed set has i*a_{0j} real in the first row.
      // Algebra action X -> -conj(X)^t; on so(1,n+3,C) this coincides with
      // conjugation of conj(X) by I_{1,n+3}, which is the group action.
      if (algebra) return -X.conjugate().transpose();
      CMat J = minkowski_metric(dim);
      return J * X.conjugate() * J;
    }
  }
  throw Error("unreachable");
}

MembershipReport validate_membership(const CMat& X, Membership kind, double tol) {
  if (tol < 0) tol = Config::get().tol_group;
  const int dim = (int)X.rows();
  CMat J = minkowski_metric(dim);
  MembershipReport rep;
  CMat R;
  switch (kind) {
    case Membership::Group:
      R = X.transpose() * J * X - J;
      break;
    case Membership::Algebra:
      R = X.transpose() * J + J * X;
      break;
    case Membership::KPart: {
      CMat Ra = X.transpose() * J + J * X;
      CMat Rk = X - k_part(X);
      rep.residual = std::max(Ra.cwiseAbs().maxCoeff(), Rk.cwiseAbs().maxCoeff());
      rep.ok = rep.residual < tol;
      return rep;
    }
    case Membership::PPart: {
      CMat Ra = X.transpose() * J + J * X;
      CMat Rp = X - p_part(X);
      rep.residual = std::max(Ra.cwiseAbs().maxCoeff(), Rp.cwiseAbs().maxCoeff());
      rep.ok = rep.residual < tol;
      return rep;
    }
  }
  rep.residual = R.cwiseAbs().maxCoeff();
  rep.ok = rep.residual < tol;
  return rep;
}

CMat k_part(const CMat& X) {
  const int dim = (int)X.rows();
  CMat K = CMat::Zero(dim, dim);
  K.topLeftCorner(4, 4) = X.topLeftCorner(4, 4);
  K.bottomRightCorner(dim - 4, dim - 4) = X.bottomRightCorner(dim - 4, dim - 4);
  return K;
}

CMat p_part(const CMat& X) { return X - k_part(X); }

CMat plane_rotation(int dim, int i, int j, double angle) {
  CMat R = CMat::Identity(dim, dim);
  R(i, i) = std::cos(angle);
  R(j, j) = std::cos(angle);
  R(i, j) = -std::sin(angle);
  R(j, i) = std::sin(angle);
  return R;
}

CMat plane_boost(int dim, int j, double rapidity) {
  CMat B = CMat::Identity(dim, dim);
  B(0, 0) = std::cosh(rapidity);
  B(j, j) = std::cosh(rapidity);
  B(0, j) = std::sinh(rapidity);
  B(j, 0) = std::sinh(rapidity);
  return B;
}

}  // namespace willoop
