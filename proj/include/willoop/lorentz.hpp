#ifndef WILLOOP_LORENTZ_HPP
#define WILLOOP_LORENTZ_HPP

#include "willoop/types.hpp"

namespace willoop {

// Minkowski linear algebra on R^{n+4} with metric diag(-1,1,...,1).
// The inner product is complex-bilinear throughout (no conjugation), matching
// the conformality convention <Y_z,Y_z> = 0.

CMat minkowski_metric(int dim);              // I_{1,dim-1}
CMat sigma_conjugator(int dim);              // D = diag(-I4, I_n)

Cx minkowski_inner(const CVec& u, const CVec& v);

bool is_lightlike(const CVec& v, double tol = -1.0);

// Projects a future-pointing lightlike vector to the unit sphere S^{n+2}.
CVec sphere_projection(const CVec& x);

enum class Involution { Sigma, Tau, Theta };

// Group action of the involution on a matrix; for algebra=true the Lie
// algebra action is used instead (differs only for theta and the p-part sign
// bookkeeping of sigma is identical for both).
CMat apply_involution(Involution which, const CMat& X, bool algebra = false);

enum class Membership { Group, Algebra, KPart, PPart };

struct MembershipReport {
  bool ok = false;
  double residual = 0.0;
};

MembershipReport validate_membership(const CMat& X, Membership kind, double tol = -1.0);

// k/p projections of an algebra element relative to sigma.
CMat k_part(const CMat& X);
CMat p_part(const CMat& X);

// Real rotation in the (i,j) coordinate plane.
CMat plane_rotation(int dim, int i, int j, double angle);
// Real boost in the (0,j) plane.
CMat plane_boost(int dim, int j, double rapidity);

}  // namespace willoop

#endif
