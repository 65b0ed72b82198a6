#ifndef WILLOOP_SURFACE_HPP
#define WILLOOP_SURFACE_HPP

#include "willoop/types.hpp"
#include "willoop/tseries.hpp"

#include <memory>
#include <vector>

namespace willoop {

// Supplies jets of a light-cone lift Y of a conformal immersion. Lifts may
// carry any positive scaling; the canonical normalization happens downstream.
class JetProvider {
 public:
  virtual ~JetProvider() = default;
  virtual int ambient_dim() const = 0;  // n + 4
  int codim() const { return ambient_dim() - 4; }
  virtual JetVec lift_jets(Cx z, int order) const = 0;
  virtual bool in_domain(Cx /*z*/) const { return true; }
  virtual bool exact() const { return true; }
};

// All invariants of the canonical lift at one point, kept as jets so that
// covariant derivatives up to the remaining order stay available.
struct CanonicalData {
  Cx z;
  int order = 0;
  JetVec Y;       // canonical lift, <Y_z, Y_zbar> = 1/2
  JetVec Yz, Yzb;
  JetVec N;
  TSeries s;      // Schwarzian
  JetVec kappa;   // conformal Hopf differential (normal valued)
  std::vector<JetVec> psi;            // orthonormal normal frame
  std::vector<TSeries> kcomp, betacomp;  // kappa and D_zbar kappa in the psi basis
  std::vector<std::vector<TSeries>> bconn;  // D_z psi_j = sum b_{jl} psi_l
  TSeries k2;     // sum |k_j|^2
  double conf_defect = 0.0;

  JetVec normal_project(const JetVec& X) const;
  JetVec cov_z(const JetVec& X) const { return normal_project(X.dz()); }
  JetVec cov_zb(const JetVec& X) const { return normal_project(X.dw()); }
};

CanonicalData canonical_at(const JetProvider& p, Cx z, int order = 4);

// Point values of the Hopf data (spec type HopfData).
struct HopfData {
  Cx s;
  CVec kappa;
  std::vector<Cx> k, beta;
  CMat bconn;
  CMat psi;  // columns are the frame vectors
};

HopfData hopf_schwarzian(const JetProvider& p, Cx z, int order = 4);

// kappa_1 = kappa (dz/dw)^2 / |dz/dw| for a linear coordinate change.
HopfData kappa_transform(const HopfData& h, Cx dw_dz);

struct ResidualReport {
  double structure = 0.0;
  double gauss_codazzi_ricci = 0.0;
  double willmore = 0.0;
};

ResidualReport residuals_at(const JetProvider& p, Cx z, int order = 6);

struct EnergyResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

// Two-chart Willmore energy: chart z over the unit disk plus the 1/z chart.
// When chart2 is null the substitution z -> 1/w reuses chart1.
EnergyResult willmore_energy(const JetProvider& chart1, const JetProvider* chart2 = nullptr,
                             double target = -1.0);

RMat isotropy_residual(const JetProvider& p, Cx z, int max_order = 2);

struct Grid {
  double x0 = 0.0, y0 = 0.0, hx = 0.0, hy = 0.0;
  int nx = 0, ny = 0;
  std::vector<bool> mask;  // usable points

  static Grid square(Cx center, double half_width, int n, double eps_exclude = -1.0);
  int size() const { return nx * ny; }
  Cx point(int i, int j) const { return Cx(x0 + i * hx, y0 + j * hy); }
  Cx point(int idx) const { return point(idx % nx, idx / nx); }
  bool usable(int idx) const { return mask.empty() ? true : mask[idx]; }
  int index(int i, int j) const { return j * nx + i; }
};

struct MCBlocks {
  CMat A1, A2, B1;
  CMat B2() const;
};

struct FramePoint {
  bool valid = false;
  CMat F;
  MCBlocks mc;
};

struct MovingFrameField {
  Grid grid;
  int dim = 0;
  std::vector<FramePoint> pts;
  const FramePoint& at(int i, int j) const { return pts[grid.index(i, j)]; }
};

MovingFrameField build_moving_frame(const JetProvider& p, const Grid& grid);

// finite-difference Maurer-Cartan check: || F^{-1} dF - assembled alpha ||
double mc_fd_defect(const MovingFrameField& field);

struct DualSurfaceResult {
  bool exists = false;
  std::string reason;
  std::vector<CVec> lifts;        // dual lift per usable grid point
  std::vector<Cx> mu;
  std::vector<bool> mu_infinite;  // where the dual returns [Y]
  double riccati_residual = 0.0;
};

DualSurfaceResult dual_surface_riccati(const JetProvider& p, const Grid& grid);

}  // namespace willoop

#endif
