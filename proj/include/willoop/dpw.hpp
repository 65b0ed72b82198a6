#ifndef WILLOOP_DPW_HPP
#define WILLOOP_DPW_HPP

#include "willoop/loops.hpp"
#include "willoop/poly.hpp"
#include "willoop/surface.hpp"
#include "willoop/harmonic.hpp"

#include <map>
#include <optional>

namespace willoop {

// Meromorphic (1,0)-form valued in the twisted loop algebra: one matrix of
// rational functions of z per lambda degree.
struct Potential {
  int n = 2;  // codimension, ambient n+4
  Cx base_point = 0.0;
  std::map<int, std::vector<std::vector<RationalFn>>> terms;

  int dim() const { return n + 4; }
  CMat eval_term(int deg, Cx z) const;
  LoopMat eval(Cx z) const;
  bool twist_ok(double tol = 1e-12) const;
  bool is_polynomial() const;
  std::vector<Cx> poles() const;

  // normalized potential lambda^{-1} [[0, B1hat], [-B1hat^t I13, 0]] dz
  static Potential normalized(int n, Cx base, const std::vector<std::vector<RationalFn>>& B1hat);
  CMat b1hat_eval(Cx z) const;  // 4 x n block of the degree -1 term

  std::string to_json() const;
  static Potential from_json(const std::string& text);
};

enum class IntegrateMethod { RkAdaptive, NilpotentExact };

// Solves dF- = F- eta along a radial path from the base point, with automatic
// pole detours. The nilpotent method requires a terminating lambda expansion.
LoopMat integrate_potential(const Potential& eta, Cx target, IntegrateMethod method,
                            int trunc = -1);

struct SynthesisPoint {
  bool factorized = false;
  CellVariant cell = CellVariant::NearBoundary;
  bool immersed = false;
  LoopMat frame;   // extended frame at the point
  CMat B1;         // lambda^{-1} p-part block of the frame's MC form
  CVec point;      // recovered surface sample at lambda = 1
};

struct SynthesisResult {
  int n = 2;
  Grid grid;
  std::vector<SynthesisPoint> pts;
  Classification cls;
  int factorized_count = 0;
  int immersed_count = 0;
  bool surface_ok = false;   // CaseA with enough recovered points
  std::string note;
};

SynthesisResult dpw_synthesize(const Potential& eta, const Grid& grid, int trunc = -1);

// Surface of the associated family member at lambda0 on the unit circle.
std::vector<CVec> associated_family(const SynthesisResult& syn, Cx lambda0);

// Light-cone lift (1, y(z)) of the synthesized surface at a single point;
// used for fine finite-difference probes of synthesized surfaces.
CVec synthesized_lift(const Potential& eta, Cx z, int trunc = -1);

// Matrix with truncated bivariate series entries (about the base point).
struct SeriesMat {
  int rows = 0, cols = 0;
  std::vector<TSeries> e;

  SeriesMat() = default;
  SeriesMat(int r, int cnum, int ord) : rows(r), cols(cnum), e(r * cnum, TSeries(ord)) {}
  static SeriesMat identity(int m, int ord);
  TSeries& at(int r, int c) { return e[r * cols + c]; }
  const TSeries& at(int r, int c) const { return e[r * cols + c]; }
  SeriesMat mul(const SeriesMat& o) const;
  SeriesMat operator+(const SeriesMat& o) const;
  SeriesMat operator-(const SeriesMat& o) const;
  SeriesMat scale(Cx s) const;
  SeriesMat inverse() const;  // constant term must be invertible
  SeriesMat holomorphic_part() const;
  SeriesMat dz() const;
  CMat value() const;
  CMat z_coeff(int a) const;  // coefficient of z^a in the w-free part
  double norm() const;
};

// Bivariate series of the Maurer-Cartan blocks about z0 = 0 (w stands for
// conj z): the (1,0) part splits into the k-part (A1, A2) and p-part (B1).
struct MCSeries {
  int n = 2;
  SeriesMat A1, A2, B1;
  CMat frame_at_base;  // F(0), must lie in K
};

MCSeries mc_series_from_provider(const JetProvider& p, int deg_max = -1);

// Wu's formula: eta = lambda^{-1} F0 delta1 F0^{-1} dz with F0' = F0 delta0.
Potential wu_normalized_potential(const MCSeries& mc, int deg_max = -1);

// The closed-form 4x4 solution of F01' = F01 A1 for the special A1 pattern
// built from holomorphic a13, a14, a34.
CMat f01_closed_form(const Poly& a13, const Poly& a14, const Poly& a34, Cx z,
                     double quad_target = 1e-13);

CMat cartan_map(const CMat& g);

struct CompactDualResult {
  LoopMat FU, Wplus;
  double residual = 0.0;
  double minus_part_defect = 0.0;  // Birkhoff minus parts of F and FU must agree
};

CompactDualResult compact_dual_frame(const LoopMat& F, int trunc = -1);

struct PotentialFlags {
  bool null_ok = false;
  bool nilpotent_ok = false;
  bool minimal_pattern = false;   // rows (f; -f; g; ig) up to constant K conjugation
  bool isotropic_pairs = false;   // columns grouped (v, iv) up to constant K conjugation
  bool vacuum = false;
  int rank = 0;
};

PotentialFlags classify_potential(const Potential& eta);

// Extended frame exp(z(lambda^{-1}B + A) + conj-part), valid when the bracket
// [lambda^{-1}B + A, lambda conj B + conj A] vanishes identically.
struct HomogeneousFrame {
  CMat B, A;
  int dim = 0;
  CMat eval(Cx z, Cx lambda) const;
};

HomogeneousFrame homogeneous_frame(const CMat& B, const CMat& A);

}  // namespace willoop

#endif
