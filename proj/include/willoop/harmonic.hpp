#ifndef WILLOOP_HARMONIC_HPP
#define WILLOOP_HARMONIC_HPP

#include "willoop/surface.hpp"

namespace willoop {

// Brings a null 4 x n block to the canonical two-row pattern by a real
// Lorentz transform A in SO+(1,3): rows (sqrt2 b_j; -sqrt2 b_j; -k_j; -+i k_j).
struct B1Normalization {
  CMat A;        // the normalizing Lorentz transform
  CMat B1can;    // A * B1
  int rank = 0;
  int branch = +1;  // sign of the i in the last row pattern
  double defect = 0.0;
};

B1Normalization normalize_B1(const CMat& B1);

struct StrongConformalReport {
  bool ok = false;
  double residual = 0.0;
};

StrongConformalReport strong_conformal_check(const MCBlocks& mc);

enum class HarmonicCase { CaseA, CaseB1, CaseB2Minimal, CaseB2Reduced };

const char* harmonic_case_name(HarmonicCase c);

struct Classification {
  HarmonicCase variant = HarmonicCase::CaseA;
  int rank = 0;
  double a13a23_sup = 0.0;       // sup of |a13 + a23| over the grid
  bool constant_lightlike = false;
  CVec Y0;                       // detected constant lightlike vector
  double lightlike_variation = 0.0;
  std::string note;
};

// The frames must satisfy the strong conformality condition; the MC blocks of
// the field are re-gauged internally to the canonical B1 form.
Classification classify_strongly_harmonic(const MovingFrameField& field);

struct RecoveredSurface {
  Grid grid;
  std::vector<CVec> points;       // unit vectors in R^{n+3}
  std::vector<bool> immersed;     // per usable point
  std::vector<bool> valid;
};

RecoveredSurface recover_surface(const MovingFrameField& field);

// Max norm of the harmonic map equations plus the flatness of alpha_lambda.
double harmonic_residual(const MovingFrameField& field, const std::vector<Cx>& lambda_samples);

}  // namespace willoop

#endif
