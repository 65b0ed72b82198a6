#ifndef WILLOOP_LOOPS_HPP
#define WILLOOP_LOOPS_HPP

#include "willoop/types.hpp"

#include <vector>

namespace willoop {

// Matrix-valued Laurent polynomial in the loop parameter.
// Twist convention: D^{-1} X_j D = (-1)^j X_j, i.e. sigma(g)(lambda) = g(-lambda).
// Reality (noncompact form): conj(X_j) = X_{-j}, i.e. g real on |lambda| = 1.
class LoopMat {
 public:
  LoopMat() : dim_(0), lo_(0), hi_(-1) {}
  explicit LoopMat(int dim) : dim_(dim), lo_(0), hi_(-1) {}
  static LoopMat identity(int dim);
  static LoopMat single(int deg, const CMat& X);

  int dim() const { return dim_; }
  int lo() const { return hi_ < lo_ ? 0 : lo_; }
  int hi() const { return hi_ < lo_ ? 0 : hi_; }
  bool empty() const { return hi_ < lo_; }

  CMat coeff(int j) const;
  void set_coeff(int j, const CMat& X);
  void add_coeff(int j, const CMat& X);

  CMat eval(Cx lambda) const;
  LoopMat mul(const LoopMat& o, int trunc = 1 << 20, double* tail = nullptr) const;
  LoopMat inverse(int trunc, double* tail = nullptr) const;
  LoopMat tau() const;          // conj coefficients, degree flip
  LoopMat tau_compact() const;  // I1 conj(.) I1, degree flip
  LoopMat transpose() const;
  LoopMat scaled(Cx s) const;
  LoopMat operator-(const LoopMat& o) const;
  LoopMat operator+(const LoopMat& o) const;
  LoopMat trimmed(double tol) const;
  double norm() const;  // max coefficient magnitude

 private:
  int dim_;
  int lo_, hi_;
  std::vector<CMat> coef_;
  void ensure_range(int j);
};

struct LoopValidation {
  bool twist_ok = false, reality_ok = false, group_ok = false;
  double twist_res = 0.0, reality_res = 0.0, group_res = 0.0;
};

LoopValidation validate_loop(const LoopMat& g, double tol = -1.0);

// Entries allowed in a twisted coefficient of the given degree parity.
std::vector<std::pair<int, int>> twist_entries(int dim, int parity);

struct FactorPair {
  LoopMat left, right;
  double residual = 0.0;
  double tail = 0.0;
};

// g = g_- g_+ with g_- = I + O(lambda^{-1}) and g_+ holomorphic at 0.
FactorPair birkhoff_factorize(const LoopMat& g, int trunc = -1);

enum class IwasawaForm { Noncompact, Compact };
enum class CellVariant { BigCell, SecondCell, NearBoundary };

extern const char* cell_name(CellVariant v);

struct CellClass {
  CellVariant variant = CellVariant::NearBoundary;
  CMat witness;           // (tau g)^{-1} g at lambda = 1, reduced
  double sigma_big = 0.0;    // residual of the big-cell linear reduction
  double sigma_second = 0.0; // residual of the Q0-cell linear reduction
  std::string note;
};

struct IwasawaResult {
  bool ok = false;
  FactorPair pair;
  CellClass cell;
};

// g = F F_+ with F real on the circle (noncompact: real entries; compact:
// values in the theta-fixed compact form), F_+ holomorphic at 0.
IwasawaResult iwasawa_factorize(const LoopMat& g, IwasawaForm form, int trunc = -1);

// Second Iwasawa cell marker Q0 = diag(-1,1,1,1,-1,1,...,1).
CMat second_cell_marker(int dim);

}  // namespace willoop

#endif
