#ifndef WILLOOP_TSERIES_HPP
#define WILLOOP_TSERIES_HPP

#include "willoop/types.hpp"

#include <vector>

namespace willoop {

// Truncated bivariate Taylor series in (z - z0, w - w0) up to a total order.
// On-shell w stands for conj(z); off-shell it is an independent variable,
// which is exactly what the holomorphic-part extraction needs.
class TSeries {
 public:
  TSeries() : ord_(0), c_(1, Cx(0.0)) {}
  explicit TSeries(int ord) : ord_(ord), c_(count(ord), Cx(0.0)) {}

  static int count(int ord) { return (ord + 1) * (ord + 2) / 2; }
  static TSeries constant(Cx v, int ord);
  static TSeries var_z(Cx z0, int ord);  // z0 + dz
  static TSeries var_w(Cx w0, int ord);  // w0 + dw

  int order() const { return ord_; }
  Cx& at(int a, int b);
  Cx at(int a, int b) const;
  Cx value() const { return c_[0]; }

  TSeries operator+(const TSeries& o) const;
  TSeries operator-(const TSeries& o) const;
  TSeries operator-() const;
  TSeries operator*(const TSeries& o) const;
  TSeries operator*(Cx s) const;
  TSeries operator+(Cx s) const;
  TSeries operator-(Cx s) const;
  TSeries& operator+=(const TSeries& o);
  TSeries& operator-=(const TSeries& o);

  TSeries recip() const;       // constant term must be nonzero
  TSeries sqrt() const;        // principal branch
  TSeries conj_swap() const;   // series of conj(f) for real-analytic f(z, conj z)
  TSeries dz() const;          // order drops by one
  TSeries dw() const;
  TSeries holomorphic_part() const;  // zero every coefficient with b > 0
  TSeries truncated(int new_ord) const;

  // Substitute (Z - Z.value(), W - W.value()) for the local variables.
  TSeries compose(const TSeries& Z, const TSeries& W) const;

  Cx eval(Cx dz, Cx dw) const;
  double norm() const;

 private:
  int ord_;
  std::vector<Cx> c_;  // packed by total degree: idx(a,b) = (a+b)(a+b+1)/2 + b
  static int idx(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }
};

inline TSeries operator*(Cx s, const TSeries& t) { return t * s; }

// Ambient-vector-valued jet: one TSeries per coordinate.
struct JetVec {
  std::vector<TSeries> c;

  JetVec() = default;
  JetVec(int dim, int ord) : c(dim, TSeries(ord)) {}
  int dim() const { return (int)c.size(); }
  int order() const { return c.empty() ? 0 : c[0].order(); }

  JetVec operator+(const JetVec& o) const;
  JetVec operator-(const JetVec& o) const;
  JetVec operator*(const TSeries& s) const;
  JetVec operator*(Cx s) const;
  JetVec& operator+=(const JetVec& o);

  JetVec dz() const;
  JetVec dw() const;
  JetVec conj_swap() const;
  CVec value() const;
  Cx eval_coord(int i, Cx dz, Cx dw) const { return c[i].eval(dz, dw); }
};

// Complex-bilinear Minkowski pairing of jets.
TSeries minkowski_inner(const JetVec& u, const JetVec& v);

}  // namespace willoop

#endif
