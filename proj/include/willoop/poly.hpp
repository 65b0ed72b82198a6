#ifndef WILLOOP_POLY_HPP
#define WILLOOP_POLY_HPP

#include "willoop/types.hpp"
#include "willoop/tseries.hpp"

#include <vector>

namespace willoop {

// Univariate polynomial with complex coefficients, ascending degree.
struct Poly {
  std::vector<Cx> c;

  Poly() : c{Cx(0.0)} {}
  explicit Poly(std::vector<Cx> coeffs) : c(std::move(coeffs)) { if (c.empty()) c.push_back(0.0); }
  static Poly constant(Cx v) { return Poly({v}); }
  static Poly x() { return Poly({Cx(0.0), Cx(1.0)}); }

  int degree() const { return (int)c.size() - 1; }
  Cx eval(Cx z) const;
  Poly derivative() const;
  Poly antiderivative() const;  // vanishing at 0
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(Cx s) const;
  bool is_zero(double tol = 0.0) const;
  void trim(double tol = 0.0);
  std::vector<Cx> roots() const;  // companion matrix
};

// Rational function num/den of one complex variable.
struct RationalFn {
  Poly num, den;

  RationalFn() : num(), den(Poly::constant(1.0)) {}
  RationalFn(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {}
  static RationalFn poly(Poly p) { return RationalFn(std::move(p), Poly::constant(1.0)); }

  Cx eval(Cx z) const;
  RationalFn derivative() const;
  bool is_polynomial(double tol = 1e-14) const;
};

// Bivariate polynomial in (z, w); dense storage up to (deg_z, deg_w).
struct BivarPoly {
  int dz = 0, dw = 0;            // maximal degrees
  std::vector<Cx> c;             // c[a*(dw+1)+b] = coeff of z^a w^b

  BivarPoly() : c(1, Cx(0.0)) {}
  BivarPoly(int degz, int degw) : dz(degz), dw(degw), c((degz + 1) * (degw + 1), Cx(0.0)) {}
  Cx& at(int a, int b) { return c[a * (dw + 1) + b]; }
  Cx at(int a, int b) const { return (a < 0 || b < 0 || a > dz || b > dw) ? Cx(0.0) : c[a * (dw + 1) + b]; }

  static BivarPoly constant(Cx v) { BivarPoly p; p.c[0] = v; return p; }
  Cx eval(Cx z, Cx w) const;
  TSeries jet(Cx z0, Cx w0, int ord) const;  // Taylor about (z0, w0)
  BivarPoly operator+(const BivarPoly& o) const;
  BivarPoly operator*(const BivarPoly& o) const;
  BivarPoly operator*(Cx s) const;
  // z -> 1/z, w -> 1/w followed by multiplication with z^pz w^pw (chart swap)
  BivarPoly reciprocal_chart(int pz, int pw) const;
};

struct BivarRational {
  BivarPoly num, den;

  BivarRational() : num(), den(BivarPoly::constant(1.0)) {}
  BivarRational(BivarPoly n, BivarPoly d) : num(std::move(n)), den(std::move(d)) {}
  Cx eval(Cx z, Cx w) const { return num.eval(z, w) / den.eval(z, w); }
  TSeries jet(Cx z0, Cx w0, int ord) const { return num.jet(z0, w0, ord) * den.jet(z0, w0, ord).recip(); }
};

}  // namespace willoop

#endif
