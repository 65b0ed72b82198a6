#include "willoop/poly.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace willoop {

Cx Poly::eval(Cx z) const {
  Cx s = 0.0;
  for (int i = (int)c.size() - 1; i >= 0; --i) s = s * z + c[i];
  return s;
}

Poly Poly::derivative() const {
  if (c.size() <= 1) return Poly();
  std::vector<Cx> d(c.size() - 1);
  for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * Cx((double)i);
  return Poly(std::move(d));
}

Poly Poly::antiderivative() const {
  std::vector<Cx> d(c.size() + 1, Cx(0.0));
  for (size_t i = 0; i < c.size(); ++i) d[i + 1] = c[i] / Cx((double)(i + 1));
  return Poly(std::move(d));
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Cx> d(std::max(c.size(), o.c.size()), Cx(0.0));
  for (size_t i = 0; i < c.size(); ++i) d[i] += c[i];
  for (size_t i = 0; i < o.c.size(); ++i) d[i] += o.c[i];
  return Poly(std::move(d));
}

Poly Poly::operator-(const Poly& o) const { return *this + o * Cx(-1.0); }

Poly Poly::operator*(const Poly& o) const {
  std::vector<Cx> d(c.size() + o.c.size() - 1, Cx(0.0));
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j < o.c.size(); ++j) d[i + j] += c[i] * o.c[j];
  return Poly(std::move(d));
}

Poly Poly::operator*(Cx s) const {
  Poly r = *this;
  for (auto& v : r.c) v *= s;
  return r;
}

bool Poly::is_zero(double tol) const {
  for (const auto& v : c)
    if (std::abs(v) > tol) return false;
  return true;
}

void Poly::trim(double tol) {
  while (c.size() > 1 && std::abs(c.back()) <= tol) c.pop_back();
}

std::vector<Cx> Poly::roots() const {
  Poly p = *this;
  p.trim(0.0);
  int n = p.degree();
  if (n < 1) return {};
  CMat comp = CMat::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.c[i] / p.c[n];
  Eigen::ComplexEigenSolver<CMat> es(comp, false);
  std::vector<Cx> r(n);
  for (int i = 0; i < n; ++i) r[i] = es.eigenvalues()(i);
  return r;
}

Cx RationalFn::eval(Cx z) const { return num.eval(z) / den.eval(z); }

RationalFn RationalFn::derivative() const {
  return RationalFn(num.derivative() * den - num * den.derivative(), den * den);
}

bool RationalFn::is_polynomial(double tol) const {
  Poly d = den;
  d.trim(tol);
  return d.degree() == 0;
}

Cx BivarPoly::eval(Cx z, Cx w) const {
  Cx s = 0.0;
  for (int a = dz; a >= 0; --a) {
    Cx row = 0.0;
    for (int b = dw; b >= 0; --b) row = row * w + at(a, b);
    s = s * z + row;
  }
  return s;
}

TSeries BivarPoly::jet(Cx z0, Cx w0, int ord) const {
  TSeries Z = TSeries::var_z(z0, ord);
  TSeries W = TSeries::var_w(w0, ord);
  TSeries s = TSeries::constant(0.0, ord);
  for (int a = dz; a >= 0; --a) {
    TSeries row = TSeries::constant(0.0, ord);
    for (int b = dw; b >= 0; --b) row = row * W + at(a, b);
    s = s * Z + row;
  }
  return s;
}

BivarPoly BivarPoly::operator+(const BivarPoly& o) const {
  BivarPoly r(std::max(dz, o.dz), std::max(dw, o.dw));
  for (int a = 0; a <= r.dz; ++a)
    for (int b = 0; b <= r.dw; ++b) r.at(a, b) = at(a, b) + o.at(a, b);
  return r;
}

BivarPoly BivarPoly::operator*(const BivarPoly& o) const {
  BivarPoly r(dz + o.dz, dw + o.dw);
  for (int a = 0; a <= dz; ++a)
    for (int b = 0; b <= dw; ++b) {
      if (at(a, b) == Cx(0.0)) continue;
      for (int p = 0; p <= o.dz; ++p)
        for (int q = 0; q <= o.dw; ++q) r.at(a + p, b + q) += at(a, b) * o.at(p, q);
    }
  return r;
}

BivarPoly BivarPoly::operator*(Cx s) const {
  BivarPoly r = *this;
  for (auto& v : r.c) v *= s;
  return r;
}

BivarPoly BivarPoly::reciprocal_chart(int pz, int pw) const {
  if (pz < dz || pw < dw) throw Error("reciprocal_chart: clearing powers too small");
  BivarPoly r(pz, pw);
  for (int a = 0; a <= dz; ++a)
    for (int b = 0; b <= dw; ++b) r.at(pz - a, pw - b) = at(a, b);
  return r;
}

}  // namespace willoop
