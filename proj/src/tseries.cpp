#include "willoop/tseries.hpp"

#include <cmath>

namespace willoop {

TSeries TSeries::constant(Cx v, int ord) {
  TSeries t(ord);
  t.c_[0] = v;
  return t;
}

TSeries TSeries::var_z(Cx z0, int ord) {
  TSeries t(ord);
  t.c_[0] = z0;
  if (ord >= 1) t.c_[idx(1, 0)] = 1.0;
  return t;
}

TSeries TSeries::var_w(Cx w0, int ord) {
  TSeries t(ord);
  t.c_[0] = w0;
  if (ord >= 1) t.c_[idx(0, 1)] = 1.0;
  return t;
}

Cx& TSeries::at(int a, int b) { return c_[idx(a, b)]; }
Cx TSeries::at(int a, int b) const {
  if (a < 0 || b < 0 || a + b > ord_) return Cx(0.0);
  return c_[idx(a, b)];
}

TSeries TSeries::operator+(const TSeries& o) const {
  int m = std::min(ord_, o.ord_);
  TSeries r(m);
  for (int d = 0; d <= m; ++d)
    for (int b = 0; b <= d; ++b) r.c_[idx(d - b, b)] = at(d - b, b) + o.at(d - b, b);
  return r;
}

TSeries TSeries::operator-(const TSeries& o) const {
  int m = std::min(ord_, o.ord_);
  TSeries r(m);
  for (int d = 0; d <= m; ++d)
    for (int b = 0; b <= d; ++b) r.c_[idx(d - b, b)] = at(d - b, b) - o.at(d - b, b);
  return r;
}

TSeries TSeries::operator-() const {
  TSeries r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

TSeries TSeries::operator*(const TSeries& o) const {
  int m = std::min(ord_, o.ord_);
  TSeries r(m);
  for (int d1 = 0; d1 <= m; ++d1)
    for (int b1 = 0; b1 <= d1; ++b1) {
      Cx v1 = at(d1 - b1, b1);
      if (v1 == Cx(0.0)) continue;
      for (int d2 = 0; d1 + d2 <= m; ++d2)
        for (int b2 = 0; b2 <= d2; ++b2) {
          Cx v2 = o.at(d2 - b2, b2);
          if (v2 == Cx(0.0)) continue;
          r.c_[idx(d1 + d2 - b1 - b2, b1 + b2)] += v1 * v2;
        }
    }
  return r;
}

TSeries TSeries::operator*(Cx s) const {
  TSeries r = *this;
  for (auto& v : r.c_) v *= s;
  return r;
}

TSeries TSeries::operator+(Cx s) const {
  TSeries r = *this;
  r.c_[0] += s;
  return r;
}

TSeries TSeries::operator-(Cx s) const {
  TSeries r = *this;
  r.c_[0] -= s;
  return r;
}

TSeries& TSeries::operator+=(const TSeries& o) {
  *this = *this + o;
  return *this;
}

TSeries& TSeries::operator-=(const TSeries& o) {
  *this = *this - o;
  return *this;
}

TSeries TSeries::recip() const {
  Cx c0 = c_[0];
  if (std::abs(c0) == 0.0) throw Error("TSeries::recip: zero constant term");
  // Newton iteration r <- r(2 - f r) doubles the correct order each step.
  TSeries r = constant(1.0 / c0, ord_);
  int steps = 1;
  while ((1 << steps) <= ord_ + 1) ++steps;
  for (int k = 0; k <= steps; ++k) {
    TSeries t = constant(2.0, ord_) - (*this) * r;
    r = r * t;
  }
  return r;
}

TSeries TSeries::sqrt() const {
  Cx c0 = c_[0];
  if (std::abs(c0) == 0.0) throw Error("TSeries::sqrt: zero constant term");
  TSeries s = constant(std::sqrt(c0), ord_);
  int steps = 1;
  while ((1 << steps) <= ord_ + 1) ++steps;
  for (int k = 0; k <= steps; ++k) {
    s = (s + (*this) * s.recip()) * Cx(0.5);
  }
  return s;
}

TSeries TSeries::conj_swap() const {
  TSeries r(ord_);
  for (int d = 0; d <= ord_; ++d)
    for (int b = 0; b <= d; ++b) r.c_[idx(d - b, b)] = std::conj(at(b, d - b));
  return r;
}

TSeries TSeries::dz() const {
  int m = std::max(0, ord_ - 1);
  TSeries r(m);
  for (int d = 0; d <= m; ++d)
    for (int b = 0; b <= d; ++b) r.c_[idx(d - b, b)] = at(d - b + 1, b) * Cx(d - b + 1.0);
  return r;
}

TSeries TSeries::dw() const {
  int m = std::max(0, ord_ - 1);
  TSeries r(m);
  for (int d = 0; d <= m; ++d)
    for (int b = 0; b <= d; ++b) r.c_[idx(d - b, b)] = at(d - b, b + 1) * Cx(b + 1.0);
  return r;
}

TSeries TSeries::holomorphic_part() const {
  TSeries r(ord_);
  for (int a = 0; a <= ord_; ++a) r.c_[idx(a, 0)] = at(a, 0);
  return r;
}

TSeries TSeries::truncated(int new_ord) const {
  TSeries r(new_ord);
  for (int d = 0; d <= new_ord; ++d)
    for (int b = 0; b <= d; ++b) r.at(d - b, b) = at(d - b, b);
  return r;
}

TSeries TSeries::compose(const TSeries& Z, const TSeries& W) const {
  int m = std::min(Z.order(), W.order());
  TSeries dz_ = Z - Z.value();
  TSeries dw_ = W - W.value();
  TSeries out(m);
  // powers of the local increments, built incrementally
  std::vector<TSeries> zp(ord_ + 1), wp(ord_ + 1);
  zp[0] = constant(1.0, m);
  wp[0] = constant(1.0, m);
  for (int k = 1; k <= ord_; ++k) {
    zp[k] = zp[k - 1] * dz_;
    wp[k] = wp[k - 1] * dw_;
  }
  for (int d = 0; d <= ord_; ++d)
    for (int b = 0; b <= d; ++b) {
      Cx coeff = at(d - b, b);
      if (coeff == Cx(0.0)) continue;
      out += zp[d - b] * wp[b] * coeff;
    }
  return out;
}

Cx TSeries::eval(Cx dzv, Cx dwv) const {
  Cx s = 0.0;
  for (int d = ord_; d >= 0; --d)
    for (int b = 0; b <= d; ++b) {
      Cx term = at(d - b, b);
      for (int i = 0; i < d - b; ++i) term *= dzv;
      for (int i = 0; i < b; ++i) term *= dwv;
      s += term;
    }
  return s;
}

double TSeries::norm() const {
  double s = 0.0;
  for (const auto& v : c_) s = std::max(s, std::abs(v));
  return s;
}

JetVec JetVec::operator+(const JetVec& o) const {
  JetVec r = *this;
  for (int i = 0; i < dim(); ++i) r.c[i] = c[i] + o.c[i];
  return r;
}

JetVec JetVec::operator-(const JetVec& o) const {
  JetVec r = *this;
  for (int i = 0; i < dim(); ++i) r.c[i] = c[i] - o.c[i];
  return r;
}

JetVec JetVec::operator*(const TSeries& s) const {
  JetVec r = *this;
  for (auto& comp : r.c) comp = comp * s;
  return r;
}

JetVec JetVec::operator*(Cx s) const {
  JetVec r = *this;
  for (auto& comp : r.c) comp = comp * s;
  return r;
}

JetVec& JetVec::operator+=(const JetVec& o) {
  for (int i = 0; i < dim(); ++i) c[i] += o.c[i];
  return *this;
}

JetVec JetVec::dz() const {
  JetVec r = *this;
  for (auto& comp : r.c) comp = comp.dz();
  return r;
}

JetVec JetVec::dw() const {
  JetVec r = *this;
  for (auto& comp : r.c) comp = comp.dw();
  return r;
}

JetVec JetVec::conj_swap() const {
  JetVec r = *this;
  for (auto& comp : r.c) comp = comp.conj_swap();
  return r;
}

CVec JetVec::value() const {
  CVec v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = c[i].value();
  return v;
}

TSeries minkowski_inner(const JetVec& u, const JetVec& v) {
  if (u.dim() != v.dim()) throw DimensionMismatch("jet inner: size mismatch");
  TSeries s = -(u.c[0] * v.c[0]);
  for (int i = 1; i < u.dim(); ++i) s += u.c[i] * v.c[i];
  return s;
}

}  // namespace willoop
