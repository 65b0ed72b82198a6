#ifndef WILLOOP_TEST_HELPERS_HPP
#define WILLOOP_TEST_HELPERS_HPP

#include "willoop/loops.hpp"
#include "willoop/lorentz.hpp"

#include <random>

namespace willoop::testing {

using Rng = std::mt19937_64;

inline double urand(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Cx crand(Rng& rng, double scale = 1.0) {
  return Cx(urand(rng), urand(rng)) * scale;
}

// random element of K = SO+(1,3) x SO(n), as a product of plane rotations and boosts
inline CMat random_k_constant(Rng& rng, int dim, double scale = 1.0) {
  CMat k = CMat::Identity(dim, dim);
  k = k * plane_rotation(dim, 1, 2, urand(rng) * scale);
  k = k * plane_rotation(dim, 2, 3, urand(rng) * scale);
  k = k * plane_boost(dim, 1, urand(rng) * scale * 0.5);
  k = k * plane_boost(dim, 3, urand(rng) * scale * 0.5);
  for (int i = 4; i + 1 < dim; ++i) k = k * plane_rotation(dim, i, i + 1, urand(rng) * scale);
  return k;
}

// p-part matrix [[0, B], [-B^t I13, 0]] from a 4 x n block
inline CMat p_matrix(const CMat& B) {
  int n = (int)B.cols();
  CMat M = CMat::Zero(4 + n, 4 + n);
  M.topRightCorner(4, n) = B;
  CMat I13 = CMat::Identity(4, 4);
  I13(0, 0) = -1.0;
  M.bottomLeftCorner(n, 4) = -B.transpose() * I13;
  return M;
}

// complex null 4-vector: random Lorentz image of (1,-1,0,0) or (0,0,1,i)
inline CVec random_null4(Rng& rng, bool real_null) {
  CVec u(4);
  if (real_null)
    u << 1, -1, 0, 0;
  else
    u << 0, 0, 1, I_UNIT;
  CMat A = random_k_constant(rng, 6, 1.0).topLeftCorner(4, 4);
  return A * u;
}

// exp(lambda^deg a M(B)) with B = u f^t rank one and u null: exact polynomial loop
inline LoopMat nilpotent_factor(Rng& rng, int dim, int deg, bool real_null) {
  int n = dim - 4;
  CVec u = random_null4(rng, real_null);
  CVec f(n);
  for (int i = 0; i < n; ++i) f(i) = crand(rng, 0.6);
  CMat M = p_matrix(u * f.transpose());
  CMat M2 = M * M;
  LoopMat g = LoopMat::identity(dim);
  g.add_coeff(deg, M);
  g.add_coeff(2 * deg, CMat(0.5 * M2));
  return g;
}

// real twisted loop exp(lambda a M + lambda^{-1} conj(a M)) with real null direction
inline LoopMat real_null_factor(Rng& rng, int dim) {
  int n = dim - 4;
  CVec u(4);
  u << 1, -1, 0, 0;
  CMat A = random_k_constant(rng, dim, 0.8).topLeftCorner(4, 4);
  u = A * u;
  CVec f(n);
  for (int i = 0; i < n; ++i) f(i) = crand(rng, 0.6);
  CMat M = p_matrix(u * f.transpose());
  CMat Mb = M.conjugate();
  LoopMat X(dim);
  X.set_coeff(1, M);
  X.set_coeff(-1, Mb);
  // X^3 = 0 for this family, so the exponential terminates
  LoopMat X2 = X.mul(X);
  LoopMat g = LoopMat::identity(dim) + X + X2.scaled(0.5);
  return g;
}

// rotation loop in a spacelike coordinate plane, real on the circle
inline LoopMat rotation_loop(int dim, int i, int j, int deg2, double amp) {
  // [[cos, -sin], [sin, cos]] with angle deg2 * arg(lambda) * 2 scaled: uses
  // c = (w + w^{-1})/2, s = (w - w^{-1})/(2i), w = amp-free unit monomial
  LoopMat g = LoopMat::identity(dim);
  (void)amp;
  CMat c = CMat::Zero(dim, dim), s = CMat::Zero(dim, dim), base = CMat::Identity(dim, dim);
  base(i, i) = 0.0;
  base(j, j) = 0.0;
  c(i, i) = 0.5;
  c(j, j) = 0.5;
  s(i, j) = Cx(0, 0.5);   // -i * (w)/2 contribution at +deg
  s(j, i) = Cx(0, -0.5);
  LoopMat r(dim);
  r.set_coeff(0, base);
  r.add_coeff(2 * deg2, CMat(c - s));
  r.add_coeff(-2 * deg2, CMat(c + s));
  return r;
}

// random real twisted loop (left Iwasawa factor oracle)
inline LoopMat random_real_loop(Rng& rng, int dim, int blocks = 3) {
  LoopMat g = LoopMat::single(0, random_k_constant(rng, dim, 0.7));
  for (int b = 0; b < blocks; ++b) {
    int pick = (int)(urand(rng, 0.0, 3.0));
    if (pick == 0)
      g = g.mul(real_null_factor(rng, dim));
    else if (pick == 1)
      g = g.mul(rotation_loop(dim, 2, 3, 1, 1.0));
    else
      g = g.mul(LoopMat::single(0, random_k_constant(rng, dim, 0.7)));
  }
  return g;
}

// random complex plus loop (right factor oracle), g(0) in K^C
inline LoopMat random_plus_loop(Rng& rng, int dim, int blocks = 3) {
  // constant complex block-diagonal orthogonal factor via exp of k-algebra
  auto kc_constant = [&](double scale) {
    CMat X = CMat::Zero(dim, dim);
    auto add = [&](int i, int j, Cx v) {
      double sgn = (i == 0 || j == 0) ? 1.0 : -1.0;
      X(i, j) = v;
      X(j, i) = sgn * v;
    };
    add(0, 1, crand(rng, scale));
    add(0, 2, crand(rng, scale));
    add(1, 2, crand(rng, scale));
    add(2, 3, crand(rng, scale));
    for (int i = 4; i + 1 < dim; ++i) add(i, i + 1, crand(rng, scale));
    return CMat(X.exp());
  };
  LoopMat g = LoopMat::single(0, kc_constant(0.5));
  for (int b = 0; b < blocks; ++b) {
    int pick = (int)(urand(rng, 0.0, 2.0));
    if (pick == 0)
      g = g.mul(nilpotent_factor(rng, dim, 1, urand(rng) > 0));
    else
      g = g.mul(LoopMat::single(0, kc_constant(0.4)));
  }
  return g;
}

// random normalized minus loop, I + O(lambda^{-1})
inline LoopMat random_minus_loop(Rng& rng, int dim, int blocks = 2) {
  LoopMat g = LoopMat::identity(dim);
  for (int b = 0; b < blocks; ++b) g = g.mul(nilpotent_factor(rng, dim, -1, urand(rng) > 0));
  return g;
}

}  // namespace willoop::testing

#endif
