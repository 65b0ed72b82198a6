#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "willoop/lorentz.hpp"
#include "willoop/tseries.hpp"
#include "willoop/poly.hpp"
#include "helpers.hpp"

using namespace willoop;

TEST_CASE("minkowski inner product") {
  CVec e0 = CVec::Zero(6);
  e0(0) = 1.0;
  CHECK(minkowski_inner(e0, e0) == Cx(-1.0));
  // bilinear, not hermitian
  CVec v = CVec::Zero(6);
  v(1) = I_UNIT;
  CHECK(minkowski_inner(v, v) == Cx(-1.0));
  // symmetry on random vectors
  testing::Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    CVec a(6), b(6);
    for (int i = 0; i < 6; ++i) {
      a(i) = testing::crand(rng);
      b(i) = testing::crand(rng);
    }
    CHECK(std::abs(minkowski_inner(a, b) - minkowski_inner(b, a)) < 1e-14);
  }
}

TEST_CASE("group elements preserve the metric") {
  testing::Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    CMat k = testing::random_k_constant(rng, 6);
    CHECK(validate_membership(k, Membership::Group).ok);
    CVec a(6), b(6);
    for (int i = 0; i < 6; ++i) {
      a(i) = testing::crand(rng);
      b(i) = testing::crand(rng);
    }
    Cx lhs = minkowski_inner(CVec(k * a), CVec(k * b));
    CHECK(std::abs(lhs - minkowski_inner(a, b)) < 1e-9);
  }
  CMat bad = CMat::Identity(6, 6);
  bad(0, 0) = 2.0;
  CHECK_FALSE(validate_membership(bad, Membership::Group).ok);
  CHECK(validate_membership(CMat::Identity(6, 6), Membership::Group).residual == 0.0);
}

TEST_CASE("sphere projection") {
  CVec x(6);
  x << 1, 0.5, std::sqrt(0.75), 0, 0, 0;
  CVec y = sphere_projection(x);
  CHECK(std::abs(y.norm() - 1.0) < 1e-14);
  CHECK((sphere_projection(CVec(2.0 * x)) - y).norm() < 1e-14);
  CVec tl(6);
  tl << -1, 0.5, std::sqrt(0.75), 0, 0, 0;
  CHECK_THROWS(sphere_projection(tl));
}

TEST_CASE("involutions square to identity and commute") {
  testing::Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    CMat X(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) X(i, j) = testing::crand(rng);
    for (auto w : {Involution::Sigma, Involution::Tau, Involution::Theta}) {
      CMat XX = apply_involution(w, apply_involution(w, X));
      CHECK((XX - X).cwiseAbs().maxCoeff() < 1e-12);
    }
    CMat st = apply_involution(Involution::Sigma, apply_involution(Involution::Tau, X));
    CMat ts = apply_involution(Involution::Tau, apply_involution(Involution::Sigma, X));
    CHECK((st - ts).cwiseAbs().maxCoeff() < 1e-12);
    CMat sth = apply_involution(Involution::Sigma, apply_involution(Involution::Theta, X));
    CMat ths = apply_involution(Involution::Theta, apply_involution(Involution::Sigma, X));
    CHECK((sth - ths).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sigma fixes k and flips p") {
  testing::Rng rng(5);
  CMat X(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) X(i, j) = testing::crand(rng);
  CMat K = k_part(X), P = p_part(X);
  CHECK((apply_involution(Involution::Sigma, K) - K).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((apply_involution(Involution::Sigma, P) + P).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((apply_involution(Involution::Tau, CMat(K.real().cast<Cx>())) - K.real().cast<Cx>()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("theta fixed algebra has imaginary first row") {
  // Fix(theta) = { X : i X(0,j) real, rest real } for X in so(1,n+3,C)
  testing::Rng rng(17);
  CVec v(5);
  for (int i = 0; i < 5; ++i) v(i) = I_UNIT * testing::urand(rng);
  CMat W = CMat::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      W(i, j) = testing::urand(rng);
      W(j, i) = -W(i, j);
    }
  CMat X = CMat::Zero(6, 6);
  X.row(0).tail(5) = v.transpose();
  X.col(0).tail(5) = v;
  X.bottomRightCorner(5, 5) = W;
  CHECK(validate_membership(X, Membership::Algebra).ok);
  CHECK((apply_involution(Involution::Theta, X, true) - X).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("tseries arithmetic") {
  int ord = 6;
  TSeries z = TSeries::var_z(Cx(0.3, 0.1), ord);
  TSeries w = TSeries::var_w(Cx(0.3, -0.1), ord);
  TSeries f = (z * w + 1.0).recip();  // 1/(1+zw)
  Cx dz(0.01, -0.02);
  Cx exact = 1.0 / (1.0 + (Cx(0.3, 0.1) + dz) * (Cx(0.3, -0.1) + std::conj(dz)));
  CHECK(std::abs(f.eval(dz, std::conj(dz)) - exact) < 1e-12);

  TSeries s = (z * w + 1.0).sqrt();
  CHECK(std::abs(s.value() - std::sqrt(1.0 + Cx(0.3, 0.1) * Cx(0.3, -0.1))) < 1e-14);
  CHECK((s * s - (z * w + 1.0)).norm() < 1e-12);

  // conj_swap: series of conj(f) when w = conj z
  TSeries g = z * z * w + z * 2.0;
  TSeries gc = g.conj_swap();
  Cx val = g.eval(dz, std::conj(dz));
  CHECK(std::abs(gc.eval(dz, std::conj(dz)) - std::conj(val)) < 1e-14);

  // derivative: d/dz (1/(1+zw)) = -w/(1+zw)^2
  TSeries df = f.dz();
  TSeries expect = -w * (f * f);
  CHECK((df - expect.truncated(df.order())).norm() < 1e-12);
}

TEST_CASE("tseries compose") {
  int ord = 5;
  // f(z,w) = z^2 w, substitute z = m(u) = (2u+1)/(u+2) at u0, w = conj chart
  Cx u0(0.2, 0.3);
  TSeries U = TSeries::var_z(u0, ord);
  TSeries V = TSeries::var_w(std::conj(u0), ord);
  TSeries M = (U * 2.0 + 1.0) * (U + 2.0).recip();
  TSeries Mc = M.conj_swap();
  Cx z0 = M.value();
  TSeries Z = TSeries::var_z(z0, ord);
  TSeries W = TSeries::var_w(std::conj(z0), ord);
  TSeries f = Z * Z * W;
  TSeries comp = f.compose(M, Mc);
  Cx du(0.013, -0.007);
  auto m = [](Cx u) { return (2.0 * u + 1.0) / (u + 2.0); };
  Cx zz = m(u0 + du);
  Cx exact = zz * zz * std::conj(zz);
  CHECK(std::abs(comp.eval(du, std::conj(du)) - exact) < 1e-10);
}

TEST_CASE("poly and rational basics") {
  Poly p({Cx(1.0), Cx(0.0), Cx(1.0)});  // 1 + z^2
  auto r = p.roots();
  REQUIRE(r.size() == 2);
  CHECK(std::abs(std::abs(r[0].imag()) - 1.0) < 1e-12);
  Poly q = p.derivative();
  CHECK(q.degree() == 1);
  CHECK(std::abs(q.eval(Cx(2.0)) - Cx(4.0)) < 1e-14);
  RationalFn f(Poly({Cx(1.0)}), p);  // 1/(1+z^2)
  RationalFn fd = f.derivative();
  Cx z(0.3, 0.2);
  Cx expect = -2.0 * z / ((1.0 + z * z) * (1.0 + z * z));
  CHECK(std::abs(fd.eval(z) - expect) < 1e-12);
}

TEST_CASE("bivar poly jets against direct evaluation") {
  BivarPoly P(2, 2);
  P.at(0, 0) = 1.0;
  P.at(1, 1) = 2.0;
  P.at(2, 2) = 0.25;
  Cx z0(0.4, 0.2);
  TSeries j = P.jet(z0, std::conj(z0), 4);
  Cx dz(0.02, 0.01);
  CHECK(std::abs(j.eval(dz, std::conj(dz)) - P.eval(z0 + dz, std::conj(z0 + dz))) < 1e-12);
  BivarPoly R = P.reciprocal_chart(2, 2);
  // z^2 w^2 P(1/z, 1/w)
  Cx z(1.7, -0.4), w = std::conj(z);
  Cx lhs = R.eval(z, w);
  Cx rhs = z * z * w * w * P.eval(1.0 / z, 1.0 / w);
  CHECK(std::abs(lhs - rhs) < 1e-12);
}
