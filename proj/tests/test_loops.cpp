#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "willoop/loops.hpp"
#include "willoop/lorentz.hpp"
#include "helpers.hpp"

using namespace willoop;
using namespace willoop::testing;

TEST_CASE("loop validation flags") {
  int dim = 6;
  Rng rng0(1);
  // constant block-diagonal k matrix: even degree, sigma-fixed
  LoopMat k = LoopMat::single(0, random_k_constant(rng0, dim));
  auto v = validate_loop(k);
  CHECK(v.twist_ok);
  CHECK(v.reality_ok);
  CHECK(v.group_ok);

  // lambda^{-1} times an off-diagonal p matrix: odd degree, twist ok
  Rng rng(2);
  CMat B(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) B(i, j) = crand(rng);
  LoopMat podd = LoopMat::single(-1, p_matrix(B));
  CHECK(validate_loop(podd).twist_ok);

  // lambda^{-1} times a block-diagonal k matrix: parity mismatch
  LoopMat bad = LoopMat::single(-1, random_k_constant(rng, dim));
  CHECK_FALSE(validate_loop(bad).twist_ok);
}

TEST_CASE("loop multiply and invert") {
  int dim = 6;
  Rng rng(3);
  // invert(I + lambda^{-1} N) with N^3 = 0 terminates exactly
  CVec u(4);
  u << 1, -1, 0, 0;
  CVec f(2);
  f << Cx(0.7, 0.2), Cx(-0.3, 0.4);
  CMat N = p_matrix(u * f.transpose());
  LoopMat g = LoopMat::identity(dim);
  g.add_coeff(-1, N);
  double tail = 0.0;
  LoopMat gi = g.inverse(8, &tail);
  CHECK(tail < 1e-12);
  LoopMat expect = LoopMat::identity(dim);
  expect.add_coeff(-1, CMat(-N));
  expect.add_coeff(-2, CMat(N * N));
  CHECK((gi - expect).norm() < 1e-12);

  // multiply(I, g) = g
  CHECK((LoopMat::identity(dim).mul(g) - g).norm() == 0.0);

  // roundtrip on a random twisted degree-2 loop
  LoopMat h = random_plus_loop(rng, dim, 3);
  LoopMat hi = h.inverse(16, &tail);
  LoopMat prod = h.mul(hi, 16);
  CHECK((prod - LoopMat::identity(dim)).norm() < 1e-12);
}

TEST_CASE("lambda consistency of evaluation") {
  Rng rng(5);
  LoopMat a = random_plus_loop(rng, 6, 2);
  LoopMat b = random_minus_loop(rng, 6, 2);
  LoopMat ab = a.mul(b);
  for (int k = 0; k < 5; ++k) {
    Cx lam = std::exp(Cx(0.0, 2.0 * PI * k / 5.0));
    CHECK((ab.eval(lam) - a.eval(lam) * b.eval(lam)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("birkhoff factorization recovers constructed factors") {
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    LoopMat gm = random_minus_loop(rng, 6, 2);
    LoopMat gp = random_plus_loop(rng, 6, 2);
    LoopMat g = gm.mul(gp);
    FactorPair fp = birkhoff_factorize(g, 12);
    CHECK(fp.residual < 1e-9);
    // normalized splitting is unique, so the factors must match
    CHECK((fp.left - gm).norm() < 1e-8 * std::max(1.0, gm.norm()));
    auto vl = validate_loop(fp.left);
    auto vr = validate_loop(fp.right);
    CHECK(vl.twist_ok);
    CHECK(vr.twist_ok);
  }
}

TEST_CASE("birkhoff trivial cases") {
  LoopMat id = LoopMat::identity(6);
  FactorPair fp = birkhoff_factorize(id, 4);
  CHECK((fp.left - id).norm() < 1e-14);
  CHECK((fp.right - id).norm() < 1e-12);
  // an already-normalized minus loop splits as (itself, I)
  Rng rng(9);
  LoopMat gm = random_minus_loop(rng, 6, 2);
  FactorPair fp2 = birkhoff_factorize(gm, 8);
  CHECK((fp2.left - gm).norm() < 1e-10);
  CHECK((fp2.right - LoopMat::identity(6)).norm() < 1e-10);
}

TEST_CASE("iwasawa factorization recovers real factor up to constant k gauge") {
  Rng rng(11);
  for (int t = 0; t < 8; ++t) {
    LoopMat F = random_real_loop(rng, 6, 2);
    LoopMat vp = random_plus_loop(rng, 6, 2);
    LoopMat g = F.mul(vp);
    IwasawaResult res = iwasawa_factorize(g, IwasawaForm::Noncompact, 10);
    REQUIRE(res.ok);
    CHECK(res.cell.variant == CellVariant::BigCell);
    CHECK(res.pair.residual < 1e-9 * std::max(1.0, g.norm()));
    auto v = validate_loop(res.pair.left);
    CHECK(v.twist_ok);
    CHECK(v.reality_ok);
    CHECK(v.group_ok);
    // recovered F equals constructed F up to right multiplication by constant k
    CMat k = res.pair.left.eval(1.0).inverse() * F.eval(1.0);
    CHECK((k.imag().cwiseAbs().maxCoeff()) < 1e-7);
    CHECK((k - k_part(k)).cwiseAbs().maxCoeff() < 1e-7);
    for (int s = 1; s < 5; ++s) {
      Cx lam = std::exp(Cx(0.0, 1.3 * s));
      CHECK((res.pair.left.eval(lam) * k - F.eval(lam)).cwiseAbs().maxCoeff() < 1e-7 * std::max(1.0, F.norm()));
    }
  }
}

TEST_CASE("iwasawa on an already real loop") {
  Rng rng(13);
  LoopMat F = random_real_loop(rng, 6, 3);
  IwasawaResult res = iwasawa_factorize(F, IwasawaForm::Noncompact, 8);
  REQUIRE(res.ok);
  CHECK(res.cell.variant == CellVariant::BigCell);
  // right factor is a constant in K^C intersect reality = K; product matches
  CHECK(res.pair.right.hi() == 0);
  CHECK(res.pair.residual < 1e-10 * std::max(1.0, F.norm()));
}

TEST_CASE("compact iwasawa succeeds on random loops") {
  Rng rng(17);
  for (int t = 0; t < 8; ++t) {
    LoopMat g = random_plus_loop(rng, 6, 2).mul(random_minus_loop(rng, 6, 1));
    IwasawaResult res = iwasawa_factorize(g, IwasawaForm::Compact, 10);
    REQUIRE(res.ok);
    CHECK(res.pair.residual < 1e-9 * std::max(1.0, g.norm()));
    // left factor fixed by the compact reality: coefficients satisfy
    // X_{-j} = I1 conj(X_j) I1
    const LoopMat& FU = res.pair.left;
    CMat J = minkowski_metric(6);
    double defect = 0.0;
    for (int j = FU.lo(); j <= FU.hi(); ++j)
      defect = std::max(defect, (FU.coeff(-j) - J * FU.coeff(j).conjugate() * J).cwiseAbs().maxCoeff());
    CHECK(defect < 1e-9 * std::max(1.0, FU.norm()));
  }
}
