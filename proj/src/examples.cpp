#include "willoop/examples.hpp"
#include "willoop/providers.hpp"
#include "willoop/lorentz.hpp"
#include "willoop/config.hpp"

#include <cmath>
#include <map>

namespace willoop {

namespace {

struct PB {
  // small helper to accumulate bivariate polynomials
  std::map<std::pair<int, int>, Cx> m;
  PB& add(int a, int b, Cx c) {
    m[{a, b}] += c;
    return *this;
  }
  BivarPoly done() const {
    int dz = 0, dw = 0;
    for (const auto& [k, v] : m) {
      (void)v;
      dz = std::max(dz, k.first);
      dw = std::max(dw, k.second);
    }
    BivarPoly p(dz, dw);
    for (const auto& [k, v] : m) p.at(k.first, k.second) += v;
    return p;
  }
};

BivarRational rat(const BivarPoly& p) { return BivarRational(p, BivarPoly::constant(1.0)); }

// z^k as a rational function of one variable
RationalFn zpow(Cx coeff, int k) {
  std::vector<Cx> c(k + 1, Cx(0.0));
  c[k] = coeff;
  return RationalFn::poly(Poly(c));
}

CMat rot_block(double t) {
  CMat r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

CMat symmetry_blocks(int dim, const std::vector<int>& multiples, double t) {
  CMat R = CMat::Identity(dim, dim);
  int pos = 1;
  for (int m : multiples) {
    R.block(pos, pos, 2, 2) = rot_block(m * t);
    pos += 2;
  }
  return R;
}

std::shared_ptr<JetProvider> make_s4_plane(Cx lam, bool chart2) {
  Cx li = 1.0 / lam;
  std::vector<BivarPoly> P(6);
  P[0] = PB().add(0, 0, 1).add(1, 1, 1).add(2, 2, 0.25).done();
  P[1] = PB().add(1, 1, 1).add(0, 0, -1).add(2, 2, -0.25).done();
  P[2] = PB().add(1, 0, I_UNIT).add(0, 1, -I_UNIT).done();
  P[3] = PB().add(1, 0, -1).add(0, 1, -1).done();
  P[4] = PB().add(2, 1, -0.5 * I_UNIT * li).add(1, 2, 0.5 * I_UNIT * lam).done();
  P[5] = PB().add(2, 1, 0.5 * li).add(1, 2, 0.5 * lam).done();
  std::vector<BivarRational> comps;
  for (auto& p : P) comps.push_back(rat(chart2 ? p.reciprocal_chart(2, 2) : p));
  return std::make_shared<RationalLiftSurface>(std::move(comps));
}

std::shared_ptr<JetProvider> make_s4_branch(Cx lam, bool chart2) {
  Cx li = 1.0 / lam;
  std::vector<BivarPoly> P(6);
  P[0] = PB().add(0, 0, 1).add(1, 1, 1).add(2, 2, 0.25).done();
  P[1] = PB().add(0, 0, 1).add(1, 1, -1).add(2, 2, -0.25).done();
  P[2] = PB().add(1, 0, -I_UNIT).add(0, 1, I_UNIT).done();
  P[3] = PB().add(1, 0, -1).add(0, 1, -1).done();
  P[4] = PB().add(2, 0, 0.5 * I_UNIT * li).add(0, 2, -0.5 * I_UNIT * lam).done();
  P[5] = PB().add(2, 0, -0.5 * li).add(0, 2, -0.5 * lam).done();
  std::vector<BivarRational> comps;
  for (auto& p : P) comps.push_back(rat(chart2 ? p.reciprocal_chart(2, 2) : p));
  return std::make_shared<RationalLiftSurface>(std::move(comps));
}

std::shared_ptr<JetProvider> make_s6_nonsw(Cx lam, bool chart2) {
  Cx li = 1.0 / lam;
  std::vector<BivarPoly> P(8);
  P[0] = PB().add(0, 0, 1).add(1, 1, 1).add(2, 2, 1.25).add(3, 3, 4.0 / 9).add(4, 4, 1.0 / 36).done();
  P[1] = PB().add(0, 0, 1).add(1, 1, -1).add(2, 2, -0.75).add(3, 3, 4.0 / 9).add(4, 4, -1.0 / 36).done();
  // -i (z - w)(1 + (zw)^3/9)
  P[2] = PB()
             .add(1, 0, -I_UNIT)
             .add(0, 1, I_UNIT)
             .add(4, 3, -I_UNIT / 9.0)
             .add(3, 4, I_UNIT / 9.0)
             .done();
  P[3] = PB().add(1, 0, 1).add(0, 1, 1).add(4, 3, 1.0 / 9).add(3, 4, 1.0 / 9).done();
  // -i (li z^2 - lam w^2)(1 - (zw)^2/12)
  P[4] = PB()
             .add(2, 0, -I_UNIT * li)
             .add(0, 2, I_UNIT * lam)
             .add(4, 2, I_UNIT * li / 12.0)
             .add(2, 4, -I_UNIT * lam / 12.0)
             .done();
  P[5] = PB()
             .add(2, 0, li)
             .add(0, 2, lam)
             .add(4, 2, -li / 12.0)
             .add(2, 4, -lam / 12.0)
             .done();
  // -(i/2) zw (li z - lam w)(1 + 4 zw /3)
  P[6] = PB()
             .add(2, 1, -0.5 * I_UNIT * li)
             .add(1, 2, 0.5 * I_UNIT * lam)
             .add(3, 2, -2.0 / 3.0 * I_UNIT * li)
             .add(2, 3, 2.0 / 3.0 * I_UNIT * lam)
             .done();
  P[7] = PB()
             .add(2, 1, 0.5 * li)
             .add(1, 2, 0.5 * lam)
             .add(3, 2, 2.0 / 3.0 * li)
             .add(2, 3, 2.0 / 3.0 * lam)
             .done();
  std::vector<BivarRational> comps;
  for (auto& p : P) comps.push_back(rat(chart2 ? p.reciprocal_chart(4, 4) : p));
  return std::make_shared<RationalLiftSurface>(std::move(comps));
}

std::shared_ptr<JetProvider> make_s6_adjoint(bool chart2) {
  std::vector<BivarPoly> P(8);
  P[0] = PB().add(0, 0, 1).add(1, 1, 1).add(2, 2, 0.25).add(3, 3, 1.0 / 9).done();
  P[1] = PB().add(0, 0, -1).add(1, 1, 1).add(2, 2, -0.25).add(3, 3, -1.0 / 9).done();
  P[2] = PB().add(2, 1, -0.5 * I_UNIT).add(1, 2, 0.5 * I_UNIT).done();
  P[3] = PB().add(2, 1, 0.5).add(1, 2, 0.5).done();
  P[4] = PB().add(3, 1, -I_UNIT / 3.0).add(1, 3, I_UNIT / 3.0).done();
  P[5] = PB().add(3, 1, 1.0 / 3.0).add(1, 3, 1.0 / 3.0).done();
  P[6] = PB().add(1, 0, I_UNIT).add(0, 1, -I_UNIT).done();
  P[7] = PB().add(1, 0, -1).add(0, 1, -1).done();
  std::vector<BivarRational> comps;
  for (auto& p : P) comps.push_back(rat(chart2 ? p.reciprocal_chart(4, 4) : p));
  return std::make_shared<RationalLiftSurface>(std::move(comps));
}

std::shared_ptr<JetProvider> make_veronese(Cx lam, bool chart2) {
  Cx li = 1.0 / lam;
  double rt3 = std::sqrt(3.0);
  std::vector<BivarPoly> P(6);
  P[0] = PB().add(0, 0, 1).add(1, 1, 2).add(2, 2, 1).done();
  P[1] = PB().add(1, 1, 2).add(0, 0, -1).add(1, 1, 2).add(2, 2, -1).done();
  // 2 zw - (1 - zw)^2 = -1 + 4 zw - (zw)^2
  P[1] = PB().add(0, 0, -1).add(1, 1, 4).add(2, 2, -1).done();
  P[2] = PB().add(1, 0, rt3).add(0, 1, rt3).add(2, 1, -rt3).add(1, 2, -rt3).done();
  P[3] = PB()
             .add(1, 0, -I_UNIT * rt3)
             .add(0, 1, I_UNIT * rt3)
             .add(2, 1, I_UNIT * rt3)
             .add(1, 2, -I_UNIT * rt3)
             .done();
  P[4] = PB().add(2, 0, rt3 * li).add(0, 2, rt3 * lam).done();
  P[5] = PB().add(2, 0, -I_UNIT * rt3 * li).add(0, 2, I_UNIT * rt3 * lam).done();
  std::vector<BivarRational> comps;
  for (auto& p : P) comps.push_back(rat(chart2 ? p.reciprocal_chart(2, 2) : p));
  return std::make_shared<RationalLiftSurface>(std::move(comps));
}

std::shared_ptr<JetProvider> make_cylinder(double a, double b) {
  using S = SeparableSurface;
  std::vector<S::Term> t;
  t.push_back({0, 1.0, S::One, 0, S::Cosh, a});
  t.push_back({1, 1.0, S::One, 0, S::Sinh, a});
  t.push_back({2, 1.0, S::Cos, 1, S::Cos, b});
  t.push_back({3, 1.0, S::Cos, 1, S::Sin, b});
  t.push_back({4, 1.0, S::Sin, 1, S::Cos, b});
  t.push_back({5, 1.0, S::Sin, 1, S::Sin, b});
  return std::make_shared<SeparableSurface>(6, std::move(t));
}

std::shared_ptr<JetProvider> make_flat_torus(double p) {
  using S = SeparableSurface;
  double q = std::sqrt(1.0 - p * p);
  std::vector<S::Term> t;
  t.push_back({0, 1.0, S::One, 0, S::One, 0});
  t.push_back({1, p, S::Cos, 1.0 / p, S::One, 0});
  t.push_back({2, p, S::Sin, 1.0 / p, S::One, 0});
  t.push_back({3, q, S::One, 0, S::Cos, 1.0 / q});
  t.push_back({4, q, S::One, 0, S::Sin, 1.0 / q});
  return std::make_shared<SeparableSurface>(6, std::move(t));
}

std::shared_ptr<JetProvider> make_round_sphere(bool chart2) {
  std::vector<BivarPoly> P(6);
  P[0] = PB().add(0, 0, 1).add(1, 1, 1).done();
  P[1] = PB().add(1, 0, 1).add(0, 1, 1).done();
  P[2] = PB().add(1, 0, -I_UNIT).add(0, 1, I_UNIT).done();
  P[3] = PB().add(1, 1, 1).add(0, 0, -1).done();
  P[4] = BivarPoly();
  P[5] = BivarPoly();
  std::vector<BivarRational> comps;
  for (auto& p : P) comps.push_back(rat(chart2 ? p.reciprocal_chart(1, 1) : p));
  return std::make_shared<RationalLiftSurface>(std::move(comps));
}

Potential potential_s4_plane() {
  std::vector<std::vector<RationalFn>> B(4, std::vector<RationalFn>(2));
  B[0][0] = zpow(-0.5 * I_UNIT, 0);
  B[0][1] = zpow(0.5, 0);
  B[1][0] = zpow(0.5 * I_UNIT, 0);
  B[1][1] = zpow(-0.5, 0);
  B[2][0] = zpow(0.5, 1);
  B[2][1] = zpow(0.5 * I_UNIT, 1);
  B[3][0] = zpow(0.5 * I_UNIT, 1);
  B[3][1] = zpow(-0.5, 1);
  return Potential::normalized(2, 0.0, B);
}

Potential potential_s4_branch() {
  std::vector<std::vector<RationalFn>> B(4, std::vector<RationalFn>(2));
  B[0][0] = zpow(-0.5 * I_UNIT, 1);
  B[0][1] = zpow(0.5, 1);
  B[1][0] = zpow(0.5 * I_UNIT, 1);
  B[1][1] = zpow(-0.5, 1);
  B[2][0] = zpow(0.5, 0);
  B[2][1] = zpow(0.5 * I_UNIT, 0);
  B[3][0] = zpow(0.5 * I_UNIT, 0);
  B[3][1] = zpow(-0.5, 0);
  return Potential::normalized(2, 0.0, B);
}

Potential potential_s6_nonsw() {
  std::vector<std::vector<RationalFn>> B(4, std::vector<RationalFn>(4));
  B[0][0] = zpow(I_UNIT, 1);
  B[0][1] = zpow(-1.0, 1);
  B[0][2] = zpow(-0.5 * I_UNIT, 0);
  B[0][3] = zpow(0.5, 0);
  B[1][0] = zpow(-I_UNIT, 1);
  B[1][1] = zpow(1.0, 1);
  B[1][2] = zpow(-0.5 * I_UNIT, 0);
  B[1][3] = zpow(0.5, 0);
  B[2][0] = zpow(-1.0, 0);
  B[2][1] = zpow(-I_UNIT, 0);
  B[2][2] = zpow(-0.5, 1);
  B[2][3] = zpow(-0.5 * I_UNIT, 1);
  B[3][0] = zpow(I_UNIT, 0);
  B[3][1] = zpow(-1.0, 0);
  B[3][2] = zpow(-0.5 * I_UNIT, 1);
  B[3][3] = zpow(0.5, 1);
  return Potential::normalized(4, 0.0, B);
}

Potential potential_veronese() {
  double rt2 = std::sqrt(2.0);
  std::vector<std::vector<RationalFn>> B(4, std::vector<RationalFn>(2));
  B[0][0] = zpow(5.0 / rt2, 1);
  B[0][1] = zpow(-5.0 * I_UNIT / rt2, 1);
  B[1][0] = zpow(-7.0 / rt2, 1);
  B[1][1] = zpow(7.0 * I_UNIT / rt2, 1);
  B[2][0] = RationalFn::poly(Poly({Cx(-1.0), Cx(0.0), Cx(3.0)}));
  B[2][1] = RationalFn::poly(Poly({I_UNIT, Cx(0.0), -3.0 * I_UNIT}));
  B[3][0] = RationalFn::poly(Poly({-I_UNIT, Cx(0.0), -3.0 * I_UNIT}));
  B[3][1] = RationalFn::poly(Poly({Cx(-1.0), Cx(0.0), Cx(-3.0)}));
  return Potential::normalized(2, 0.0, B);
}

}  // namespace

CMat veronese_eta_minus1() {
  Potential eta = potential_veronese();
  // evaluated at z = 1 for convenience in tests; the full rational matrix is
  // available through the potential itself
  return eta.eval_term(-1, 1.0);
}

const std::vector<ExampleEntry>& example_registry() {
  static std::vector<ExampleEntry> reg = [] {
    std::vector<ExampleEntry> v;

    {
      ExampleEntry e;
      e.name = "ex_s4_plane";
      e.description = "embedded Willmore sphere in S^4, conformal to a minimal plane end";
      e.n = 2;
      e.expected_energy = 4.0 * PI;
      e.expected_case = HarmonicCase::CaseA;
      e.expected_rank = 1;
      e.expect_dual = true;
      e.totally_isotropic = true;
      e.provider = [](Cx lam) { return make_s4_plane(lam, false); };
      e.chart2 = [](Cx lam) { return make_s4_plane(lam, true); };
      e.potential = potential_s4_plane();
      e.symmetry = [](double t) { return symmetry_blocks(5, {1, 1}, t); };
      v.push_back(std::move(e));
    }
    {
      ExampleEntry e;
      e.name = "ex_s4_branch";
      e.description = "Willmore sphere in S^4 with a branch point at infinity";
      e.n = 2;
      e.expected_energy = 2.0 * PI;
      e.expected_case = HarmonicCase::CaseA;
      e.expected_rank = 1;
      e.expect_dual = true;
      e.totally_isotropic = true;
      e.provider = [](Cx lam) { return make_s4_branch(lam, false); };
      e.chart2 = [](Cx lam) { return make_s4_branch(lam, true); };
      e.potential = potential_s4_branch();
      e.symmetry = [](double t) { return symmetry_blocks(5, {1, 2}, t); };
      v.push_back(std::move(e));
    }
    {
      ExampleEntry e;
      e.name = "ex_s6_nonsw";
      e.description = "unbranched totally isotropic Willmore sphere in S^6, not S-Willmore";
      e.n = 4;
      e.expected_case = HarmonicCase::CaseA;
      e.expected_rank = 2;
      e.expect_dual = false;
      e.totally_isotropic = true;
      e.provider = [](Cx lam) { return make_s6_nonsw(lam, false); };
      e.chart2 = [](Cx lam) { return make_s6_nonsw(lam, true); };
      e.potential = potential_s6_nonsw();
      e.symmetry = [](double t) { return symmetry_blocks(7, {1, 2, 1}, t); };
      v.push_back(std::move(e));
    }
    {
      ExampleEntry e;
      e.name = "ex_s6_adjoint";
      e.description = "adjoint surface of the S^6 sphere, branched at infinity";
      e.n = 4;
      e.expected_case = HarmonicCase::CaseA;
      e.expected_rank = 1;
      e.expect_dual = true;
      e.provider = [](Cx) { return make_s6_adjoint(false); };
      e.chart2 = [](Cx) { return make_s6_adjoint(true); };
      v.push_back(std::move(e));
    }
    {
      ExampleEntry e;
      e.name = "veronese";
      e.description = "Veronese sphere in S^4, homogeneous minimal";
      e.n = 2;
      e.expected_energy = 8.0 * PI;
      e.expected_case = HarmonicCase::CaseA;
      e.expected_rank = 1;
      e.expect_dual = true;
      e.provider = [](Cx lam) { return make_veronese(lam, false); };
      e.chart2 = [](Cx lam) { return make_veronese(lam, true); };
      e.potential = potential_veronese();
      v.push_back(std::move(e));
    }
    {
      ExampleEntry e;
      e.name = "cylinder";
      e.description = "equivariant Willmore cylinder in S^4, a=0.6 b=0.8";
      e.n = 2;
      e.sphere_domain = false;
      e.expected_case = HarmonicCase::CaseA;
      e.expected_rank = 1;
      e.provider = [](Cx) { return make_cylinder(0.6, 0.8); };
      v.push_back(std::move(e));
    }
    {
      ExampleEntry e;
      e.name = "clifford_torus";
      e.description = "Clifford torus in S^3, the a=0 cylinder";
      e.n = 2;
      e.sphere_domain = false;
      e.provider = [](Cx) { return make_cylinder(0.0, 1.0); };
      v.push_back(std::move(e));
    }
    {
      ExampleEntry e;
      e.name = "round_sphere";
      e.description = "totally umbilical round sphere";
      e.n = 2;
      e.expected_energy = 0.0;
      e.provider = [](Cx) { return make_round_sphere(false); };
      e.chart2 = [](Cx) { return make_round_sphere(true); };
      v.push_back(std::move(e));
    }
    {
      ExampleEntry e;
      e.name = "flat_torus";
      e.description = "non-Willmore flat torus in S^3, radius ratio 0.8";
      e.n = 2;
      e.willmore = false;
      e.sphere_domain = false;
      e.provider = [](Cx) { return make_flat_torus(0.8); };
      v.push_back(std::move(e));
    }
    return v;
  }();
  return reg;
}

const ExampleEntry& find_example(const std::string& name) {
  for (const auto& e : example_registry())
    if (e.name == name) return e;
  throw Error("unknown example: " + name);
}

std::vector<std::string> example_names() {
  std::vector<std::string> out;
  for (const auto& e : example_registry()) out.push_back(e.name);
  return out;
}

VerificationReport registry_self_test() {
  VerificationReport rep;
  rep.subject = "registry self test";
  for (const auto& e : example_registry()) {
    auto prov = e.provider(1.0);
    double conf = 0.0, willmore = 0.0, light = 0.0;
    for (Cx z : {Cx(0.31, 0.17), Cx(-0.42, 0.55), Cx(0.12, -0.66)}) {
      if (!prov->in_domain(z)) continue;
      CanonicalData cd = canonical_at(*prov, z, 4);
      conf = std::max(conf, cd.conf_defect);
      light = std::max(light, std::abs(minkowski_inner(cd.Y, cd.Y).value()));
      ResidualReport rr = residuals_at(*prov, z, 6);
      if (e.willmore) willmore = std::max(willmore, rr.willmore);
    }
    rep.add(e.name + ": conformality", conf, 1e-7);
    rep.add(e.name + ": lightlike lift", light, 1e-9);
    if (e.willmore) rep.add(e.name + ": willmore residual", willmore, 1e-7);
  }
  return rep;
}

VerificationReport verify_example(const std::string& name, int grid_n, double radius) {
  const auto& cfg = Config::get();
  const ExampleEntry& e = find_example(name);
  VerificationReport rep;
  rep.subject = name;
  auto prov = e.provider(1.0);

  // pointwise residual suite on a coarse sample set
  double conf = 0.0, wres = 0.0, sres = 0.0, ires = 0.0;
  Grid sgrid = Grid::square(0.0, radius, std::min(grid_n, 21), cfg.grid_eps);
  for (int idx = 0; idx < sgrid.size(); idx += 7) {
    Cx z = sgrid.point(idx);
    if (!sgrid.usable(idx) || !prov->in_domain(z)) continue;
    try {
      ResidualReport rr = residuals_at(*prov, z, 6);
      conf = std::max(conf, canonical_at(*prov, z, 2).conf_defect);
      wres = std::max(wres, rr.willmore);
      sres = std::max(sres, rr.structure);
      ires = std::max(ires, rr.gauss_codazzi_ricci);
    } catch (const NotImmersed&) {
    }
  }
  rep.add("conformality", conf, 1e-8);
  rep.add("structure equations", sres, 1e-7);
  rep.add("integrability equations", ires, 1e-7);
  if (e.willmore) rep.add("willmore residual", wres, 1e-7);

  if (e.expected_energy >= 0 && e.sphere_domain) {
    auto c2 = e.chart2 ? e.chart2(1.0) : nullptr;
    EnergyResult en = willmore_energy(*prov, c2.get(), cfg.quad_target);
    rep.add_value("willmore energy", en.value, e.expected_energy, 1e-6);
  }

  if (e.totally_isotropic) {
    double iso = 0.0;
    for (Cx z : {Cx(0.4, 0.2), Cx(-0.3, 0.6), Cx(0.9, -0.5)})
      iso = std::max(iso, isotropy_residual(*prov, z, 2).maxCoeff());
    rep.add("total isotropy (orders <= 2)", iso, 1e-8);
  }

  if (e.expected_case) {
    Grid g = Grid::square(Cx(0.25, 0.1), 0.45, 15, cfg.grid_eps);
    MovingFrameField field = build_moving_frame(*prov, g);
    Classification cls = classify_strongly_harmonic(field);
    rep.add("classification case", cls.variant == *e.expected_case ? 0.0 : 1.0, 0.5);
    rep.add("classification rank", std::abs(cls.rank - e.expected_rank), 0.5);
    DualSurfaceResult dual = dual_surface_riccati(*prov, g);
    rep.add(e.expect_dual ? "dual surface exists" : "dual surface correctly absent",
            dual.exists == e.expect_dual ? 0.0 : 1.0, 0.5);
  }

  if (e.symmetry) {
    double sup = 0.0;
    for (double t : {0.3, 1.7}) {
      CMat R = e.symmetry(t);
      for (Cx z : {Cx(0.37, 0.21), Cx(-0.64, 0.42), Cx(1.13, -0.35)}) {
        CVec lhs = sphere_projection(prov->lift_jets(z * std::exp(-I_UNIT * t), 0).value());
        CVec rhs = R * sphere_projection(prov->lift_jets(z, 0).value());
        sup = std::max(sup, (lhs - rhs).cwiseAbs().maxCoeff());
      }
    }
    rep.add("equivariance under the displayed rotations", sup, 1e-10);
  }

  if (name == "veronese") {
    MCSeries mc = mc_series_from_provider(*prov, cfg.deg_max);
    Potential wu = wu_normalized_potential(mc, cfg.deg_max);
    Potential expect = e.potential.value();
    double defect = 0.0;
    for (Cx z : {Cx(0.3, 0.2), Cx(-0.7, 0.1), Cx(0.05, -0.8)})
      defect = std::max(defect,
                        (wu.eval_term(-1, z) - expect.eval_term(-1, z)).cwiseAbs().maxCoeff());
    rep.add("wu formula reproduces the normalized potential", defect, 1e-10);
  }
  return rep;
}

}  // namespace willoop
