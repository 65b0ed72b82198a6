#ifndef WILLOOP_PROVIDERS_HPP
#define WILLOOP_PROVIDERS_HPP

#include "willoop/surface.hpp"
#include "willoop/poly.hpp"

#include <functional>
#include <memory>

namespace willoop {

// Closed-form lift whose components are rational in (z, zbar).
class RationalLiftSurface : public JetProvider {
 public:
  RationalLiftSurface(std::vector<BivarRational> comps, double domain_eps = 0.0)
      : comps_(std::move(comps)), eps_(domain_eps) {}
  int ambient_dim() const override { return (int)comps_.size(); }
  JetVec lift_jets(Cx z, int order) const override;
  bool in_domain(Cx z) const override { return std::abs(z) > eps_; }

 private:
  std::vector<BivarRational> comps_;
  double eps_;
};

// Lift with components  sum coeff * f(u) * g(v),  z = u + i v,  where f and g
// are in {1, cos(a t), sin(a t), cosh(a t), sinh(a t)}.
class SeparableSurface : public JetProvider {
 public:
  enum Fn { One, Cos, Sin, Cosh, Sinh };
  struct Term {
    int comp;
    Cx coeff;
    Fn fu;
    double au;
    Fn fv;
    double av;
  };
  SeparableSurface(int dim, std::vector<Term> terms) : dim_(dim), terms_(std::move(terms)) {}
  int ambient_dim() const override { return dim_; }
  JetVec lift_jets(Cx z, int order) const override;

 private:
  int dim_;
  std::vector<Term> terms_;
};

// Fourth-order central differences from a point evaluator.
class FDProvider : public JetProvider {
 public:
  FDProvider(int dim, std::function<CVec(Cx)> eval, double step)
      : dim_(dim), eval_(std::move(eval)), h_(step) {}
  int ambient_dim() const override { return dim_; }
  JetVec lift_jets(Cx z, int order) const override;
  bool exact() const override { return false; }

 private:
  int dim_;
  std::function<CVec(Cx)> eval_;
  double h_;
};

// Chart composition z = (a w + b) / (c w + d).
class MobiusProvider : public JetProvider {
 public:
  MobiusProvider(std::shared_ptr<const JetProvider> base, Cx a, Cx b, Cx c, Cx d)
      : base_(std::move(base)), a_(a), b_(b), c_(c), d_(d) {}
  int ambient_dim() const override { return base_->ambient_dim(); }
  JetVec lift_jets(Cx w, int order) const override;
  bool in_domain(Cx w) const override;

 private:
  std::shared_ptr<const JetProvider> base_;
  Cx a_, b_, c_, d_;
};

// Jets by finite differences over a stored sample field (row-major grid).
class GridSampleProvider : public JetProvider {
 public:
  GridSampleProvider(Grid grid, std::vector<CVec> samples, int dim)
      : grid_(grid), samples_(std::move(samples)), dim_(dim) {}
  int ambient_dim() const override { return dim_; }
  JetVec lift_jets(Cx z, int order) const override;
  bool in_domain(Cx z) const override;
  bool exact() const override { return false; }

 private:
  Grid grid_;
  std::vector<CVec> samples_;
  int dim_;
};

}  // namespace willoop

#endif
