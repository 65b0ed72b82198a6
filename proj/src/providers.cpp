#include "willoop/providers.hpp"
#include "willoop/config.hpp"

#include <cmath>

namespace willoop {

JetVec RationalLiftSurface::lift_jets(Cx z, int order) const {
  JetVec out((int)comps_.size(), order);
  Cx w = std::conj(z);
  for (size_t i = 0; i < comps_.size(); ++i) out.c[i] = comps_[i].jet(z, w, order);
  return out;
}

namespace {

// value of the d-th derivative of the basic factor at argument a*t
Cx factor_deriv(SeparableSurface::Fn fn, double a, double t, int d) {
  double x = a * t;
  double p = std::pow(a, d);
  switch (fn) {
    case SeparableSurface::One:
      return d == 0 ? 1.0 : 0.0;
    case SeparableSurface::Cos:
      switch (d % 4) {
        case 0: return p * std::cos(x);
        case 1: return -p * std::sin(x);
        case 2: return -p * std::cos(x);
        default: return p * std::sin(x);
      }
    case SeparableSurface::Sin:
      switch (d % 4) {
        case 0: return p * std::sin(x);
        case 1: return p * std::cos(x);
        case 2: return -p * std::sin(x);
        default: return -p * std::cos(x);
      }
    case SeparableSurface::Cosh:
      return p * (d % 2 == 0 ? std::cosh(x) : std::sinh(x));
    case SeparableSurface::Sinh:
      return p * (d % 2 == 0 ? std::sinh(x) : std::cosh(x));
  }
  return 0.0;
}

// convert the table of (u,v) partials (divided by nothing) into (z, zbar) jets
JetVec partials_to_jets(const std::vector<std::vector<CVec>>& P, int dim, int order) {
  JetVec out(dim, order);
  std::vector<double> fact(order + 1, 1.0);
  for (int i = 1; i <= order; ++i) fact[i] = fact[i - 1] * i;
  for (int a = 0; a <= order; ++a)
    for (int b = 0; a + b <= order; ++b) {
      // d_z^a d_zbar^b = 2^{-a-b} (d_u - i d_v)^a (d_u + i d_v)^b
      CVec acc = CVec::Zero(dim);
      for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j) {
          double ca = 1.0, cb = 1.0;
          for (int t = 0; t < i; ++t) ca *= (double)(a - t) / (t + 1);
          for (int t = 0; t < j; ++t) cb *= (double)(b - t) / (t + 1);
          Cx phase = std::pow(-I_UNIT, i) * std::pow(I_UNIT, j);
          acc += ca * cb * phase * P[a + b - i - j][i + j];
        }
      acc *= std::pow(0.5, a + b);
      for (int d = 0; d < dim; ++d) out.c[d].at(a, b) = acc(d) / (fact[a] * fact[b]);
    }
  return out;
}

}  // namespace

JetVec SeparableSurface::lift_jets(Cx z, int order) const {
  double u = z.real(), v = z.imag();
  std::vector<std::vector<CVec>> P(order + 1, std::vector<CVec>(order + 1, CVec::Zero(dim_)));
  for (const Term& t : terms_)
    for (int p = 0; p <= order; ++p)
      for (int q = 0; p + q <= order; ++q)
        P[p][q](t.comp) += t.coeff * factor_deriv(t.fu, t.au, u, p) * factor_deriv(t.fv, t.av, v, q);
  return partials_to_jets(P, dim_, order);
}

namespace {

// symmetric 7-point stencil weights, O(h^4), for derivative order d
void stencil_weights(int d, double h, double* w) {
  for (int i = 0; i < 7; ++i) w[i] = 0.0;
  switch (d) {
    case 0:
      w[3] = 1.0;
      break;
    case 1:
      w[1] = 1.0 / (12 * h); w[2] = -8.0 / (12 * h); w[4] = 8.0 / (12 * h); w[5] = -1.0 / (12 * h);
      break;
    case 2:
      w[1] = -1.0 / (12 * h * h); w[2] = 16.0 / (12 * h * h); w[3] = -30.0 / (12 * h * h);
      w[4] = 16.0 / (12 * h * h); w[5] = -1.0 / (12 * h * h);
      break;
    case 3: {
      double s = 8 * h * h * h;
      w[0] = 1.0 / s; w[1] = -8.0 / s; w[2] = 13.0 / s; w[4] = -13.0 / s; w[5] = 8.0 / s; w[6] = -1.0 / s;
      break;
    }
    case 4: {
      double s = 6 * h * h * h * h;
      w[0] = -1.0 / s; w[1] = 12.0 / s; w[2] = -39.0 / s; w[3] = 56.0 / s;
      w[4] = -39.0 / s; w[5] = 12.0 / s; w[6] = -1.0 / s;
      break;
    }
    default:
      throw Error("stencil_weights: derivative order > 4");
  }
}

}  // namespace

JetVec FDProvider::lift_jets(Cx z, int order) const {
  if (order > 4) throw Error("FDProvider: jets only up to order 4");
  std::vector<std::vector<CVec>> samples(7, std::vector<CVec>(7));
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      samples[i][j] = eval_(z + Cx((i - 3) * h_, (j - 3) * h_));
  std::vector<std::vector<CVec>> P(order + 1, std::vector<CVec>(order + 1, CVec::Zero(dim_)));
  double wu[7], wv[7];
  for (int p = 0; p <= order; ++p) {
    stencil_weights(p, h_, wu);
    for (int q = 0; p + q <= order; ++q) {
      stencil_weights(q, h_, wv);
      CVec acc = CVec::Zero(dim_);
      for (int i = 0; i < 7; ++i) {
        if (wu[i] == 0.0) continue;
        for (int j = 0; j < 7; ++j) {
          if (wv[j] == 0.0) continue;
          acc += wu[i] * wv[j] * samples[i][j];
        }
      }
      P[p][q] = acc;
    }
  }
  return partials_to_jets(P, dim_, order);
}

JetVec MobiusProvider::lift_jets(Cx w, int order) const {
  TSeries W = TSeries::var_z(w, order + 1);
  TSeries M = (W * a_ + b_) * (W * c_ + d_).recip();
  TSeries Mc = M.conj_swap();
  Cx z0 = M.value();
  JetVec base = base_->lift_jets(z0, order + 1);
  JetVec out(base.dim(), order);
  for (int i = 0; i < base.dim(); ++i) out.c[i] = base.c[i].compose(M, Mc).truncated(order);
  return out;
}

bool MobiusProvider::in_domain(Cx w) const {
  Cx den = c_ * w + d_;
  if (std::abs(den) < 1e-12) return false;
  return base_->in_domain((a_ * w + b_) / den);
}

JetVec GridSampleProvider::lift_jets(Cx z, int order) const {
  if (order > 4) throw Error("GridSampleProvider: jets only up to order 4");
  int i0 = (int)std::lround((z.real() - grid_.x0) / grid_.hx);
  int j0 = (int)std::lround((z.imag() - grid_.y0) / grid_.hy);
  if (i0 < 3 || i0 + 3 >= grid_.nx || j0 < 3 || j0 + 3 >= grid_.ny)
    throw Error("GridSampleProvider: point too close to the sample boundary");
  if (std::abs(grid_.point(i0, j0) - z) > 1e-9 * (grid_.hx + grid_.hy))
    throw Error("GridSampleProvider: point is not a grid node");
  std::vector<std::vector<CVec>> P(order + 1, std::vector<CVec>(order + 1, CVec::Zero(dim_)));
  double wu[7], wv[7];
  for (int p = 0; p <= order; ++p) {
    stencil_weights(p, grid_.hx, wu);
    for (int q = 0; p + q <= order; ++q) {
      stencil_weights(q, grid_.hy, wv);
      CVec acc = CVec::Zero(dim_);
      for (int i = 0; i < 7; ++i) {
        if (wu[i] == 0.0) continue;
        for (int j = 0; j < 7; ++j) {
          if (wv[j] == 0.0) continue;
          int idx = grid_.index(i0 + i - 3, j0 + j - 3);
          if (!grid_.usable(idx) || samples_[idx].size() == 0)
            throw Error("GridSampleProvider: stencil hits an invalid sample");
          acc += wu[i] * wv[j] * samples_[idx];
        }
      }
      P[p][q] = acc;
    }
  }
  return partials_to_jets(P, dim_, order);
}

bool GridSampleProvider::in_domain(Cx z) const {
  int i0 = (int)std::lround((z.real() - grid_.x0) / grid_.hx);
  int j0 = (int)std::lround((z.imag() - grid_.y0) / grid_.hy);
  return i0 >= 3 && i0 + 3 < grid_.nx && j0 >= 3 && j0 + 3 < grid_.ny;
}

}  // namespace willoop
