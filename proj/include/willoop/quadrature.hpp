#ifndef WILLOOP_QUADRATURE_HPP
#define WILLOOP_QUADRATURE_HPP

#include "willoop/types.hpp"

#include <functional>

namespace willoop {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = false;
};

// Adaptive tensor Gauss-Kronrod quadrature of f(x, y) over a rectangle.
QuadResult integrate2d(const std::function<double(double, double)>& f, double x0, double x1,
                       double y0, double y1, double target_abs, int max_depth = 14);

// Adaptive Gauss-Kronrod along a straight segment in the complex plane.
Cx integrate_segment(const std::function<Cx(Cx)>& f, Cx a, Cx b, double target_abs,
                     int max_depth = 12);

}  // namespace willoop

#endif
