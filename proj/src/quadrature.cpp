#include "willoop/quadrature.hpp"

#include <cmath>
#include <queue>

namespace willoop {

namespace {

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1]
const double kX[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
const double kWK[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
const double kWG[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                       0.417959183673469, 0.381830050505119, 0.279705391489277,
                       0.129484966168870};

struct Cell {
  double x0, x1, y0, y1;
  double value, error;
};

void eval_cell(const std::function<double(double, double)>& f, Cell& c, long& evals) {
  double cx = 0.5 * (c.x0 + c.x1), hx = 0.5 * (c.x1 - c.x0);
  double cy = 0.5 * (c.y0 + c.y1), hy = 0.5 * (c.y1 - c.y0);
  double k15 = 0.0, g7 = 0.0;
  double rowk[15];
  double rowg[15];
  for (int i = 0; i < 15; ++i) {
    double xk = cx + hx * kX[i];
    double sk = 0.0, sg = 0.0;
    for (int j = 0; j < 15; ++j) {
      double v = f(xk, cy + hy * kX[j]);
      sk += kWK[j] * v;
      if (j % 2 == 1) sg += kWG[(j - 1) / 2] * v;
    }
    rowk[i] = sk;
    rowg[i] = sg;
    evals += 15;
  }
  for (int i = 0; i < 15; ++i) {
    k15 += kWK[i] * rowk[i];
    if (i % 2 == 1) g7 += kWG[(i - 1) / 2] * rowg[i];
  }
  c.value = k15 * hx * hy;
  double gval = g7 * hx * hy;
  c.error = std::abs(c.value - gval);
}

}  // namespace

QuadResult integrate2d(const std::function<double(double, double)>& f, double x0, double x1,
                       double y0, double y1, double target_abs, int max_depth) {
  QuadResult out;
  auto cmp = [](const Cell& a, const Cell& b) { return a.error < b.error; };
  std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> heap(cmp);
  Cell root{x0, x1, y0, y1, 0, 0};
  eval_cell(f, root, out.evaluations);
  heap.push(root);
  double total = root.value, toterr = root.error;
  long max_cells = 1L << (2 * std::min(max_depth, 12));
  while (toterr > target_abs && (long)heap.size() < max_cells) {
    Cell top = heap.top();
    heap.pop();
    total -= top.value;
    toterr -= top.error;
    double mx = 0.5 * (top.x0 + top.x1), my = 0.5 * (top.y0 + top.y1);
    Cell kids[4] = {{top.x0, mx, top.y0, my, 0, 0},
                    {mx, top.x1, top.y0, my, 0, 0},
                    {top.x0, mx, my, top.y1, 0, 0},
                    {mx, top.x1, my, top.y1, 0, 0}};
    for (auto& c : kids) {
      eval_cell(f, c, out.evaluations);
      total += c.value;
      toterr += c.error;
      heap.push(c);
    }
    if (out.evaluations > 80'000'000L) break;
  }
  out.value = total;
  out.error = toterr;
  out.converged = toterr <= target_abs;
  return out;
}

Cx integrate_segment(const std::function<Cx(Cx)>& f, Cx a, Cx b, double target_abs, int max_depth) {
  struct Seg {
    Cx a, b;
    Cx value;
    double error;
  };
  auto eval_seg = [&](Seg& s) {
    Cx mid = 0.5 * (s.a + s.b), half = 0.5 * (s.b - s.a);
    Cx k15 = 0.0, g7 = 0.0;
    for (int i = 0; i < 15; ++i) {
      Cx v = f(mid + half * kX[i]);
      k15 += kWK[i] * v;
      if (i % 2 == 1) g7 += kWG[(i - 1) / 2] * v;
    }
    s.value = k15 * half;
    s.error = std::abs(s.value - g7 * half);
  };
  auto cmp = [](const Seg& x, const Seg& y) { return x.error < y.error; };
  std::priority_queue<Seg, std::vector<Seg>, decltype(cmp)> heap(cmp);
  Seg root{a, b, 0, 0};
  eval_seg(root);
  heap.push(root);
  Cx total = root.value;
  double toterr = root.error;
  long limit = 1L << std::min(max_depth, 18);
  while (toterr > target_abs && (long)heap.size() < limit) {
    Seg top = heap.top();
    heap.pop();
    total -= top.value;
    toterr -= top.error;
    Cx mid = 0.5 * (top.a + top.b);
    Seg s1{top.a, mid, 0, 0}, s2{mid, top.b, 0, 0};
    eval_seg(s1);
    eval_seg(s2);
    total += s1.value + s2.value;
    toterr += s1.error + s2.error;
    heap.push(s1);
    heap.push(s2);
  }
  return total;
}

}  // namespace willoop
