#include "sparsepack/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace sparsepack {

namespace {
constexpr double kPivotEps = 1e-9;
}

// Dense tableau primal simplex with Bland's rule. Variables are the
// feasible (item, knapsack) pairs followed by one slack per row; the
// all-slack basis is feasible because every right-hand side is positive.
LpResult gap_lp(const GapInstance& inst, std::size_t max_variables) {
  const int n = inst.n();
  const int m = inst.m();
  if (static_cast<std::size_t>(n) * static_cast<std::size_t>(m) >
      max_variables)
    throw std::length_error("gap_lp: instance exceeds max_variables");

  // Structural variables, skipping pairs that can never be packed.
  std::vector<int> var_item, var_bin;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (inst.weight(i, j) <= inst.capacity(j)) {
        var_item.push_back(i);
        var_bin.push_back(j);
      }
  const int nv = static_cast<int>(var_item.size());
  const int rows = n + m;
  const int cols = nv + rows + 1;  // structural + slack + rhs

  std::vector<double> tab(static_cast<std::size_t>(rows + 1) * cols, 0.0);
  auto at = [&](int r, int c) -> double& {
    return tab[static_cast<std::size_t>(r) * cols + c];
  };

  for (int v = 0; v < nv; ++v) {
    at(var_item[v], v) = 1.0;
    at(n + var_bin[v], v) = inst.weight(var_item[v], var_bin[v]);
    at(rows, v) = -inst.value(var_item[v], var_bin[v]);  // minimize -value
  }
  for (int r = 0; r < rows; ++r) {
    at(r, nv + r) = 1.0;
    at(r, cols - 1) = r < n ? 1.0 : inst.capacity(r - n);
  }

  std::vector<int> basis(rows);
  for (int r = 0; r < rows; ++r) basis[r] = nv + r;

  const long max_iters = 50L * (rows + nv) + 10000;
  for (long iter = 0; iter < max_iters; ++iter) {
    int enter = -1;
    for (int c = 0; c < nv + rows; ++c)
      if (at(rows, c) < -kPivotEps) {
        enter = c;
        break;
      }
    if (enter < 0) break;

    int leave = -1;
    double best = 0.0;
    for (int r = 0; r < rows; ++r) {
      const double a = at(r, enter);
      if (a <= kPivotEps) continue;
      const double ratio = at(r, cols - 1) / a;
      if (leave < 0 || ratio < best - kPivotEps ||
          (ratio < best + kPivotEps && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0)
      throw std::runtime_error("gap_lp: unbounded tableau");

    const double piv = at(leave, enter);
    for (int c = 0; c < cols; ++c) at(leave, c) /= piv;
    for (int r = 0; r <= rows; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (int c = 0; c < cols; ++c) at(r, c) -= f * at(leave, c);
    }
    basis[leave] = enter;
  }

  LpResult out;
  out.y.assign(static_cast<std::size_t>(n) * m, 0.0);
  for (int r = 0; r < rows; ++r)
    if (basis[r] < nv) {
      const double x = at(r, cols - 1);
      out.y[static_cast<std::size_t>(var_item[basis[r]]) * m +
            var_bin[basis[r]]] = x < 0.0 ? 0.0 : x;
    }
  out.value = at(rows, cols - 1);
  return out;
}

}  // namespace sparsepack
