#ifndef SPARSEPACK_LP_HPP_
#define SPARSEPACK_LP_HPP_

#include <vector>

#include "sparsepack/instance.hpp"

namespace sparsepack {

struct LpResult {
  double value = 0.0;
  // Fractional assignment y[i * m + j]; zero where w_ij > C_j.
  std::vector<double> y;
};

// LP relaxation of GAP:
//   max sum v_ij y_ij
//   s.t. sum_j y_ij <= 1         for every item i
//        sum_i w_ij y_ij <= C_j  for every knapsack j
//        y >= 0, y_ij = 0 when w_ij > C_j.
// Solved with a dense primal simplex; the slack basis is feasible so no
// phase-1 is needed. Throws std::length_error when n*m exceeds
// max_variables.
LpResult gap_lp(const GapInstance& inst, std::size_t max_variables = 20000);

}  // namespace sparsepack

#endif  // SPARSEPACK_LP_HPP_
