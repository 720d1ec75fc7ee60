#ifndef SPARSEPACK_SOLVERS_HPP_
#define SPARSEPACK_SOLVERS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsepack/instance.hpp"

namespace sparsepack {

enum class SolveStatus { Optimal, BudgetExceeded, InfeasibleEmpty };

std::string to_string(SolveStatus s);

struct SolveResult {
  double value = 0.0;
  Assignment assignment;
  SolveStatus status = SolveStatus::Optimal;
  std::uint64_t nodes = 0;
  double wall_time_s = 0.0;
};

struct Budget {
  std::optional<std::uint64_t> max_nodes;
  std::optional<double> max_wall_time_s;

  bool unlimited() const { return !max_nodes && !max_wall_time_s; }
};

// 0/1 knapsack. Uses dynamic programming when the weights are integral and
// the capacity is small, otherwise depth-first branch and bound with the
// fractional-greedy upper bound.
SolveResult kp_exact(const std::vector<double>& values,
                     const std::vector<double>& weights, double capacity,
                     const Budget& budget = {});

SolveResult kp_exact(const GapInstance& inst, const Budget& budget = {});

// Fractional (LP) optimum of the knapsack: greedy by value density with a
// fractional final item.
double kp_fractional_greedy(const std::vector<double>& values,
                            const std::vector<double>& weights,
                            double capacity);

// Exact GAP solve by branch and bound over per-item decisions (assign to
// some knapsack or skip). Ties between equal-value optima are broken
// toward the lexicographically smallest item-indexed vector of assigned
// knapsacks, with "unassigned" ordered last; this is the canonical OPT
// used everywhere downstream.
SolveResult gap_exact(const GapInstance& inst, const Budget& budget = {});

// Monte Carlo estimate of the expected optimum when each item is active
// independently with probability p. p = 1 collapses to one exact solve.
struct ExpectedOpt {
  double mean = 0.0;
  double stderr_ = 0.0;
  int completed = 0;
  int budget_exceeded = 0;
};

ExpectedOpt expected_opt(const GapInstance& inst, double p, int trials,
                         std::uint64_t seed, const Budget& budget = {});

}  // namespace sparsepack

#endif  // SPARSEPACK_SOLVERS_HPP_
