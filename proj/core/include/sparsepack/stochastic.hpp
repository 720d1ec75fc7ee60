#ifndef SPARSEPACK_STOCHASTIC_HPP_
#define SPARSEPACK_STOCHASTIC_HPP_

#include <cstdint>

#include "sparsepack/instance.hpp"
#include "sparsepack/solvers.hpp"

namespace sparsepack {

struct ActiveSet {
  ItemSet included;
  double p = 1.0;
  std::uint64_t seed = 0;
};

// Each index enters independently with probability p; pure in (n, p, seed).
ActiveSet sample_active(int n, double p, std::uint64_t seed);

struct SparsifierEval {
  double ratio = 0.0;        // mean(OPT on Q cap R) / mean(OPT on R)
  double ratio_stderr = 0.0; // delta-method, paired samples
  double numerator_mean = 0.0;
  double numerator_stderr = 0.0;
  double denominator_mean = 0.0;
  double denominator_stderr = 0.0;
  int completed = 0;
  int budget_exceeded = 0;
};

// Monte Carlo estimate of the sparsifier approximation ratio with common
// random numbers: the same realization R feeds both restricted solves.
// Realizations where either solve exhausts the budget are excluded and
// counted.
SparsifierEval eval_sparsifier(const GapInstance& inst, const ItemSet& query,
                               double p, int trials, std::uint64_t seed,
                               const Budget& budget = {});

}  // namespace sparsepack

#endif  // SPARSEPACK_STOCHASTIC_HPP_
