#ifndef SPARSEPACK_GENERATOR_HPP_
#define SPARSEPACK_GENERATOR_HPP_

#include <cstdint>
#include <vector>

#include "sparsepack/instance.hpp"
#include "sparsepack/stats.hpp"

namespace sparsepack {

struct GenParams {
  int n = 100;
  int m = 1;
  double rho = 0.0;  // Gaussian copula parameter, in [-1, 1]
  double redundancy_target = 5.0;
  Marginal value_marginal = Uniform{0.0, 100.0};
  Marginal weight_marginal = Uniform{1.0, 20.0};
  std::uint64_t seed = 0;

  void validate() const;
};

struct CopulaSample {
  double u1 = 0.5;
  double u2 = 0.5;
};

// Pairs of uniforms coupled through a bivariate normal with correlation
// rho; deterministic given the seed and order-independent per index.
std::vector<CopulaSample> gaussian_copula_pairs(double rho, std::size_t count,
                                                std::uint64_t seed);

CopulaSample copula_cell(double rho, std::uint64_t seed, std::uint64_t index);

struct GenResult {
  GapInstance instance;
  int clamped_items = 0;  // items whose lightest weight was clamped to fit
};

// Draws n*m (value, weight) cells via the copula and the marginal
// quantiles, offsets every weight by 0.01 against exact ties, and sets
//   C_j = Q_0.05(all weights) * (n / m) / redundancy_target.
// Items fitting no knapsack get their lightest weight clamped to that
// knapsack's capacity (counted in clamped_items).
GenResult generate(const GenParams& params);

// Table-style experiment grid expansion; scale multiplies the item counts
// (rounded, minimum 1).
struct GridSpec {
  std::vector<int> ns = {1000, 2000, 5000, 10000};
  std::vector<int> ms = {1, 2, 5};
  std::vector<double> rhos = {-0.8, -0.5, -0.3, 0.0, 0.3, 0.5, 0.8};
  std::vector<double> redundancy_targets = {1, 2, 3, 5, 8, 13, 22, 36, 60, 100};
  std::vector<std::pair<Marginal, Marginal>> marginals = {
      {Uniform{0.0, 100.0}, Uniform{1.0, 20.0}},
      {Uniform{0.0, 100.0}, TruncNormal{10.0, 5.0, 1.0, 30.0}},
      {TruncNormal{50.0, 15.0, 0.0, 100.0}, Uniform{1.0, 20.0}},
      {TruncNormal{50.0, 15.0, 0.0, 100.0}, TruncNormal{10.0, 5.0, 1.0, 30.0}},
  };
  int replicates = 8;
};

std::vector<GenParams> expand_grid(const GridSpec& spec, double scale,
                                   std::uint64_t master_seed);

}  // namespace sparsepack

#endif  // SPARSEPACK_GENERATOR_HPP_
