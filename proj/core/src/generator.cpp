#include "sparsepack/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sparsepack/rng.hpp"

namespace sparsepack {

void GenParams::validate() const {
  if (n < 1 || m < 1) throw std::invalid_argument("gen: bad n or m");
  if (!(rho >= -1.0 && rho <= 1.0))
    throw std::invalid_argument("gen: rho must lie in [-1, 1]");
  if (!(redundancy_target > 0.0))
    throw std::invalid_argument("gen: redundancy_target must be positive");
  validate_marginal(value_marginal);
  validate_marginal(weight_marginal);
  if (marginal_lo(weight_marginal) + 0.01 <= 0.0)
    throw std::invalid_argument("gen: weight marginal must stay positive");
}

CopulaSample copula_cell(double rho, std::uint64_t seed, std::uint64_t index) {
  const double ua = uniform_open01(mix_key(seed, index, 0));
  const double ub = uniform_open01(mix_key(seed, index, 1));
  const double z1 = normal_icdf(ua);
  const double z2 = rho * z1 + std::sqrt(1.0 - rho * rho) * normal_icdf(ub);
  return {normal_cdf(z1), normal_cdf(z2)};
}

std::vector<CopulaSample> gaussian_copula_pairs(double rho, std::size_t count,
                                                std::uint64_t seed) {
  if (!(rho >= -1.0 && rho <= 1.0))
    throw std::invalid_argument("copula: |rho| must be <= 1");
  std::vector<CopulaSample> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = copula_cell(rho, seed, i);
  return out;
}

GenResult generate(const GenParams& params) {
  params.validate();
  const int n = params.n;
  const int m = params.m;
  const std::size_t cells = static_cast<std::size_t>(n) * m;

  std::vector<double> values(cells), weights(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const CopulaSample s = copula_cell(params.rho, params.seed, c);
    values[c] = inverse_cdf(params.value_marginal, s.u1);
    // Anti-tie offset on every weight.
    weights[c] = inverse_cdf(params.weight_marginal, s.u2) + 0.01;
  }

  const double q05 = empirical_quantile(weights, 0.05);
  const double cap =
      q05 * (static_cast<double>(n) / m) / params.redundancy_target;
  const double min_weight = marginal_lo(params.weight_marginal) + 0.01;
  if (!(cap >= min_weight)) {
    throw std::invalid_argument(
        "gen: redundancy_target " + std::to_string(params.redundancy_target) +
        " yields capacity " + std::to_string(cap) +
        " below the smallest feasible weight");
  }
  std::vector<double> capacities(m, cap);

  // Enforce individual feasibility by clamping the lightest weight.
  int clamped = 0;
  for (int i = 0; i < n; ++i) {
    int jmin = 0;
    for (int j = 1; j < m; ++j)
      if (weights[static_cast<std::size_t>(i) * m + j] <
          weights[static_cast<std::size_t>(i) * m + jmin])
        jmin = j;
    double& w = weights[static_cast<std::size_t>(i) * m + jmin];
    if (w > capacities[jmin]) {
      w = capacities[jmin];
      ++clamped;
    }
  }

  const InstanceKind kind = (m == 1) ? InstanceKind::Kp : InstanceKind::Gap;
  GapInstance inst(kind, n, m, std::move(values), std::move(weights),
                   std::move(capacities));
  return {std::move(inst), clamped};
}

std::vector<GenParams> expand_grid(const GridSpec& spec, double scale,
                                   std::uint64_t master_seed) {
  std::vector<GenParams> out;
  std::uint64_t counter = 0;
  for (int n : spec.ns)
    for (int m : spec.ms)
      for (double rho : spec.rhos)
        for (double rt : spec.redundancy_targets)
          for (const auto& [fv, fw] : spec.marginals)
            for (int rep = 0; rep < spec.replicates; ++rep) {
              GenParams p;
              p.n = std::max(1, static_cast<int>(std::lround(n * scale)));
              p.m = m;
              p.rho = rho;
              p.redundancy_target = rt;
              p.value_marginal = fv;
              p.weight_marginal = fw;
              p.seed = mix_key(master_seed, counter++);
              out.push_back(p);
            }
  return out;
}

}  // namespace sparsepack
