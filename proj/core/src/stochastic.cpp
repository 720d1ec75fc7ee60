#include "sparsepack/stochastic.hpp"

#include <cmath>
#include <stdexcept>

#include "sparsepack/rng.hpp"

namespace sparsepack {

ActiveSet sample_active(int n, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("sample_active requires p in (0,1]");
  ActiveSet out;
  out.p = p;
  out.seed = seed;
  out.included.indices.reserve(static_cast<std::size_t>(n * p) + 1);
  for (int i = 0; i < n; ++i)
    if (uniform01(mix_key(seed, i)) < p) out.included.indices.push_back(i);
  return out;
}

namespace {

double solve_value(const GapInstance& inst, const Budget& budget,
                   bool* exceeded) {
  const SolveResult r =
      inst.m() == 1 ? kp_exact(inst, budget) : gap_exact(inst, budget);
  if (r.status == SolveStatus::BudgetExceeded) *exceeded = true;
  return r.value;
}

}  // namespace

SparsifierEval eval_sparsifier(const GapInstance& inst, const ItemSet& query,
                               double p, int trials, std::uint64_t seed,
                               const Budget& budget) {
  if (trials < 1) throw std::invalid_argument("eval: trials >= 1");
  for (int i : query.indices) inst.check_item(i);

  SparsifierEval out;
  double sum_n = 0.0, sum_d = 0.0;
  double ss_n = 0.0, ss_d = 0.0, ss_nd = 0.0;
  std::vector<std::pair<double, double>> samples;
  samples.reserve(trials);

  for (int t = 0; t < trials; ++t) {
    const ActiveSet r = sample_active(inst.n(), p, mix_key(seed, t));
    bool exceeded = false;
    const auto sub_r = restrict(inst, r.included);
    const double den = solve_value(sub_r.instance, budget, &exceeded);
    const auto sub_qr = restrict(inst, intersect(query, r.included));
    const double num = solve_value(sub_qr.instance, budget, &exceeded);
    if (exceeded) {
      ++out.budget_exceeded;
      continue;
    }
    samples.emplace_back(num, den);
    sum_n += num;
    sum_d += den;
  }

  out.completed = static_cast<int>(samples.size());
  if (out.completed == 0) return out;
  const double t = static_cast<double>(out.completed);
  const double mean_n = sum_n / t;
  const double mean_d = sum_d / t;
  for (auto [num, den] : samples) {
    ss_n += (num - mean_n) * (num - mean_n);
    ss_d += (den - mean_d) * (den - mean_d);
    ss_nd += (num - mean_n) * (den - mean_d);
  }
  const double var_n = out.completed > 1 ? ss_n / (t - 1) : 0.0;
  const double var_d = out.completed > 1 ? ss_d / (t - 1) : 0.0;
  const double cov = out.completed > 1 ? ss_nd / (t - 1) : 0.0;

  out.numerator_mean = mean_n;
  out.denominator_mean = mean_d;
  out.numerator_stderr = std::sqrt(var_n / t);
  out.denominator_stderr = std::sqrt(var_d / t);
  out.ratio = mean_d > 0.0 ? mean_n / mean_d : (mean_n > 0.0 ? INFINITY : 1.0);
  if (mean_d > 0.0 && out.completed > 1) {
    const double rel = var_n / (mean_n * mean_n + 1e-300) +
                       var_d / (mean_d * mean_d) -
                       2.0 * cov / (mean_n * mean_d + 1e-300);
    out.ratio_stderr = std::abs(out.ratio) * std::sqrt(std::max(0.0, rel) / t);
  }
  return out;
}

}  // namespace sparsepack
