#ifndef SPARSEPACK_SPARSIFIER_HPP_
#define SPARSEPACK_SPARSIFIER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsepack/instance.hpp"
#include "sparsepack/solvers.hpp"

#include "json.hpp"

namespace sparsepack {

// Concentration factor tau(eps) = 1 + ln(1/eps) + sqrt(ln^2(1/eps) +
// 2 ln(1/eps)). Strictly decreasing on (0,1], tau(1) = 1.
double tau(double epsilon);

enum class OracleMode { PerKnapsack, Global, LpDriven, Sampled };
enum class SparsifyMode { Theory, Practical };

struct SparsifyParams {
  double epsilon = 0.2;
  double p = 1.0;
  OracleMode oracle_mode = OracleMode::Sampled;
  // PerKnapsack: one scale per knapsack. Global: single scale, split as
  // M_j = M/m with the wider bucket count K = ceil((2/eps^2) ln(m/eps^3)).
  std::vector<double> oracle_m;
  double oracle_global = 0.0;
  int oracle_trials = 200;
  std::uint64_t seed = 0;
  SparsifyMode mode = SparsifyMode::Theory;
  // Practical-mode overrides. alpha_override is the number of passes
  // actually executed; theory mode runs ceil(1/eps) - 1 passes.
  std::optional<double> tau_override;
  std::optional<double> alpha_override;
  std::optional<int> k_override;
};

struct BucketSelection {
  int j = 0;
  int k = 0;
  int t = 1;
  std::vector<int> items;  // in selection order
};

struct QueryResult {
  ItemSet q;
  std::vector<BucketSelection> buckets;
  std::vector<double> ledger;  // per-knapsack selected weight
  double lp_degree_bound = 1.0;
  double integral_degree_bound = 2.0;
  std::vector<double> m_values;  // M_j actually used
  int num_buckets = 0;           // K
  int rounds = 0;
  double epsilon = 0.0;
  double p = 1.0;
  double tau_used = 0.0;
  bool gap_grid = false;  // buckets keyed by eps^2 instead of eps
  std::vector<std::string> warnings;
};

// Bucket index for value v against scale m_scale with grid parameter g
// (eps for the knapsack sparsifier, eps^2 for GAP). Returns 0..K, or K+1
// when allow_super and v exceeds the top boundary; without allow_super
// such values clamp to K.
int bucket_index(double v, double m_scale, double g, int K, bool allow_super);

// Lower/upper value boundary of bucket k on the same grid; bucket 0 is
// (-inf, g*m_scale], bucket K+1 is (g(1+g)^K m_scale, inf).
std::pair<double, double> bucket_bounds(double m_scale, double g, int K,
                                        int k);

QueryResult sparsify_kp(const GapInstance& inst, const SparsifyParams& params);
QueryResult sparsify_gap(const GapInstance& inst,
                         const SparsifyParams& params);

// Hyperparameters of the LP-driven practical sparsifier: p = 1, one pass,
// tau = 1, eps = 0.2, K = ceil(25 ln 25), M_j = LP optimum of the full
// instance for every knapsack.
SparsifyParams lp_driven_params(const GapInstance& inst);

nlohmann::json query_to_json(const QueryResult& q);
QueryResult query_from_json(const nlohmann::json& j);

}  // namespace sparsepack

#endif  // SPARSEPACK_SPARSIFIER_HPP_
