#ifndef SPARSEPACK_RECONSTRUCTION_HPP_
#define SPARSEPACK_RECONSTRUCTION_HPP_

#include <string>
#include <vector>

#include "sparsepack/instance.hpp"
#include "sparsepack/sparsifier.hpp"

#include "json.hpp"

namespace sparsepack {

// Partition of the canonical optimum's items by query outcome. An item is
// "queried via (j,k)" when some bucket selection (j,k,t) contains it; the
// querying knapsack need not match the knapsack it is assigned to.
// "Missed" items are assigned to j, fall in bucket (j,k) by value, and
// were never queried. Buckets are indexed j * (K + 2) + k.
struct OptPartition {
  int num_buckets = 0;  // K
  std::vector<std::vector<int>> queried;
  std::vector<std::vector<int>> missed;
};

OptPartition partition_opt(const GapInstance& inst, const ItemSet& active,
                           const QueryResult& query, const Assignment& opt);

enum class CaseLabel {
  DirectSub,
  ValueRejection,
  ValueSubstitution,
  ExactSub,
  DensitySub1,
  DensitySub2,
  SuperQueried,
  SuperMissed,
};

std::string to_string(CaseLabel label);

enum class Subroutine { FillLarge, FillSmall, FillSuper };

struct CallRecord {
  Subroutine subroutine = Subroutine::FillLarge;
  int j = 0;
  int k = 0;
  CaseLabel label = CaseLabel::ExactSub;
  std::vector<double> delta_w_alg;  // per knapsack
  std::vector<double> delta_w_opt;
  double delta_v_alg = 0.0;
  double delta_v_opt = 0.0;
  // Density-substitution prefix boundary, for the ratio-ordering check:
  // max v_i^OPT / w_ij inside the prefix, min outside.
  double prefix_max_ratio = 0.0;
  double suffix_min_ratio = 0.0;
  bool has_prefix_ratios = false;
};

struct BucketEvent {
  int j = 0;
  int k = 0;
  int t = 1;
  double active_weight = 0.0;
  bool excess = false;  // active queried weight >= C_j
};

struct ReconstructionTrace {
  std::vector<CallRecord> calls;
  Assignment final_alg;
  Assignment final_opt_bar;
  std::vector<BucketEvent> events;
};

// Replays the charging argument: rebuilds the optimum as OPT-bar while
// assembling a feasible ALG from queried active items only, substituting
// for missed items bucket by bucket.
ReconstructionTrace reconstruct(const GapInstance& inst,
                                const ItemSet& active,
                                const QueryResult& query,
                                const Assignment& opt);

struct LemmaReport {
  long realizations = 0;
  long calls = 0;
  long weight_domination_violations = 0;
  long uniqueness_violations = 0;
  long alg_outside_query_violations = 0;
  long optbar_mismatches = 0;
  long ratio_ordering_violations = 0;
  long conditional_property_violations = 0;
  // Expectation-level margins, one sample per realization:
  //   large: sum dv_alg - (1-2e) sum dv_opt   over FillLarge calls
  //   small: same plus the e^2 M_j allowance  over FillSmall calls
  //   super: 3e v(OPT) - (sum dv_opt - sum dv_alg)
  double large_margin_sum = 0.0, large_margin_sq = 0.0;
  double small_margin_sum = 0.0, small_margin_sq = 0.0;
  double super_margin_sum = 0.0, super_margin_sq = 0.0;
  std::vector<std::string> violations;  // capped at 100 entries

  long total_violations() const {
    return weight_domination_violations + uniqueness_violations +
           alg_outside_query_violations + optbar_mismatches +
           ratio_ordering_violations + conditional_property_violations;
  }
};

// Per-realization checks of the feasibility lemmas, the benchmark-identity
// lemma, the ratio-ordering claim, and the conditional bucket properties;
// accumulates the expectation-level value margins.
LemmaReport verify_lemmas(const GapInstance& inst, const ItemSet& active,
                          const QueryResult& query, const Assignment& opt,
                          const ReconstructionTrace& trace, double epsilon);

void merge(LemmaReport& into, const LemmaReport& from);

nlohmann::json report_to_json(const LemmaReport& report);

}  // namespace sparsepack

#endif  // SPARSEPACK_RECONSTRUCTION_HPP_
