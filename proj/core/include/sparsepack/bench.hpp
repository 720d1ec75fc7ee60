#ifndef SPARSEPACK_BENCH_HPP_
#define SPARSEPACK_BENCH_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "sparsepack/generator.hpp"
#include "sparsepack/instance.hpp"
#include "sparsepack/solvers.hpp"

namespace sparsepack {

inline constexpr int kCsvSchemaVersion = 1;

// One row of the three-run protocol: (A) exact solve to termination,
// (B) LP-driven sparsification plus exact solve on the query set, timed
// end to end, (C) exact solve under a wall budget equal to B's time.
struct ExperimentRecord {
  std::string instance_id;
  GenParams params;
  double opt_full = 0.0;
  double t_full_s = 0.0;
  double opt_sparse = 0.0;
  double t_sparse_s = 0.0;
  double opt_full_cut = 0.0;
  double approx_ratio = 0.0;
  double speedup = 0.0;
  double etr = 0.0;  // infinity when the time-cut run found nothing
  double redundancy_realized = 0.0;
  long query_size = 0;
  double lp_degree_bound = 1.0;
  std::string status = "ok";
};

std::string marginal_name(const Marginal& m);
Marginal marginal_from_name(const std::string& name);

std::string csv_header();
std::string csv_row(const ExperimentRecord& r);
ExperimentRecord record_from_csv(const std::string& line);
std::vector<ExperimentRecord> read_csv(std::istream& in);

// full_budget caps the exact solves of methods A and B; rows that hit it
// are marked "budget_exceeded" and skipped by aggregation.
ExperimentRecord run_three(const GapInstance& inst, const GenParams& params,
                           const std::string& instance_id,
                           const Budget& full_budget = {});

// Generates and runs every setting, in order, on a small worker pool;
// rows are written in input order so output is deterministic up to the
// timing columns.
void run_grid(const std::vector<GenParams>& settings, int threads,
              const Budget& full_budget, std::ostream& out);

// Desk-scale defaults; the full grid stays behind the CLI flag.
GridSpec desk_grid();

struct AggregateSummary {
  long rows = 0;
  double mean_approx_ratio = 0.0;
  double mean_speedup = 0.0;
  double mean_etr = 0.0;
  long etr_infinite = 0;
};

struct EtrBin {
  double lo = 0.0, hi = 0.0;  // redundancy bounds of the log10 bin
  long count = 0;
  double mean = 0.0, median = 0.0, q1 = 0.0, q3 = 0.0;
};

struct AggregateResult {
  AggregateSummary overall;
  AggregateSummary slice;  // r > 4, m > 1, n > 1000
  // Rolling median speedup along increasing realized redundancy.
  std::vector<std::pair<double, double>> rolling;
  std::vector<EtrBin> etr_bins;  // truncated at redundancy <= 50
};

// window defaults to min(501, usable rows); only "ok" rows participate.
AggregateResult aggregate(const std::vector<ExperimentRecord>& records,
                          int window = 501);

void write_aggregate(const AggregateResult& agg, const std::string& prefix);

}  // namespace sparsepack

#endif  // SPARSEPACK_BENCH_HPP_
