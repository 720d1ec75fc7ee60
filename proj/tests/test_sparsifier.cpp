#include <cmath>
#include <set>

#include "doctest.h"

#include "sparsepack/generator.hpp"
#include "sparsepack/lp.hpp"
#include "sparsepack/sparsifier.hpp"

using namespace sparsepack;

namespace {

GapInstance random_gap(int n, int m, std::uint64_t seed) {
  GenParams gp;
  gp.n = n;
  gp.m = m;
  gp.redundancy_target = 3.0 + (seed % 4);
  gp.seed = seed;
  return generate(gp).instance;
}

SparsifyParams per_knapsack(const GapInstance& inst, double eps, double p) {
  SparsifyParams params;
  params.epsilon = eps;
  params.p = p;
  params.oracle_mode = OracleMode::PerKnapsack;
  params.oracle_m.assign(inst.m(), 0.0);
  for (int j = 0; j < inst.m(); ++j) {
    double best = 0.0;
    for (int i = 0; i < inst.n(); ++i)
      if (inst.weight(i, j) <= inst.capacity(j))
        best = std::max(best, inst.value(i, j));
    params.oracle_m[j] = std::max(best, 1.0);
  }
  return params;
}

}  // namespace

TEST_CASE("tau formula") {
  CHECK(tau(1.0) == doctest::Approx(1.0));
  // ln 5 = 1.60944: 1 + 1.60944 + sqrt(1.60944^2 + 2*1.60944)
  CHECK(tau(0.2) == doctest::Approx(5.0196622).epsilon(1e-6));
  double prev = tau(0.01);
  for (int s = 2; s <= 100; ++s) {
    const double t = tau(s * 0.01);
    CHECK(t < prev + 1e-12);
    prev = t;
  }
  CHECK_THROWS(tau(0.0));
  CHECK_THROWS(tau(-1.0));
}

TEST_CASE("bucket index on the geometric grid") {
  const double M = 100.0, g = 0.25;
  CHECK(bucket_index(10.0, M, g, 6, false) == 0);   // <= 25
  CHECK(bucket_index(25.0, M, g, 6, false) == 0);   // boundary inclusive
  CHECK(bucket_index(26.0, M, g, 6, false) == 1);   // (25, 31.25]
  CHECK(bucket_index(31.25, M, g, 6, false) == 1);
  CHECK(bucket_index(31.3, M, g, 6, false) == 2);
  CHECK(bucket_index(1e9, M, g, 6, false) == 6);    // clamps to K
  CHECK(bucket_index(1e9, M, g, 6, true) == 7);     // super bucket
  const auto [lo, hi] = bucket_bounds(M, g, 6, 2);
  CHECK(lo == doctest::Approx(25 * 1.25));
  CHECK(hi == doctest::Approx(25 * 1.25 * 1.25));
}

TEST_CASE("bucket count formulas use the natural log") {
  const GapInstance kp = random_gap(20, 1, 1);
  SparsifyParams params = per_knapsack(kp, 0.25, 1.0);
  const QueryResult q = sparsify_kp(kp, params);
  CHECK(q.num_buckets == 6);  // ceil(4 ln 4)

  SparsifyParams g2 = per_knapsack(kp, 0.2, 1.0);
  g2.mode = SparsifyMode::Practical;
  CHECK(sparsify_gap(kp, g2).num_buckets == 242);  // ceil(50 ln 125)

  SparsifyParams g3 = per_knapsack(kp, 0.1, 1.0);
  CHECK(sparsify_gap(kp, g3).num_buckets == 1382);  // ceil(200 ln 1000)
}

TEST_CASE("small query budgets select everything") {
  // Tiny instance: every bucket prefix exhausts its bucket, so Q = E.
  const GapInstance inst = random_gap(8, 1, 7);
  const QueryResult q = sparsify_kp(inst, per_knapsack(inst, 0.25, 1.0));
  CHECK(q.q.size() == 8);
}

TEST_CASE("kp query structure and degree accounting") {
  const GapInstance inst = random_gap(300, 1, 11);
  SparsifyParams params = per_knapsack(inst, 0.25, 0.5);
  const QueryResult q = sparsify_kp(inst, params);

  // Buckets are disjoint and their union is Q.
  std::set<int> seen;
  double total_w = 0.0;
  for (const auto& b : q.buckets)
    for (int i : b.items) {
      CHECK(seen.insert(i).second);
      total_w += inst.weight(i, 0);
    }
  CHECK(seen.size() == q.q.size());
  CHECK(q.ledger[0] == doctest::Approx(total_w));
  CHECK(q.lp_degree_bound ==
        doctest::Approx(std::max(1.0, total_w / inst.capacity(0))));
  CHECK(q.integral_degree_bound == 2.0 * q.lp_degree_bound);

  // Worst-case bound on the degree: K+1 buckets of prefix weight
  // tau*C/p plus one overshoot item each.
  const double bound =
      (q.num_buckets + 1) * (tau(params.epsilon) / params.p + 1);
  CHECK(q.lp_degree_bound <= bound);

  // Determinism.
  const QueryResult again = sparsify_kp(inst, params);
  CHECK(again.q == q.q);
}

TEST_CASE("gap query respects the selection guards") {
  const GapInstance inst = random_gap(120, 3, 13);
  SparsifyParams params = per_knapsack(inst, 0.3, 0.7);
  params.mode = SparsifyMode::Practical;
  params.k_override = 25;
  const QueryResult q = sparsify_gap(inst, params);

  std::set<int> seen;
  std::vector<double> ledger(inst.m(), 0.0);
  for (const auto& b : q.buckets) {
    const double budget_cap =
        q.tau_used * inst.capacity(b.j) / params.p;
    double sel_w = 0.0;
    for (int i : b.items) {
      CHECK(seen.insert(i).second);
      CHECK(inst.weight(i, b.j) <= inst.capacity(b.j));
      sel_w += inst.weight(i, b.j);
      ledger[b.j] += inst.weight(i, b.j);
    }
    // Budget is strict before selection, so overshoot is < one item.
    CHECK(sel_w <= budget_cap + inst.capacity(b.j) + 1e-9);
  }
  CHECK(seen.size() == q.q.size());
  for (int j = 0; j < inst.m(); ++j)
    CHECK(q.ledger[j] == doctest::Approx(ledger[j]));

  const double worst = q.lp_degree_bound;
  const double alpha = std::max(1.0, std::ceil(1.0 / params.epsilon) - 1.0);
  const double eps2 = params.epsilon * params.epsilon;
  CHECK(worst <= (alpha + 1) * (q.num_buckets + 2) *
                     (tau(eps2) / params.p + 1));
  CHECK(q.rounds == 3);  // ceil(1/0.3) - 1 with the pass override unset
}

TEST_CASE("second round adds nothing once everything is queried") {
  const GapInstance inst = random_gap(10, 2, 17);
  SparsifyParams params = per_knapsack(inst, 0.3, 1.0);
  params.mode = SparsifyMode::Practical;
  const QueryResult q = sparsify_gap(inst, params);
  for (const auto& b : q.buckets)
    if (b.t > 1) CHECK(b.items.empty());
}

TEST_CASE("lp-driven hyperparameters") {
  const GapInstance inst = random_gap(60, 2, 19);
  const SparsifyParams p = lp_driven_params(inst);
  CHECK(p.p == 1.0);
  CHECK(p.epsilon == doctest::Approx(0.2));
  CHECK(*p.tau_override == doctest::Approx(1.0));
  CHECK(*p.alpha_override == doctest::Approx(1.0));
  CHECK(*p.k_override == 81);  // ceil(25 ln 25)
  const double lp = gap_lp(inst).value;
  for (double mj : p.oracle_m) CHECK(mj == doctest::Approx(lp));
  const QueryResult q = sparsify_gap(inst, p);
  CHECK(q.rounds == 1);
  CHECK(q.tau_used == doctest::Approx(1.0));
}

TEST_CASE("oracle validation") {
  const GapInstance inst = random_gap(10, 2, 23);
  SparsifyParams params;
  params.oracle_mode = OracleMode::PerKnapsack;
  params.oracle_m = {5.0};  // wrong length
  CHECK_THROWS(sparsify_gap(inst, params));
  params.oracle_m = {5.0, -1.0};
  CHECK_THROWS(sparsify_gap(inst, params));
  params.oracle_mode = OracleMode::Global;
  params.oracle_global = 0.0;
  CHECK_THROWS(sparsify_gap(inst, params));
  SparsifyParams bad;
  bad.epsilon = 0.0;
  CHECK_THROWS(sparsify_gap(inst, bad));
  bad.epsilon = 0.2;
  bad.p = 1.5;
  CHECK_THROWS(sparsify_gap(inst, bad));
}

TEST_CASE("theory-range warnings") {
  const GapInstance inst = random_gap(10, 1, 29);
  SparsifyParams params = per_knapsack(inst, 0.4, 1.0);
  const QueryResult q = sparsify_kp(inst, params);
  CHECK(!q.warnings.empty());
  params.mode = SparsifyMode::Practical;
  CHECK(sparsify_kp(inst, params).warnings.empty());
}

TEST_CASE("query json round-trip") {
  const GapInstance inst = random_gap(40, 2, 31);
  SparsifyParams params = per_knapsack(inst, 0.3, 1.0);
  params.mode = SparsifyMode::Practical;
  params.k_override = 12;
  const QueryResult q = sparsify_gap(inst, params);
  const QueryResult back = query_from_json(query_to_json(q));
  CHECK(back.q == q.q);
  CHECK(back.ledger == q.ledger);
  CHECK(back.num_buckets == q.num_buckets);
  CHECK(back.buckets.size() == q.buckets.size());
  CHECK(query_to_json(back) == query_to_json(q));
}
