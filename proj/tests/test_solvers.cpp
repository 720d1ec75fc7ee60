#include <cmath>
#include <vector>

#include "doctest.h"

#include "sparsepack/generator.hpp"
#include "sparsepack/rng.hpp"
#include "sparsepack/solvers.hpp"

using namespace sparsepack;

namespace {

// Exhaustive GAP oracle: every item picks a knapsack or skips. Also
// returns the lexicographically smallest optimal vector (skip sorts last)
// to pin down the canonical tie-break.
struct BruteResult {
  double value = 0.0;
  std::vector<int> choice;  // knapsack per item, m = skip
};

BruteResult brute_gap(const GapInstance& inst) {
  const int n = inst.n();
  const int m = inst.m();
  BruteResult best;
  best.choice.assign(n, m);
  std::vector<int> cur(n, m);
  std::vector<double> load(m, 0.0);
  double value = 0.0;

  // Depth-first in lexicographic order (knapsack 0..m-1, then skip), so
  // the first strictly better optimum found is the lex-min one.
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      if (value > best.value + 1e-12) {
        best.value = value;
        best.choice = cur;
      }
      return;
    }
    for (int j = 0; j < m; ++j) {
      if (load[j] + inst.weight(i, j) > inst.capacity(j)) continue;
      // Save/restore instead of subtracting back: the float round trip
      // can drift an ulp and reject exact-fit items later on.
      const double lsave = load[j], vsave = value;
      load[j] += inst.weight(i, j);
      value += inst.value(i, j);
      cur[i] = j;
      self(self, i + 1);
      load[j] = lsave;
      value = vsave;
    }
    cur[i] = m;
    self(self, i + 1);
  };
  rec(rec, 0);
  return best;
}

GapInstance random_gap(int n, int m, std::uint64_t seed) {
  GenParams gp;
  gp.n = n;
  gp.m = m;
  gp.rho = (seed % 5) * 0.2 - 0.4;
  // Keep the capacity above the weight range even at tiny n / m.
  gp.redundancy_target = (0.5 + 0.1 * (seed % 4)) * n / m;
  gp.seed = seed;
  return generate(gp).instance;
}

}  // namespace

TEST_CASE("kp_exact on the three-item example") {
  const std::vector<double> v = {10, 6, 5}, w = {5, 4, 3};
  const SolveResult r = kp_exact(v, w, 7);
  CHECK(r.value == doctest::Approx(11));
  CHECK(r.status == SolveStatus::Optimal);
  Assignment expect;
  expect.add(1, 0);
  expect.add(2, 0);
  CHECK(r.assignment == expect);
}

TEST_CASE("kp_exact trivial cases") {
  const std::vector<double> v = {10, 6, 5}, w = {5, 4, 3};
  CHECK(kp_exact(v, w, 100).value == doctest::Approx(21));
  CHECK(kp_exact({}, {}, 5).value == doctest::Approx(0));
  CHECK(kp_exact({}, {}, 5).assignment.empty());
}

TEST_CASE("kp_exact matches subset enumeration on random instances") {
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 4 + static_cast<int>(mix_key(200, rep) % 12);  // <= 15
    const GapInstance inst = random_gap(n, 1, 300 + rep);
    const double brute = brute_gap(inst).value;
    CHECK(kp_exact(inst).value == doctest::Approx(brute).epsilon(1e-9));
  }
}

TEST_CASE("fractional greedy") {
  const std::vector<double> v = {10, 6, 5}, w = {5, 4, 3};
  CHECK(kp_fractional_greedy(v, w, 7) ==
        doctest::Approx(10 + 2.0 / 3.0 * 5).epsilon(1e-12));
  CHECK(kp_fractional_greedy(v, w, 100) == doctest::Approx(21));
  CHECK(kp_fractional_greedy({8}, {4}, 2) == doctest::Approx(4));
}

TEST_CASE("gap_exact on the diagonal example") {
  const GapInstance inst(InstanceKind::Gap, 2, 2, {9, 1, 1, 9}, {1, 1, 1, 1},
                         {1, 1});
  const SolveResult r = gap_exact(inst);
  CHECK(r.value == doctest::Approx(18));
  Assignment expect;
  expect.add(0, 0);
  expect.add(1, 1);
  CHECK(r.assignment == expect);
}

TEST_CASE("gap_exact matches brute force with the canonical tie-break") {
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 1 + static_cast<int>(mix_key(400, rep) % 3);
    const int n = 4 + static_cast<int>(mix_key(401, rep) % 7);  // <= 10
    const GapInstance inst = random_gap(n, m, 500 + rep);
    const BruteResult brute = brute_gap(inst);
    const SolveResult r = gap_exact(inst);
    CHECK(r.value == doctest::Approx(brute.value).epsilon(1e-9));
    std::vector<int> got(n, m);
    for (const auto& pr : r.assignment.pairs) got[pr.first] = pr.second;
    CHECK(got == brute.choice);
  }
}

TEST_CASE("gap_exact reduces to kp_exact for m=1") {
  const GapInstance inst = random_gap(12, 1, 777);
  CHECK(gap_exact(inst).value ==
        doctest::Approx(kp_exact(inst).value).epsilon(1e-12));
}

TEST_CASE("budgets are monotone and respected") {
  const GapInstance inst = random_gap(40, 2, 901);
  Budget tiny;
  tiny.max_nodes = 50;
  const SolveResult small = gap_exact(inst, tiny);
  Budget big;
  big.max_nodes = 100000000;
  const SolveResult large = gap_exact(inst, big);
  CHECK(small.value <= large.value + 1e-9);
  if (small.status == SolveStatus::BudgetExceeded)
    CHECK(validate_assignment(inst, small.assignment));
}

TEST_CASE("expected_opt") {
  const GapInstance inst(InstanceKind::Kp, 3, 1, {10, 6, 5}, {5, 4, 3}, {7});
  const ExpectedOpt one = expected_opt(inst, 1.0, 10, 42);
  CHECK(one.mean == doctest::Approx(11));
  CHECK(one.stderr_ == doctest::Approx(0));

  // Exact expectation over the 8 subsets at p = 1/2 is 63/8.
  const ExpectedOpt est = expected_opt(inst, 0.5, 10000, 42);
  CHECK(std::abs(est.mean - 7.875) <= 3 * est.stderr_ + 1e-12);
  CHECK_THROWS(expected_opt(inst, 0.0, 10, 1));
}
