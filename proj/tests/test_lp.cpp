#include <vector>

#include "doctest.h"

#include "sparsepack/generator.hpp"
#include "sparsepack/lp.hpp"
#include "sparsepack/solvers.hpp"

using namespace sparsepack;

namespace {

GapInstance random_gap(int n, int m, std::uint64_t seed) {
  GenParams gp;
  gp.n = n;
  gp.m = m;
  gp.redundancy_target = 2.0 + (seed % 3);
  gp.seed = seed;
  return generate(gp).instance;
}

}  // namespace

TEST_CASE("lp equals fractional greedy for one knapsack") {
  for (int rep = 0; rep < 20; ++rep) {
    const GapInstance inst = random_gap(15, 1, 1000 + rep);
    std::vector<double> v(inst.n()), w(inst.n());
    for (int i = 0; i < inst.n(); ++i) {
      v[i] = inst.value(i, 0);
      w[i] = inst.weight(i, 0);
    }
    const double greedy = kp_fractional_greedy(v, w, inst.capacity(0));
    CHECK(gap_lp(inst).value == doctest::Approx(greedy).epsilon(1e-9));
  }
}

TEST_CASE("lp solves the diagonal instance integrally") {
  const GapInstance inst(InstanceKind::Gap, 2, 2, {9, 1, 1, 9}, {1, 1, 1, 1},
                         {1, 1});
  const LpResult r = gap_lp(inst);
  CHECK(r.value == doctest::Approx(18));
  CHECK(r.y[0 * 2 + 0] == doctest::Approx(1));
  CHECK(r.y[1 * 2 + 1] == doctest::Approx(1));
}

TEST_CASE("all-zero values give zero") {
  const GapInstance inst(InstanceKind::Gap, 2, 1, {0, 0}, {1, 1}, {2});
  CHECK(gap_lp(inst).value == doctest::Approx(0));
}

TEST_CASE("lp sandwich and integrality gap on small instances") {
  for (int rep = 0; rep < 30; ++rep) {
    const GapInstance inst = random_gap(10, 1 + rep % 3, 2000 + rep);
    const double lp = gap_lp(inst).value;
    const double exact = gap_exact(inst).value;
    CHECK(lp >= exact - 1e-9);
    CHECK(exact >= lp / 2 - 1e-9);
  }
}

TEST_CASE("lp solution is primal feasible") {
  const GapInstance inst = random_gap(40, 3, 3003);
  const LpResult r = gap_lp(inst);
  for (int i = 0; i < inst.n(); ++i) {
    double row = 0.0;
    for (int j = 0; j < inst.m(); ++j) {
      const double y = r.y[static_cast<std::size_t>(i) * inst.m() + j];
      CHECK(y >= -1e-9);
      if (inst.weight(i, j) > inst.capacity(j)) CHECK(y == doctest::Approx(0));
      row += y;
    }
    CHECK(row <= 1 + 1e-9);
  }
  for (int j = 0; j < inst.m(); ++j) {
    double load = 0.0;
    for (int i = 0; i < inst.n(); ++i)
      load += inst.weight(i, j) *
              r.y[static_cast<std::size_t>(i) * inst.m() + j];
    CHECK(load <= inst.capacity(j) + 1e-6);
  }
}

TEST_CASE("variable limit enforced") {
  const GapInstance inst = random_gap(30, 2, 4004);
  CHECK_THROWS_AS(gap_lp(inst, 10), std::length_error);
}
