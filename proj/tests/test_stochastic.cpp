#include <cmath>

#include "doctest.h"

#include "sparsepack/stochastic.hpp"

using namespace sparsepack;

TEST_CASE("sample_active basics") {
  const ActiveSet full = sample_active(10, 1.0, 3);
  CHECK(full.included.size() == 10);
  const ActiveSet a = sample_active(100, 0.5, 42);
  const ActiveSet b = sample_active(100, 0.5, 42);
  CHECK(a.included == b.included);
  CHECK(sample_active(100, 0.5, 43).included != a.included);
  CHECK_THROWS(sample_active(10, 0.0, 1));

  // Binomial concentration: |R| within 3 sigma of n p.
  const ActiveSet big = sample_active(10000, 0.5, 7);
  CHECK(std::abs(static_cast<double>(big.included.size()) - 5000.0) <=
        3 * 50.0);
}

TEST_CASE("eval with full query set is exactly one") {
  const GapInstance inst(InstanceKind::Kp, 3, 1, {10, 6, 5}, {5, 4, 3}, {7});
  const SparsifierEval e =
      eval_sparsifier(inst, full_item_set(3), 0.5, 200, 11);
  CHECK(e.completed == 200);
  CHECK(e.ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.ratio_stderr == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("eval matches the enumerated truth on the three-item instance") {
  const GapInstance inst(InstanceKind::Kp, 3, 1, {10, 6, 5}, {5, 4, 3}, {7});
  ItemSet q;
  q.indices = {0, 1};
  // E[OPT on Q cap R] = (0 + 10 + 6 + 10)/4 = 6.5; E[OPT on R] = 7.875.
  const SparsifierEval e = eval_sparsifier(inst, q, 0.5, 10000, 11);
  const double truth = 6.5 / 7.875;
  // Conservative band: combine numerator/denominator uncertainty.
  const double band = 3 * (e.ratio_stderr + 1e-3);
  CHECK(std::abs(e.ratio - truth) <= band);
}

TEST_CASE("enlarging the query set never hurts under common randomness") {
  const GapInstance inst(InstanceKind::Gap, 6, 2,
                         {9, 4, 8, 3, 7, 2, 6, 1, 5, 9, 4, 8},
                         {2, 3, 3, 2, 2, 3, 3, 2, 2, 3, 3, 2}, {5, 5});
  ItemSet small;
  small.indices = {0, 2};
  ItemSet large;
  large.indices = {0, 1, 2, 3, 4};
  const SparsifierEval a = eval_sparsifier(inst, small, 0.6, 300, 5);
  const SparsifierEval b = eval_sparsifier(inst, large, 0.6, 300, 5);
  CHECK(b.numerator_mean >= a.numerator_mean - 1e-9);
  CHECK(a.denominator_mean == doctest::Approx(b.denominator_mean));
}
