#include <cmath>

#include "doctest.h"

#include "sparsepack/rng.hpp"
#include "sparsepack/stats.hpp"

using namespace sparsepack;

TEST_CASE("normal cdf reference points") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-10));
  CHECK(normal_cdf(-1.959963984540054) ==
        doctest::Approx(0.025).epsilon(1e-8));
}

TEST_CASE("normal quantile inverts the cdf to 1e-9") {
  for (int i = 1; i < 2000; ++i) {
    const double u = i / 2000.0;
    const double z = normal_icdf(u);
    CHECK(std::abs(normal_cdf(z) - u) < 1e-9);
  }
  // Tails.
  for (double u : {1e-10, 1e-6, 1 - 1e-6}) {
    const double z = normal_icdf(u);
    CHECK(normal_cdf(z) == doctest::Approx(u).epsilon(1e-6));
  }
}

TEST_CASE("marginal quantiles") {
  const Marginal u = Uniform{2.0, 6.0};
  CHECK(inverse_cdf(u, 0.5) == doctest::Approx(4.0));
  CHECK(inverse_cdf(u, 0.25) == doctest::Approx(3.0));
  CHECK(marginal_cdf(u, 3.0) == doctest::Approx(0.25));
  CHECK(marginal_lo(u) == doctest::Approx(2.0));

  const Marginal t = TruncNormal{10.0, 5.0, 1.0, 30.0};
  CHECK(marginal_lo(t) == doctest::Approx(1.0));
  // Quantile stays inside the truncation interval and inverts the cdf.
  double prev = 1.0;
  for (int i = 1; i < 100; ++i) {
    const double q = inverse_cdf(t, i / 100.0);
    CHECK(q > 1.0 - 1e-9);
    CHECK(q < 30.0 + 1e-9);
    CHECK(q >= prev);
    CHECK(marginal_cdf(t, q) == doctest::Approx(i / 100.0).epsilon(1e-7));
    prev = q;
  }
  CHECK_THROWS(validate_marginal(Uniform{3.0, 1.0}));
  CHECK_THROWS(validate_marginal(TruncNormal{0.0, -1.0, 0.0, 1.0}));
}

TEST_CASE("empirical quantile uses nearest rank") {
  const std::vector<double> xs = {5, 1, 4, 2, 3};
  CHECK(empirical_quantile(xs, 0.05) == doctest::Approx(1));
  CHECK(empirical_quantile(xs, 0.5) == doctest::Approx(3));
  CHECK(empirical_quantile(xs, 1.0) == doctest::Approx(5));
}

TEST_CASE("spearman of monotone data is one") {
  std::vector<double> x, y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(i);
    y.push_back(i * i);
  }
  CHECK(spearman(x, y) == doctest::Approx(1.0));
  for (double& v : y) v = -v;
  CHECK(spearman(x, y) == doctest::Approx(-1.0));
}

TEST_CASE("copula spearman closed form") {
  CHECK(gaussian_copula_spearman(0.0) == doctest::Approx(0.0));
  CHECK(gaussian_copula_spearman(1.0) == doctest::Approx(1.0).epsilon(1e-9));
  const double rho = 0.5;
  CHECK(gaussian_copula_spearman(rho) ==
        doctest::Approx(6.0 / M_PI * std::asin(rho / 2.0)));
}

TEST_CASE("ks statistic small for matching sample") {
  std::vector<double> xs;
  for (int i = 0; i < 20000; ++i)
    xs.push_back(2.0 + 4.0 * uniform_open01(mix_key(77, i)));
  CHECK(ks_statistic(xs, Uniform{2.0, 6.0}) < 0.02);
  CHECK(ks_statistic(xs, Uniform{0.0, 6.0}) > 0.2);
}

TEST_CASE("mean and stderr") {
  const MeanStderr ms = mean_stderr({1, 2, 3, 4});
  CHECK(ms.mean == doctest::Approx(2.5));
  // sample sd = sqrt(5/3), stderr = sd / 2
  CHECK(ms.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(ms.count == 4);
}

TEST_CASE("rng streams are deterministic and in range") {
  CHECK(mix_key(1, 2) == mix_key(1, 2));
  CHECK(mix_key(1, 2) != mix_key(1, 3));
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform_open01(mix_key(9, i));
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}
