#ifndef SPARSEPACK_STATS_HPP_
#define SPARSEPACK_STATS_HPP_

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sparsepack {

// Standard normal CDF, accurate to ~1e-15 via erfc.
double normal_cdf(double z);

// Standard normal quantile. Rational initial guess refined by one Halley
// step; absolute error below 1e-9 across (0, 1).
double normal_icdf(double u);

struct Uniform {
  double a = 0.0;
  double b = 1.0;
};

struct TruncNormal {
  double mu = 0.0;
  double sigma = 1.0;
  double lo = 0.0;
  double hi = 1.0;
};

using Marginal = std::variant<Uniform, TruncNormal>;

void validate_marginal(const Marginal& m);
double marginal_lo(const Marginal& m);

// Quantile function of the marginal. u must lie in the open interval
// (0, 1). TruncNormal uses the exact conditional quantile
// F^{-1}(F(lo) + u (F(hi) - F(lo))) of the untruncated normal.
double inverse_cdf(const Marginal& m, double u);

// CDF of the marginal (used for goodness-of-fit checks).
double marginal_cdf(const Marginal& m, double x);

// Empirical quantile by nearest rank on a copy of the data.
double empirical_quantile(std::vector<double> data, double q);

// Kolmogorov-Smirnov statistic of a sample against a marginal.
double ks_statistic(std::vector<double> sample, const Marginal& m);

// Empirical Spearman rank correlation of paired samples.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Population Spearman correlation of a Gaussian copula with parameter rho.
double gaussian_copula_spearman(double rho);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t count = 0;
};

MeanStderr mean_stderr(const std::vector<double>& xs);

}  // namespace sparsepack

#endif  // SPARSEPACK_STATS_HPP_
