#include "sparsepack/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sparsepack {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;
}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_icdf(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("normal_icdf requires u in (0,1)");

  // Acklam's rational approximation (~1.15e-9 relative error).
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (u < plow) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - plow) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley refinement step.
  const double e = normal_cdf(x) - u;
  const double w = e * kSqrt2Pi * std::exp(0.5 * x * x);
  x -= w / (1.0 + 0.5 * x * w);
  return x;
}

void validate_marginal(const Marginal& m) {
  if (const auto* u = std::get_if<Uniform>(&m)) {
    if (!(u->a < u->b)) throw std::invalid_argument("uniform requires a < b");
  } else {
    const auto& t = std::get<TruncNormal>(m);
    if (!(t.sigma > 0.0))
      throw std::invalid_argument("truncnormal requires sigma > 0");
    if (!(t.lo < t.hi))
      throw std::invalid_argument("truncnormal requires lo < hi");
  }
}

double marginal_lo(const Marginal& m) {
  if (const auto* u = std::get_if<Uniform>(&m)) return u->a;
  return std::get<TruncNormal>(m).lo;
}

double inverse_cdf(const Marginal& m, double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("inverse_cdf requires u in (0,1)");
  if (const auto* uni = std::get_if<Uniform>(&m))
    return uni->a + u * (uni->b - uni->a);
  const auto& t = std::get<TruncNormal>(m);
  const double flo = normal_cdf((t.lo - t.mu) / t.sigma);
  const double fhi = normal_cdf((t.hi - t.mu) / t.sigma);
  const double p = flo + u * (fhi - flo);
  double x = t.mu + t.sigma * normal_icdf(p);
  return std::clamp(x, t.lo, t.hi);
}

double marginal_cdf(const Marginal& m, double x) {
  if (const auto* uni = std::get_if<Uniform>(&m)) {
    if (x <= uni->a) return 0.0;
    if (x >= uni->b) return 1.0;
    return (x - uni->a) / (uni->b - uni->a);
  }
  const auto& t = std::get<TruncNormal>(m);
  if (x <= t.lo) return 0.0;
  if (x >= t.hi) return 1.0;
  const double flo = normal_cdf((t.lo - t.mu) / t.sigma);
  const double fhi = normal_cdf((t.hi - t.mu) / t.sigma);
  return (normal_cdf((x - t.mu) / t.sigma) - flo) / (fhi - flo);
}

double empirical_quantile(std::vector<double> data, double q) {
  if (data.empty()) throw std::invalid_argument("quantile of empty data");
  std::sort(data.begin(), data.end());
  const auto n = data.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(q * n));
  if (rank == 0) rank = 1;
  if (rank > n) rank = n;
  return data[rank - 1];
}

double ks_statistic(std::vector<double> sample, const Marginal& m) {
  if (sample.empty()) throw std::invalid_argument("ks of empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = marginal_cdf(m, sample[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(i / n - f));
  }
  return d;
}

namespace {
std::vector<double> ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * (i + j) + 1.0;  // midrank, 1-based
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}
}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("spearman needs paired samples");
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double gaussian_copula_spearman(double rho) {
  return 6.0 / M_PI * std::asin(rho / 2.0);
}

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  out.count = xs.size();
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / xs.size();
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / (xs.size() - 1) / xs.size());
  }
  return out;
}

}  // namespace sparsepack
