#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gmh/diagnostics.hpp"

namespace gmh::testing {

double kolmogorov_sf(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double kolmogorov_p(double d, double n_eff) {
  const double rn = std::sqrt(n_eff);
  return kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return {d, kolmogorov_p(d, n)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, kolmogorov_p(d, na * nb / (na + nb))};
}

double sign_test_p_value(const std::vector<double>& xs) {
  std::size_t pos = 0;
  std::size_t n = 0;
  for (double v : xs) {
    if (v == 0.0) continue;
    ++n;
    if (v > 0.0) ++pos;
  }
  if (n == 0) return 1.0;
  boost::math::binomial_distribution<double> bin(static_cast<double>(n), 0.5);
  const double k = static_cast<double>(std::min(pos, n - pos));
  return std::min(1.0, 2.0 * boost::math::cdf(bin, k));
}

double normal_cdf(double x, double mean, double sd) {
  return boost::math::cdf(boost::math::normal_distribution<double>(mean, sd), x);
}

double gamma_cdf(double x, double shape, double rate) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(shape, rate * x);
}

double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(const std::vector<double>& xs) {
  const double m = mean(xs);
  double acc = 0.0;
  for (double v : xs) acc += (v - m) * (v - m);
  return acc / static_cast<double>(xs.size() - 1);
}

std::vector<double> thin_by_act(const std::vector<double>& xs) {
  const auto r = gmh::ess(xs);
  const auto step = static_cast<std::size_t>(std::max(1.0, std::ceil(2.0 * static_cast<double>(xs.size()) / r.ess)));
  std::vector<double> out;
  for (std::size_t i = 0; i < xs.size(); i += step) out.push_back(xs[i]);
  return out;
}

MomentCheck check_mean(const std::vector<double>& xs, double truth) {
  MomentCheck c;
  c.estimate = mean(xs);
  c.standard_error = std::sqrt(variance(xs) / gmh::ess(xs).ess);
  c.z = (c.estimate - truth) / c.standard_error;
  return c;
}

MomentCheck check_variance(const std::vector<double>& xs, double true_mean, double true_variance) {
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - true_mean) * (xs[i] - true_mean);
  return check_mean(sq, true_variance);
}

}  // namespace gmh::testing
