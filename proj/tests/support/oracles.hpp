#pragma once

// Test-only statistical oracles. Reference CDFs come from Boost.Math, which
// is independent of the samplers under test.

#include <cstddef>
#include <functional>
#include <vector>

namespace gmh::testing {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_sf(double lambda);

KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Two-sided exact binomial sign test on the nonzero values.
double sign_test_p_value(const std::vector<double>& xs);

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);
double gamma_cdf(double x, double shape, double rate);

double mean(const std::vector<double>& xs);
double variance(const std::vector<double>& xs);

/// Keeps every t-th value with t = max(1, ceil(2 * n / ess)), so the kept
/// values are close to independent for KS purposes.
std::vector<double> thin_by_act(const std::vector<double>& xs);

struct MomentCheck {
  double estimate = 0.0;
  double standard_error = 0.0;
  double z = 0.0;  ///< (estimate - truth) / standard_error
};

/// Mean of a chain against `truth`, with ESS-based standard error.
MomentCheck check_mean(const std::vector<double>& xs, double truth);
/// Second central moment about `true_mean` against `true_variance`.
MomentCheck check_variance(const std::vector<double>& xs, double true_mean, double true_variance);

}  // namespace gmh::testing
