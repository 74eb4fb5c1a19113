#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmh/chain.hpp"

namespace gmh {

struct Autocovariance {
  /// Biased (1/n) autocovariances at lags 0..max_lag.
  std::vector<double> values;
  /// The series was constant; all values are zero.
  bool constant = false;
};

Autocovariance autocovariance(std::span<const double> series, std::size_t max_lag);

struct EssReport {
  double ess = 0.0;
  double ess_per_second = 0.0;
  std::size_t n = 0;
  /// Integrated autocorrelation time, n / ess.
  double act = 0.0;
  /// Number of autocorrelation lags summed (always even).
  std::size_t truncation_lag = 0;
  /// ess > n from negatively correlated (antithetic) draws.
  bool super_efficient = false;
  std::string method = "geyer-initial-monotone";
};

/// Effective sample size via Geyer's initial monotone sequence over pairs
/// of autocorrelations. `wall_seconds` <= 0 leaves ess_per_second at 0.
/// Throws std::invalid_argument on fewer than 100 values or a constant series.
EssReport ess(std::span<const double> series, double wall_seconds = 0.0);

/// Variance of the series times its integrated autocorrelation time.
double asymptotic_variance(std::span<const double> series);

double acceptance_rate(const ChainTrace& trace);

/// Mean of |x_{t+1} - x_t|^2 per coordinate over the recorded states.
Vector lag1_displacement_variance(const std::vector<Vector>& states);

struct TraceSummary {
  std::size_t n = 0;
  double acceptance_rate = 0.0;
  double mean_inner_tries = 0.0;
  /// Fraction of measured steps in direction '+'; absent for non-guided traces.
  std::optional<double> direction_balance;
  Vector state_mean;
  Vector state_variance;
  double log_target_mean = 0.0;
  double log_target_variance = 0.0;
  std::optional<EssReport> log_target_ess;
};

TraceSummary summarize(const ChainTrace& trace);

void to_json(nlohmann::json& j, const EssReport& r);
void to_json(nlohmann::json& j, const TraceSummary& s);

}  // namespace gmh
