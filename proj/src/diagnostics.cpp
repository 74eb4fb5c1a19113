#include "gmh/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gmh {

namespace {

double mean_of(std::span<const double> s) {
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

}  // namespace

Autocovariance autocovariance(std::span<const double> series, std::size_t max_lag) {
  const std::size_t n = series.size();
  if (n <= max_lag) throw std::invalid_argument("autocovariance: series shorter than max_lag + 1");
  Autocovariance out;
  out.values.assign(max_lag + 1, 0.0);
  const double mu = mean_of(series);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = series[i] - mu;
  out.constant = std::all_of(series.begin(), series.end(), [&](double v) { return v == series[0]; });
  if (out.constant) return out;
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) acc += c[i] * c[i + k];
    out.values[k] = acc / static_cast<double>(n);
  }
  return out;
}

EssReport ess(std::span<const double> series, double wall_seconds) {
  const std::size_t n = series.size();
  if (n < 100) throw std::invalid_argument("ess: need at least 100 values");
  if (std::all_of(series.begin(), series.end(), [&](double v) { return v == series[0]; })) {
    throw std::invalid_argument("ess: constant series");
  }
  const double mu = mean_of(series);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = series[i] - mu;
  auto gamma = [&](std::size_t k) {
    double acc = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) acc += c[i] * c[i + k];
    return acc / static_cast<double>(n);
  };
  const double g0 = gamma(0);

  // Sum pairs P_m = rho_{2m} + rho_{2m+1} while positive, enforcing a
  // nonincreasing sequence.
  double sum_pairs = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  std::size_t pairs = 0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double p = (gamma(2 * m) + gamma(2 * m + 1)) / g0;
    if (!(p > 0.0)) break;
    p = std::min(p, prev);
    sum_pairs += p;
    prev = p;
    ++pairs;
  }

  EssReport r;
  r.n = n;
  r.truncation_lag = 2 * std::max<std::size_t>(pairs, 1);
  double tau = -1.0 + 2.0 * sum_pairs;
  // Antithetic series can drive tau to zero or below; cap ess at n log10 n.
  const double tau_floor = 1.0 / std::log10(static_cast<double>(n));
  tau = std::max(tau, tau_floor);
  r.act = tau;
  r.ess = static_cast<double>(n) / tau;
  r.super_efficient = r.ess > static_cast<double>(n);
  if (wall_seconds > 0.0) r.ess_per_second = r.ess / wall_seconds;
  return r;
}

double asymptotic_variance(std::span<const double> series) {
  const EssReport r = ess(series);
  const double mu = mean_of(series);
  double var = 0.0;
  for (double v : series) var += (v - mu) * (v - mu);
  var /= static_cast<double>(series.size());
  return var * r.act;
}

double acceptance_rate(const ChainTrace& trace) {
  if (trace.steps.empty()) throw std::invalid_argument("acceptance_rate: empty trace");
  const auto acc = std::count_if(trace.steps.begin(), trace.steps.end(), [](const StepRecord& r) { return r.accepted; });
  return static_cast<double>(acc) / static_cast<double>(trace.steps.size());
}

Vector lag1_displacement_variance(const std::vector<Vector>& states) {
  if (states.size() < 2) throw std::invalid_argument("lag1_displacement_variance: need two states");
  Vector acc = Vector::Zero(states.front().size());
  for (std::size_t t = 1; t < states.size(); ++t) {
    acc += (states[t] - states[t - 1]).cwiseAbs2();
  }
  return acc / static_cast<double>(states.size() - 1);
}

TraceSummary summarize(const ChainTrace& trace) {
  if (trace.steps.empty()) throw std::invalid_argument("summarize: empty trace");
  TraceSummary s;
  s.n = trace.steps.size();
  s.acceptance_rate = acceptance_rate(trace);
  double tries = 0.0;
  std::size_t plus = 0;
  bool guided = false;
  for (const auto& r : trace.steps) {
    tries += r.inner_tries;
    if (r.direction != 0) guided = true;
    if (r.direction > 0) ++plus;
  }
  s.mean_inner_tries = tries / static_cast<double>(s.n);
  if (guided) s.direction_balance = static_cast<double>(plus) / static_cast<double>(s.n);

  if (!trace.states.empty()) {
    const auto d = trace.states.front().size();
    s.state_mean = Vector::Zero(d);
    s.state_variance = Vector::Zero(d);
    for (const auto& x : trace.states) s.state_mean += x;
    s.state_mean /= static_cast<double>(trace.states.size());
    for (const auto& x : trace.states) s.state_variance += (x - s.state_mean).cwiseAbs2();
    if (trace.states.size() > 1) s.state_variance /= static_cast<double>(trace.states.size() - 1);
  }

  const auto lt = log_target_series(trace);
  s.log_target_mean = mean_of(lt);
  double var = 0.0;
  for (double v : lt) var += (v - s.log_target_mean) * (v - s.log_target_mean);
  s.log_target_variance = s.n > 1 ? var / static_cast<double>(s.n - 1) : 0.0;
  if (s.n >= 100 && var > 0.0) s.log_target_ess = ess(lt, trace.wall_seconds);
  return s;
}

void to_json(nlohmann::json& j, const EssReport& r) {
  j = nlohmann::json{{"ess", r.ess},
                     {"ess_per_second", r.ess_per_second},
                     {"n", r.n},
                     {"act", r.act},
                     {"truncation_lag", r.truncation_lag},
                     {"super_efficient", r.super_efficient},
                     {"method", r.method}};
}

void to_json(nlohmann::json& j, const TraceSummary& s) {
  auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  j = nlohmann::json{{"n", s.n},
                     {"acceptance_rate", s.acceptance_rate},
                     {"mean_inner_tries", s.mean_inner_tries},
                     {"direction_balance", s.direction_balance ? nlohmann::json(*s.direction_balance) : nlohmann::json()},
                     {"state_mean", vec(s.state_mean)},
                     {"state_variance", vec(s.state_variance)},
                     {"log_target_mean", s.log_target_mean},
                     {"log_target_variance", s.log_target_variance}};
  if (s.log_target_ess) j["log_target_ess"] = *s.log_target_ess;
}

}  // namespace gmh
