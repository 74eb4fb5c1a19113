#include "gmh/distributions.hpp"

#include <cmath>
#include <numbers>

namespace gmh {

namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite input");
}

// Marsaglia & Tsang squeeze for shape >= 1, unit rate, returned as a log.
double log_gamma_unit_large_shape(double shape, RngStream& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d) + std::log(v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d) + std::log(v);
  }
}

}  // namespace

Vector sample_mvnormal(const Vector& mean, const CholFactor& chol, double scale, RngStream& rng) {
  if (mean.size() != chol.dim()) throw std::invalid_argument("sample_mvnormal: dimension mismatch");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("sample_mvnormal: scale must be positive and finite");
  }
  require_finite(mean, "sample_mvnormal");
  Vector w(mean.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.normal();
  return mean + std::sqrt(scale) * chol.apply(w);
}

double mvnormal_logpdf(const Vector& x, const Vector& mean, const CholFactor& chol, double scale) {
  if (x.size() != mean.size() || x.size() != chol.dim()) {
    throw std::invalid_argument("mvnormal_logpdf: dimension mismatch");
  }
  const double d = static_cast<double>(x.size());
  const double q = chol.mahalanobis_sq(x - mean) / scale;
  return -0.5 * (d * std::log(2.0 * std::numbers::pi * scale) + chol.log_det() + q);
}

double sample_log_gamma(double shape, double rate, RngStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw std::invalid_argument("sample_gamma: shape and rate must be positive and finite");
  }
  double log_g = 0.0;
  if (shape >= 1.0) {
    log_g = log_gamma_unit_large_shape(shape, rng);
  } else {
    const double boosted = log_gamma_unit_large_shape(shape + 1.0, rng);
    log_g = boosted + std::log(rng.uniform()) / shape;
  }
  return log_g - std::log(rate);
}

double sample_gamma(double shape, double rate, RngStream& rng) {
  return std::exp(sample_log_gamma(shape, rate, rng));
}

double gamma_logpdf(double x, double shape, double rate) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double sample_beta(double a, double b, RngStream& rng) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("sample_beta: parameters must be positive");
  const double lx = sample_log_gamma(a, 1.0, rng);
  const double ly = sample_log_gamma(b, 1.0, rng);
  // X / (X + Y) = 1 / (1 + exp(log Y - log X))
  return 1.0 / (1.0 + std::exp(ly - lx));
}

double sample_noncentral_chisq(int dof, double noncentrality, RngStream& rng) {
  if (dof < 1) throw std::invalid_argument("sample_noncentral_chisq: dof must be >= 1");
  if (!(noncentrality >= 0.0)) {
    throw std::invalid_argument("sample_noncentral_chisq: noncentrality must be >= 0");
  }
  const double head = std::sqrt(noncentrality) + rng.normal();
  double acc = head * head;
  for (int l = 1; l < dof; ++l) {
    const double w = rng.normal();
    acc += w * w;
  }
  return acc;
}

}  // namespace gmh
