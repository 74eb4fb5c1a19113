#pragma once

// Target catalog. Every log-density is with respect to Lebesgue measure and
// unnormalized; the samplers subtract the reference-measure density.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gmh/kernels.hpp"
#include "gmh/linalg.hpp"
#include "gmh/rng.hpp"
#include "gmh/types.hpp"

namespace gmh {

using LogDensityFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;

struct TargetModel {
  std::string name;
  Eigen::Index dim = 0;
  Support support = Support::RealLine;
  LogDensityFn log_density;
  /// Empty when no cheap gradient is available.
  GradientFn gradient;

  bool has_gradient() const { return static_cast<bool>(gradient); }
  bool in_support(const Vector& x) const;
  /// log_density, mapped to -inf off support or when not finite.
  double log_target(const Vector& x) const;
};

// ---------------------------------------------------------------- R^d

TargetModel gaussian_target(Vector mean, CholFactor cov);
TargetModel standard_gaussian_target(Eigen::Index dim);

enum class StudentForm {
  /// -35 log(1 + x^T Sigma^{-1} x / 20)
  Scaled35,
  /// Central multivariate t kernel with identity scale around a location.
  Central,
};

/// Log-density of the two Student-type forms. For Central, `nu` is the
/// degrees of freedom and `location` the center; Scaled35 ignores both.
double mvt_logdensity(const Vector& x, const CholFactor& sigma, StudentForm form, double nu = 3.0,
                      const Vector* location = nullptr);

TargetModel scaled35_target(CholFactor sigma);
TargetModel student_t_target(Eigen::Index dim, double nu, Vector location);

/// sum_{i=1}^{dof} z_i z_i^T with z_i ~ N_d(0, I).
Matrix sample_wishart_identity(Eigen::Index dim, int dof, RngStream& rng);

// ------------------------------------------------------ logistic model

struct DesignData {
  Matrix x;  ///< n x p
  Vector y;  ///< n labels in {0, 1}
};

double logistic_logpost(const Vector& beta, const DesignData& data, double prior_sd);
Vector logistic_gradient(const Vector& beta, const DesignData& data, double prior_sd);
TargetModel logistic_target(std::shared_ptr<const DesignData> data, double prior_sd = 10.0);

struct CsvOptions {
  /// Feature columns per row; the label follows them.
  std::optional<int> features = 60;
  bool standardize = false;
};

/// Reads rows of features followed by a label. Labels may be 0/1 or the
/// UCI Sonar letters (R -> 0, M -> 1). Throws std::runtime_error naming the
/// offending line on malformed input.
DesignData load_design_csv(const std::filesystem::path& path, const CsvOptions& opts = {});
void standardize_columns(Matrix& x);

/// Gaussian covariates, Bernoulli-logit labels from a random coefficient
/// vector; defaults match the Sonar shape.
DesignData make_synthetic_logistic(int n, int p, std::uint64_t seed, double coef_scale = 0.3);

// ------------------------------------------------------ R+^d products

/// Product of independent G(shape_i, rate_i) on the positive orthant.
TargetModel gamma_product_target(Vector shape, Vector rate);

// --------------------------------------- Poisson-Gamma hierarchical model

struct PoissonHierData {
  /// counts(m, n), M rows and N columns.
  Eigen::MatrixXi counts;

  int groups() const { return static_cast<int>(counts.rows()); }
  int per_group() const { return static_cast<int>(counts.cols()); }
};

PoissonHierData simulate_hier_data(double alpha_true, double beta_true, int groups, int per_group,
                                   std::uint64_t seed);

/// theta_m | alpha, beta, x ~ G(sum_n x_{m,n} + alpha, N + beta)
Vector gibbs_theta(double alpha, double beta, const PoissonHierData& data, RngStream& rng);

/// log p(alpha, beta, theta) up to a constant (the Poisson likelihood does not
/// involve alpha or beta and is omitted).
double hier_logpost(double alpha, double beta, const Vector& theta);

/// Prior shape and rate of alpha and beta.
inline constexpr double kHierPriorShape = 1.0 / 20.0;
inline constexpr double kHierPriorRate = 1.0 / 20.0;

/// Mutable Gibbs state for the hierarchical model: theta is refreshed by
/// `update_theta`, and `conditional_target` reads the current theta.
class PoissonHierModel {
 public:
  explicit PoissonHierModel(PoissonHierData data);

  const PoissonHierData& data() const { return data_; }
  const Vector& theta() const { return theta_; }
  void set_theta(Vector theta) { theta_ = std::move(theta); }
  void update_theta(const Vector& alpha_beta, RngStream& rng);

  /// Target on (alpha, beta) in R+^2 given the current theta. The returned
  /// model references this object, which must outlive it.
  TargetModel conditional_target() const;

 private:
  PoissonHierData data_;
  Vector theta_;
};

}  // namespace gmh
