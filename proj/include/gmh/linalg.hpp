#pragma once

#include "gmh/types.hpp"

namespace gmh {

/// Lower-triangular factor L of a symmetric positive-definite M = L L^T.
class CholFactor {
 public:
  /// Factor of the d x d identity.
  static CholFactor identity(Eigen::Index d);
  /// Factorizes a covariance matrix. Throws std::invalid_argument if it is not
  /// square, symmetric or positive definite.
  static CholFactor from_covariance(const Matrix& m);
  /// Wraps an existing lower factor. The diagonal must be strictly positive.
  static CholFactor from_lower(Matrix lower);
  /// Diagonal M from a vector of variances.
  static CholFactor from_variances(const Vector& variances);

  Eigen::Index dim() const { return lower_.rows(); }
  const Matrix& lower() const { return lower_; }
  Matrix covariance() const { return lower_ * lower_.transpose(); }

  /// L w
  Vector apply(const Vector& w) const;
  /// L^{-1} v
  Vector whiten(const Vector& v) const;
  /// v^T M^{-1} v
  double mahalanobis_sq(const Vector& v) const;
  /// log det M
  double log_det() const;

 private:
  explicit CholFactor(Matrix lower);
  Matrix lower_;
  bool diagonal_ = false;
};

}  // namespace gmh
