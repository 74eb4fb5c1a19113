#include "gmh/linalg.hpp"

#include <cmath>

namespace gmh {

CholFactor::CholFactor(Matrix lower) : lower_(std::move(lower)) {
  if (lower_.rows() != lower_.cols() || lower_.rows() == 0) {
    throw std::invalid_argument("CholFactor: factor must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < lower_.rows(); ++i) {
    if (!(lower_(i, i) > 0.0) || !std::isfinite(lower_(i, i))) {
      throw std::invalid_argument("CholFactor: diagonal must be strictly positive");
    }
  }
  diagonal_ = lower_.isDiagonal(0.0);
}

CholFactor CholFactor::identity(Eigen::Index d) {
  return CholFactor(Matrix::Identity(d, d));
}

CholFactor CholFactor::from_covariance(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("CholFactor: covariance must be square");
  }
  if (!m.isApprox(m.transpose(), 1e-10)) {
    throw std::invalid_argument("CholFactor: covariance must be symmetric");
  }
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("CholFactor: covariance is not positive definite");
  }
  return CholFactor(Matrix(llt.matrixL()));
}

CholFactor CholFactor::from_lower(Matrix lower) {
  lower.triangularView<Eigen::StrictlyUpper>().setZero();
  return CholFactor(std::move(lower));
}

CholFactor CholFactor::from_variances(const Vector& variances) {
  if ((variances.array() <= 0.0).any()) {
    throw std::invalid_argument("CholFactor: variances must be positive");
  }
  return CholFactor(Matrix(variances.cwiseSqrt().asDiagonal()));
}

Vector CholFactor::apply(const Vector& w) const {
  if (diagonal_) return lower_.diagonal().cwiseProduct(w);
  return lower_.triangularView<Eigen::Lower>() * w;
}

Vector CholFactor::whiten(const Vector& v) const {
  if (diagonal_) return v.cwiseQuotient(lower_.diagonal());
  return lower_.triangularView<Eigen::Lower>().solve(v);
}

double CholFactor::mahalanobis_sq(const Vector& v) const {
  return whiten(v).squaredNorm();
}

double CholFactor::log_det() const {
  return 2.0 * lower_.diagonal().array().log().sum();
}

}  // namespace gmh
