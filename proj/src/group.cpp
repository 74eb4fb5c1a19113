#include "gmh/group.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gmh/linalg.hpp"

namespace gmh {

namespace {

void require_positive(std::span<const double> x, const char* what) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) {
      throw std::invalid_argument(std::string(what) + ": component " + std::to_string(i) +
                                  " is not strictly positive");
    }
  }
}

void require_positive(const Vector& x, const char* what) {
  require_positive(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), what);
}

}  // namespace

double LogScalar::value() const { return std::exp(log); }

Vector LogVector::value() const { return log.array().exp().matrix(); }

std::strong_ordering mlex_compare(const LogVector& a, const LogVector& b) {
  if (a.log.size() != b.log.size()) {
    throw std::invalid_argument("mlex_compare: length mismatch");
  }
  const Eigen::Index d = a.log.size();
  // Tail sums s_i = log x_i + ... + log x_d, accumulated from the back so
  // both operands see the same summation order.
  std::vector<double> sa(static_cast<std::size_t>(d));
  std::vector<double> sb(static_cast<std::size_t>(d));
  double acc_a = 0.0;
  double acc_b = 0.0;
  for (Eigen::Index i = d - 1; i >= 0; --i) {
    acc_a += a.log[i];
    acc_b += b.log[i];
    sa[static_cast<std::size_t>(i)] = acc_a;
    sb[static_cast<std::size_t>(i)] = acc_b;
  }
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (sa[i] < sb[i]) return std::strong_ordering::less;
    if (sb[i] < sa[i]) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

bool mlex_leq(const LogVector& a, const LogVector& b) {
  return mlex_compare(a, b) != std::strong_ordering::greater;
}

bool mlex_leq(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("mlex_leq: length mismatch");
  }
  require_positive(a, "mlex_leq");
  require_positive(b, "mlex_leq");
  LogVector la{Vector(static_cast<Eigen::Index>(a.size()))};
  LogVector lb{Vector(static_cast<Eigen::Index>(b.size()))};
  for (std::size_t i = 0; i < a.size(); ++i) {
    la.log[static_cast<Eigen::Index>(i)] = std::log(a[i]);
    lb.log[static_cast<Eigen::Index>(i)] = std::log(b[i]);
  }
  return mlex_leq(la, lb);
}

ScalarGroup::Element ScalarGroup::from_value(double g) {
  if (!(g > 0.0)) throw std::invalid_argument("ScalarGroup: element must be positive");
  return {std::log(g)};
}

ProductGroup::Element ProductGroup::compose(const Element& g, const Element& h) {
  if (g.log.size() != h.log.size()) {
    throw std::invalid_argument("ProductGroup: length mismatch");
  }
  return {g.log + h.log};
}

ProductGroup::Element ProductGroup::from_value(const Vector& g) {
  require_positive(g, "ProductGroup");
  return {g.array().log().matrix()};
}

Vector act_centered(const LogScalar& g, const Vector& x, const Vector& x0) {
  return x0 + std::exp(0.5 * g.log) * (x - x0);
}

Vector act_scale(const LogScalar& g, const Vector& x) { return std::exp(g.log) * x; }

Vector act_componentwise(const LogVector& g, const Vector& x) {
  if (g.log.size() != x.size()) {
    throw std::invalid_argument("act_componentwise: length mismatch");
  }
  return x.cwiseProduct(g.value());
}

double delta_quadform(const Vector& x, const Vector& x0, const CholFactor& m) {
  if (x.size() != x0.size() || x.size() != m.dim()) {
    throw std::invalid_argument("delta_quadform: dimension mismatch");
  }
  const double q = m.mahalanobis_sq(x - x0);
  if (!(q > 0.0)) {
    throw DegenerateStateError("delta_quadform: state coincides with the center");
  }
  return q;
}

LogScalar log_delta_quadform(const Vector& x, const Vector& x0, const CholFactor& m) {
  return {std::log(delta_quadform(x, x0, m))};
}

double delta_sum(std::span<const double> x) {
  require_positive(x, "delta_sum");
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

LogScalar log_delta_sum(const Vector& x) {
  return {std::log(delta_sum(std::span<const double>(x.data(), static_cast<std::size_t>(x.size()))))};
}

double delta_prod(std::span<const double> x) {
  require_positive(x, "delta_prod");
  double p = 1.0;
  for (double v : x) p *= v;
  return p;
}

LogScalar log_delta_prod(const Vector& x) {
  require_positive(x, "log_delta_prod");
  return {x.array().log().sum()};
}

LogVector log_delta_identity(const Vector& x) {
  require_positive(x, "log_delta_identity");
  return {x.array().log().matrix()};
}

}  // namespace gmh
