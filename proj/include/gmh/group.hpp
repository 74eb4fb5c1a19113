#pragma once

// Totally ordered groups acting on state space, and the statistics that
// order proposals into a "+" or "-" direction.
//
// Positive group elements are held in log space: the multiplicative group
// (R+, x) becomes (R, +) and (R+^d, x) becomes (R^d, +). Products over up to
// ~60 coordinates then never overflow, and the order is unchanged because
// log is monotone.

#include <compare>
#include <span>

#include "gmh/types.hpp"

namespace gmh {

class CholFactor;

enum class Direction : int { Minus = -1, Plus = 1 };

constexpr Direction flip(Direction z) noexcept {
  return z == Direction::Plus ? Direction::Minus : Direction::Plus;
}

constexpr char direction_symbol(Direction z) noexcept {
  return z == Direction::Plus ? '+' : '-';
}

/// Element of (R+, x) stored as its logarithm.
struct LogScalar {
  double log = 0.0;

  double value() const;
  friend auto operator<=>(const LogScalar&, const LogScalar&) = default;
};

/// Element of (R+^d, x) stored componentwise as logarithms.
struct LogVector {
  Vector log;

  Vector value() const;
  std::size_t size() const { return static_cast<std::size_t>(log.size()); }
};

/// Modified lexicographic order on R+^d: compares the tail partial products
/// s(x)_i = x_i * ... * x_d from i = 1 onwards. Ties are bit-exact equality.
std::strong_ordering mlex_compare(const LogVector& a, const LogVector& b);

/// Strict-weak shorthand over mlex_compare (reflexive: a <= a).
bool mlex_leq(const LogVector& a, const LogVector& b);

/// mlex_leq on positive vectors given in natural scale.
/// Throws std::invalid_argument on length mismatch or a nonpositive entry.
bool mlex_leq(std::span<const double> a, std::span<const double> b);

// The two groups used by the kernel families. Both are abelian, so left and
// right translation-invariance of the order coincide.

struct ScalarGroup {
  using Element = LogScalar;

  static Element identity() { return {}; }
  static Element compose(const Element& g, const Element& h) { return {g.log + h.log}; }
  static Element inverse(const Element& g) { return {-g.log}; }
  static bool leq(const Element& a, const Element& b) { return a.log <= b.log; }
  static Element from_value(double g);
};

struct ProductGroup {
  using Element = LogVector;

  static Element identity(Eigen::Index d) { return {Vector::Zero(d)}; }
  static Element compose(const Element& g, const Element& h);
  static Element inverse(const Element& g) { return {-g.log}; }
  static bool leq(const Element& a, const Element& b) { return mlex_leq(a, b); }
  static Element from_value(const Vector& g);
};

// Group actions on the state space.

/// (g, x) -> x0 + g^{1/2} (x - x0): scaling about a center. The quadratic-form
/// statistic centered at x0 is a G-statistic under this action.
Vector act_centered(const LogScalar& g, const Vector& x, const Vector& x0);

/// (g, x) -> (g x_1, ..., g x_d).
Vector act_scale(const LogScalar& g, const Vector& x);

/// (g, x) -> (g_1 x_1, ..., g_d x_d).
Vector act_componentwise(const LogVector& g, const Vector& x);

// Statistics. Natural-scale versions validate and return the value; log_*
// versions are what the samplers use for direction tests.

/// (x - x0)^T M^{-1} (x - x0) with M = L L^T.
/// Throws DegenerateStateError when the result is zero (x == x0).
double delta_quadform(const Vector& x, const Vector& x0, const CholFactor& m);
LogScalar log_delta_quadform(const Vector& x, const Vector& x0, const CholFactor& m);

/// x_1 + ... + x_d over a positive vector.
double delta_sum(std::span<const double> x);
LogScalar log_delta_sum(const Vector& x);

/// x_1 * ... * x_d over a positive vector.
double delta_prod(std::span<const double> x);
LogScalar log_delta_prod(const Vector& x);

/// Identity statistic for the product group: Delta x = x.
LogVector log_delta_identity(const Vector& x);

}  // namespace gmh
