#pragma once

// The three reversible proposal families, their group translates Q_g, the
// Haar mixing kernels K(x, dg) and the log-densities of the reference
// measures mu (for plain Metropolis) and mu* (for Metropolis-Haar).
//
// Every family exposes the same surface, captured by the HaarFamily concept,
// so the samplers are written once as templates.

#include <compare>
#include <concepts>
#include <string>
#include <variant>

#include "gmh/group.hpp"
#include "gmh/linalg.hpp"
#include "gmh/rng.hpp"
#include "gmh/types.hpp"

namespace gmh {

enum class Support { RealLine, PositiveOrthant };

std::string to_string(Support s);

template <class Element>
struct MixtureDraw {
  Element g;
  Vector y;
};

/// Autoregressive (pCN) family on R^d acted on by (R+, x) through
/// x -> x0 + g^{1/2}(x - x0); Delta x = (x - x0)^T M^{-1} (x - x0).
class ArFamily {
 public:
  using Element = LogScalar;
  using Statistic = LogScalar;

  /// rho in (0, 1].
  ArFamily(double rho, Vector center, CholFactor precond);
  /// Identity preconditioner and origin center.
  ArFamily(double rho, Eigen::Index dim);

  static constexpr const char* name() { return "ar"; }
  Eigen::Index dim() const { return center_.size(); }
  Support support() const { return Support::RealLine; }
  double rho() const { return rho_; }
  const Vector& center() const { return center_; }
  const CholFactor& precond() const { return precond_; }

  /// Q_g(x, .) = N_d(x0 + (1 - rho)^{1/2} (x - x0), g^{-1} rho M)
  Vector propose(const Vector& x, const Element& g, RngStream& rng) const;
  /// Q(x, .), i.e. Q_g at the identity.
  Vector propose_reference(const Vector& x, RngStream& rng) const;
  /// g ~ G(d/2, Delta x / 2)
  Element mixing_draw(const Vector& x, RngStream& rng) const;
  MixtureDraw<Element> haar_mixture_propose(const Vector& x, RngStream& rng) const;

  /// -(d/2) log Delta x
  double log_mu_star(const Vector& x) const;
  /// log N_d(x; x0, M)
  double log_mu(const Vector& x) const;

  Statistic statistic(const Vector& x) const;
  std::strong_ordering compare(const Statistic& a, const Statistic& b) const;

 private:
  double rho_;
  Vector center_;
  CholFactor precond_;
  double drift_;
};

/// Order used for direction tests on the Beta-Gamma family's vector group.
enum class ProductOrder {
  /// Scalar Delta' x = x_1 * ... * x_d with the usual order.
  Product,
  /// Delta x = x under the modified lexicographic order.
  ModifiedLex,
};

/// Multivariate Beta-Gamma family on R+^d acted on componentwise by
/// (R+^d, x); Delta x = x.
class BetaGammaFamily {
 public:
  using Element = LogVector;
  using Statistic = LogVector;

  /// k > 0, rho in (0, 1).
  BetaGammaFamily(double k, double rho, Eigen::Index dim, ProductOrder order = ProductOrder::Product);

  static constexpr const char* name() { return "betagamma"; }
  Eigen::Index dim() const { return dim_; }
  Support support() const { return Support::PositiveOrthant; }
  double k() const { return k_; }
  double rho() const { return rho_; }
  ProductOrder order() const { return order_; }

  /// y_i = b_i x_i + c_i, b_i ~ Be(k rho, k (1 - rho)), c_i ~ G(k (1 - rho), g_i)
  Vector propose(const Vector& x, const Element& g, RngStream& rng) const;
  Vector propose_reference(const Vector& x, RngStream& rng) const;
  /// g_i ~ G(k, x_i) independently
  Element mixing_draw(const Vector& x, RngStream& rng) const;
  MixtureDraw<Element> haar_mixture_propose(const Vector& x, RngStream& rng) const;

  /// -sum log x_i
  double log_mu_star(const Vector& x) const;
  /// sum log G(x_i; k, 1)
  double log_mu(const Vector& x) const;

  Statistic statistic(const Vector& x) const;
  std::strong_ordering compare(const Statistic& a, const Statistic& b) const;

 private:
  double k_;
  double rho_;
  Eigen::Index dim_;
  ProductOrder order_;
};

/// Multivariate Chi-squared family on R+^d acted on by (R+, x) through
/// x -> g x; Delta x = x_1 + ... + x_d.
class ChiSquaredFamily {
 public:
  using Element = LogScalar;
  using Statistic = LogScalar;

  /// rho in (0, 1), dof L >= 1.
  ChiSquaredFamily(double rho, int dof, Eigen::Index dim);

  static constexpr const char* name() { return "chisq"; }
  Eigen::Index dim() const { return dim_; }
  Support support() const { return Support::PositiveOrthant; }
  double rho() const { return rho_; }
  int dof() const { return dof_; }

  /// y_i = [((1 - rho) x_i)^{1/2} + (rho/g)^{1/2} w_1]^2 + sum_{l>=2} (rho/g) w_l^2
  Vector propose(const Vector& x, const Element& g, RngStream& rng) const;
  Vector propose_reference(const Vector& x, RngStream& rng) const;
  /// g ~ G(L d / 2, Delta x / 2)
  Element mixing_draw(const Vector& x, RngStream& rng) const;
  MixtureDraw<Element> haar_mixture_propose(const Vector& x, RngStream& rng) const;

  /// (L/2 - 1) sum log x_i - (d L / 2) log Delta x
  double log_mu_star(const Vector& x) const;
  /// sum log G(x_i; L/2, 1/2)
  double log_mu(const Vector& x) const;

  Statistic statistic(const Vector& x) const;
  std::strong_ordering compare(const Statistic& a, const Statistic& b) const;

 private:
  double rho_;
  int dof_;
  Eigen::Index dim_;
};

template <class F>
concept HaarFamily = requires(const F& f, const Vector& x, RngStream& rng,
                              const typename F::Element& g, const typename F::Statistic& s) {
  { f.dim() } -> std::convertible_to<Eigen::Index>;
  { f.support() } -> std::same_as<Support>;
  { f.propose(x, g, rng) } -> std::same_as<Vector>;
  { f.propose_reference(x, rng) } -> std::same_as<Vector>;
  { f.mixing_draw(x, rng) } -> std::same_as<typename F::Element>;
  { f.log_mu_star(x) } -> std::same_as<double>;
  { f.log_mu(x) } -> std::same_as<double>;
  { f.statistic(x) } -> std::same_as<typename F::Statistic>;
  { f.compare(s, s) } -> std::same_as<std::strong_ordering>;
};

using KernelFamily = std::variant<ArFamily, BetaGammaFamily, ChiSquaredFamily>;

Eigen::Index dim(const KernelFamily& fam);
Support support(const KernelFamily& fam);
std::string describe(const KernelFamily& fam);

}  // namespace gmh
