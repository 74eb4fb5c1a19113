#include "gmh/kernels.hpp"

#include <cmath>
#include <limits>

#include "gmh/distributions.hpp"

namespace gmh {

namespace {

std::strong_ordering compare_scalar(double a, double b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

void require_positive_state(const Vector& x, const char* what) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) {
      throw std::invalid_argument(std::string(what) + ": state must be strictly positive");
    }
  }
}

}  // namespace

std::string to_string(Support s) {
  return s == Support::RealLine ? "real" : "positive";
}

// ---------------------------------------------------------------- AR

ArFamily::ArFamily(double rho, Vector center, CholFactor precond)
    : rho_(rho), center_(std::move(center)), precond_(std::move(precond)) {
  if (!(rho_ > 0.0 && rho_ <= 1.0)) throw std::invalid_argument("ArFamily: rho must lie in (0, 1]");
  if (center_.size() != precond_.dim()) {
    throw std::invalid_argument("ArFamily: center and preconditioner dimensions differ");
  }
  drift_ = std::sqrt(1.0 - rho_);
}

ArFamily::ArFamily(double rho, Eigen::Index dim)
    : ArFamily(rho, Vector::Zero(dim), CholFactor::identity(dim)) {}

Vector ArFamily::propose(const Vector& x, const Element& g, RngStream& rng) const {
  if (!std::isfinite(g.log)) throw std::invalid_argument("ArFamily::propose: g must be positive");
  Vector w(x.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.normal();
  const double noise = std::sqrt(rho_) * std::exp(-0.5 * g.log);
  return center_ + drift_ * (x - center_) + noise * precond_.apply(w);
}

Vector ArFamily::propose_reference(const Vector& x, RngStream& rng) const {
  return propose(x, ScalarGroup::identity(), rng);
}

ArFamily::Element ArFamily::mixing_draw(const Vector& x, RngStream& rng) const {
  const double delta = delta_quadform(x, center_, precond_);
  return {sample_log_gamma(0.5 * static_cast<double>(dim()), 0.5 * delta, rng)};
}

MixtureDraw<ArFamily::Element> ArFamily::haar_mixture_propose(const Vector& x, RngStream& rng) const {
  Element g = mixing_draw(x, rng);
  Vector y = propose(x, g, rng);
  return {g, std::move(y)};
}

double ArFamily::log_mu_star(const Vector& x) const {
  return -0.5 * static_cast<double>(dim()) * std::log(precond_.mahalanobis_sq(x - center_));
}

double ArFamily::log_mu(const Vector& x) const {
  const double d = static_cast<double>(dim());
  return -0.5 * (d * std::log(2.0 * M_PI) + precond_.log_det() +
                 precond_.mahalanobis_sq(x - center_));
}

ArFamily::Statistic ArFamily::statistic(const Vector& x) const {
  return {std::log(precond_.mahalanobis_sq(x - center_))};
}

std::strong_ordering ArFamily::compare(const Statistic& a, const Statistic& b) const {
  return compare_scalar(a.log, b.log);
}

// --------------------------------------------------------- Beta-Gamma

BetaGammaFamily::BetaGammaFamily(double k, double rho, Eigen::Index dim, ProductOrder order)
    : k_(k), rho_(rho), dim_(dim), order_(order) {
  if (!(k_ > 0.0)) throw std::invalid_argument("BetaGammaFamily: k must be positive");
  if (!(rho_ > 0.0 && rho_ < 1.0)) throw std::invalid_argument("BetaGammaFamily: rho must lie in (0, 1)");
  if (dim_ < 1) throw std::invalid_argument("BetaGammaFamily: dimension must be >= 1");
}

Vector BetaGammaFamily::propose(const Vector& x, const Element& g, RngStream& rng) const {
  require_positive_state(x, "BetaGammaFamily::propose");
  if (g.log.size() != x.size()) throw std::invalid_argument("BetaGammaFamily::propose: g has wrong length");
  const double a = k_ * rho_;
  const double b = k_ * (1.0 - rho_);
  Vector y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double thin = sample_beta(a, b, rng);
    const double c = std::exp(sample_log_gamma(b, 1.0, rng) - g.log[i]);
    y[i] = thin * x[i] + c;
  }
  return y;
}

Vector BetaGammaFamily::propose_reference(const Vector& x, RngStream& rng) const {
  return propose(x, ProductGroup::identity(dim_), rng);
}

BetaGammaFamily::Element BetaGammaFamily::mixing_draw(const Vector& x, RngStream& rng) const {
  if (x.size() != dim_) throw std::invalid_argument("BetaGammaFamily::mixing_draw: dimension mismatch");
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw DegenerateStateError("BetaGammaFamily::mixing_draw: nonpositive component");
  }
  Element g{Vector(dim_)};
  for (Eigen::Index i = 0; i < dim_; ++i) g.log[i] = sample_log_gamma(k_, x[i], rng);
  return g;
}

MixtureDraw<BetaGammaFamily::Element> BetaGammaFamily::haar_mixture_propose(const Vector& x,
                                                                              RngStream& rng) const {
  Element g = mixing_draw(x, rng);
  Vector y = propose(x, g, rng);
  return {std::move(g), std::move(y)};
}

double BetaGammaFamily::log_mu_star(const Vector& x) const {
  if ((x.array() <= 0.0).any()) throw std::invalid_argument("BetaGammaFamily::log_mu_star: out of support");
  return -x.array().log().sum();
}

double BetaGammaFamily::log_mu(const Vector& x) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += gamma_logpdf(x[i], k_, 1.0);
  return acc;
}

BetaGammaFamily::Statistic BetaGammaFamily::statistic(const Vector& x) const {
  return {x.array().log().matrix()};
}

std::strong_ordering BetaGammaFamily::compare(const Statistic& a, const Statistic& b) const {
  if (order_ == ProductOrder::ModifiedLex) return mlex_compare(a, b);
  return compare_scalar(a.log.sum(), b.log.sum());
}

// --------------------------------------------------------- Chi-squared

ChiSquaredFamily::ChiSquaredFamily(double rho, int dof, Eigen::Index dim)
    : rho_(rho), dof_(dof), dim_(dim) {
  if (!(rho_ > 0.0 && rho_ < 1.0)) throw std::invalid_argument("ChiSquaredFamily: rho must lie in (0, 1)");
  if (dof_ < 1) throw std::invalid_argument("ChiSquaredFamily: dof must be >= 1");
  if (dim_ < 1) throw std::invalid_argument("ChiSquaredFamily: dimension must be >= 1");
}

Vector ChiSquaredFamily::propose(const Vector& x, const Element& g, RngStream& rng) const {
  require_positive_state(x, "ChiSquaredFamily::propose");
  if (!std::isfinite(g.log)) throw std::invalid_argument("ChiSquaredFamily::propose: g must be positive");
  const double step = rho_ * std::exp(-g.log);
  const double root_step = std::sqrt(step);
  Vector y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double head = std::sqrt((1.0 - rho_) * x[i]) + root_step * rng.normal();
    double acc = head * head;
    for (int l = 1; l < dof_; ++l) {
      const double w = rng.normal();
      acc += step * w * w;
    }
    y[i] = acc;
  }
  return y;
}

Vector ChiSquaredFamily::propose_reference(const Vector& x, RngStream& rng) const {
  return propose(x, ScalarGroup::identity(), rng);
}

ChiSquaredFamily::Element ChiSquaredFamily::mixing_draw(const Vector& x, RngStream& rng) const {
  if (x.size() != dim_) throw std::invalid_argument("ChiSquaredFamily::mixing_draw: dimension mismatch");
  if ((x.array() <= 0.0).any()) throw DegenerateStateError("ChiSquaredFamily::mixing_draw: nonpositive component");
  const double shape = 0.5 * static_cast<double>(dof_) * static_cast<double>(dim_);
  return {sample_log_gamma(shape, 0.5 * x.sum(), rng)};
}

MixtureDraw<ChiSquaredFamily::Element> ChiSquaredFamily::haar_mixture_propose(const Vector& x,
                                                                                RngStream& rng) const {
  Element g = mixing_draw(x, rng);
  Vector y = propose(x, g, rng);
  return {g, std::move(y)};
}

double ChiSquaredFamily::log_mu_star(const Vector& x) const {
  if ((x.array() <= 0.0).any()) throw std::invalid_argument("ChiSquaredFamily::log_mu_star: out of support");
  const double half_dof = 0.5 * static_cast<double>(dof_);
  const double coord = half_dof == 1.0 ? 0.0 : (half_dof - 1.0) * x.array().log().sum();
  return coord - half_dof * static_cast<double>(dim_) * std::log(x.sum());
}

double ChiSquaredFamily::log_mu(const Vector& x) const {
  const double half_dof = 0.5 * static_cast<double>(dof_);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += gamma_logpdf(x[i], half_dof, 0.5);
  return acc;
}

ChiSquaredFamily::Statistic ChiSquaredFamily::statistic(const Vector& x) const {
  return {std::log(x.sum())};
}

std::strong_ordering ChiSquaredFamily::compare(const Statistic& a, const Statistic& b) const {
  return compare_scalar(a.log, b.log);
}

// ------------------------------------------------------------ variant

Eigen::Index dim(const KernelFamily& fam) {
  return std::visit([](const auto& f) { return f.dim(); }, fam);
}

Support support(const KernelFamily& fam) {
  return std::visit([](const auto& f) { return f.support(); }, fam);
}

std::string describe(const KernelFamily& fam) {
  return std::visit(
      [](const auto& f) -> std::string {
        using F = std::decay_t<decltype(f)>;
        std::string s = std::string(F::name()) + "(rho=" + std::to_string(f.rho());
        if constexpr (std::is_same_v<F, BetaGammaFamily>) {
          s += ",k=" + std::to_string(f.k());
          s += f.order() == ProductOrder::ModifiedLex ? ",order=mlex" : ",order=product";
        } else if constexpr (std::is_same_v<F, ChiSquaredFamily>) {
          s += ",L=" + std::to_string(f.dof());
        }
        return s + ",d=" + std::to_string(f.dim()) + ")";
      },
      fam);
}

static_assert(HaarFamily<ArFamily>);
static_assert(HaarFamily<BetaGammaFamily>);
static_assert(HaarFamily<ChiSquaredFamily>);

}  // namespace gmh
