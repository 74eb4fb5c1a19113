#include "gmh/samplers.hpp"

#include <cmath>

namespace gmh {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double zero_reference(const Vector&) { return 0.0; }

double langevin_log_q(const Vector& to, const Vector& from, const Vector& grad_from, double step) {
  return -0.5 * (to - mala_proposal_mean(from, grad_from, step)).squaredNorm() / (step * step);
}

}  // namespace

bool metropolis_accept(double log_pi_x, double log_pi_y, RngStream& rng) {
  const double u = rng.uniform();
  if (!std::isfinite(log_pi_y)) return false;
  if (!std::isfinite(log_pi_x)) return true;
  return std::log(u) <= log_pi_y - log_pi_x;
}

StepOutcome rwm_step(ChainState& s, double scale, const CholFactor* precond, const TargetModel& target,
                     RngStream& rng) {
  if (!(scale > 0.0)) throw std::invalid_argument("rwm_step: scale must be positive");
  auto propose = [&](const Vector& x, RngStream& r) -> Vector {
    Vector w(x.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = r.normal();
    return x + scale * (precond ? precond->apply(w) : w);
  };
  double lp = s.log_pi;
  Vector x = s.x;
  StepOutcome out = metropolis_step(x, lp, propose, [&](const Vector& y) { return target.log_target(y); }, rng);
  if (out.accepted) {
    s.x = std::move(x);
    s.log_pi = lp;
    s.log_target = lp;
  }
  return out;
}

Vector mala_proposal_mean(const Vector& x, const Vector& grad, double step) {
  return x + 0.5 * step * step * grad;
}

StepOutcome mala_step(ChainState& s, double step, const TargetModel& target, RngStream& rng) {
  if (!target.has_gradient()) throw std::invalid_argument("mala_step: target has no gradient");
  if (!(step > 0.0)) throw std::invalid_argument("mala_step: step must be positive");
  StepOutcome out;
  if (!s.gradient) s.gradient = target.gradient(s.x);
  const Vector& grad_x = *s.gradient;
  if (!grad_x.allFinite()) {
    ++out.gradient_warnings;
    rng.uniform();
    return out;
  }
  Vector w(s.x.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.normal();
  Vector y = mala_proposal_mean(s.x, grad_x, step) + step * w;

  const double lt_y = target.log_target(y);
  Vector grad_y;
  double log_ratio = kNegInf;
  if (std::isfinite(lt_y)) {
    grad_y = target.gradient(y);
    if (grad_y.allFinite()) {
      log_ratio = lt_y - s.log_target + langevin_log_q(s.x, y, grad_y, step) -
                  langevin_log_q(y, s.x, grad_x, step);
    } else {
      ++out.gradient_warnings;
    }
  }
  out.accepted = metropolis_accept(0.0, log_ratio, rng);
  if (out.accepted) {
    s.x = std::move(y);
    s.log_target = lt_y;
    s.log_pi = lt_y;
    s.gradient = std::move(grad_y);
  }
  return out;
}

// ------------------------------------------------------------ kernels

std::string describe(const Kernel& k) {
  return std::visit(
      [](const auto& kern) -> std::string {
        using K = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<K, RandomWalkKernel>) {
          return "rwm(scale=" + std::to_string(kern.scale) + (kern.precond ? ",precond" : "") + ")";
        } else if constexpr (std::is_same_v<K, LangevinKernel>) {
          return "mala(step=" + std::to_string(kern.step) + ")";
        } else if constexpr (std::is_same_v<K, MetropolisKernel>) {
          return "metropolis/" + describe(kern.family);
        } else if constexpr (std::is_same_v<K, MetropolisHaarKernel>) {
          return "metropolis-haar/" + describe(kern.family);
        } else {
          return "guided/" + describe(kern.family) + "[max_tries=" + std::to_string(kern.max_tries) + "]";
        }
      },
      k);
}

bool is_guided(const Kernel& k) { return std::holds_alternative<GuidedKernel>(k); }

Support proposal_support(const Kernel& k) {
  return std::visit(
      [](const auto& kern) -> Support {
        using K = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<K, RandomWalkKernel> || std::is_same_v<K, LangevinKernel>) {
          return Support::RealLine;
        } else {
          return support(kern.family);
        }
      },
      k);
}

void refresh_state(ChainState& s, const Kernel& k, const TargetModel& target) {
  std::visit(
      [&](const auto& kern) {
        using K = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<K, RandomWalkKernel> || std::is_same_v<K, LangevinKernel>) {
          refresh_state(s, target, zero_reference);
        } else if constexpr (std::is_same_v<K, MetropolisKernel>) {
          std::visit([&](const auto& fam) { refresh_state(s, target, [&](const Vector& v) { return fam.log_mu(v); }); },
                     kern.family);
        } else {
          std::visit(
              [&](const auto& fam) { refresh_state(s, target, [&](const Vector& v) { return fam.log_mu_star(v); }); },
              kern.family);
        }
      },
      k);
}

StepOutcome step(ChainState& s, const Kernel& k, const TargetModel& target, RngStream& rng) {
  return std::visit(
      [&](const auto& kern) -> StepOutcome {
        using K = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<K, RandomWalkKernel>) {
          return rwm_step(s, kern.scale, kern.precond ? &*kern.precond : nullptr, target, rng);
        } else if constexpr (std::is_same_v<K, LangevinKernel>) {
          return mala_step(s, kern.step, target, rng);
        } else if constexpr (std::is_same_v<K, MetropolisKernel>) {
          return std::visit([&](const auto& fam) { return metropolis_family_step(s, fam, target, rng); },
                            kern.family);
        } else if constexpr (std::is_same_v<K, MetropolisHaarKernel>) {
          return std::visit([&](const auto& fam) { return metropolis_haar_step(s, fam, target, rng); },
                            kern.family);
        } else {
          return std::visit([&](const auto& fam) { return guided_step(s, fam, target, kern.max_tries, rng); },
                            kern.family);
        }
      },
      k);
}

}  // namespace gmh
