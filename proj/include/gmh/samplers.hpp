#pragma once

// Accept/reject machinery. Every step consumes exactly one uniform for the
// accept decision, so seeded runs of different kernels stay aligned.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "gmh/kernels.hpp"
#include "gmh/rng.hpp"
#include "gmh/targets.hpp"
#include "gmh/types.hpp"

namespace gmh {

/// Current point of a chain with cached densities. `log_pi` is the log of
/// the density used in the acceptance ratio (target over the kernel's
/// reference measure); `log_target` is the Lebesgue log-density.
struct ChainState {
  Vector x;
  double log_target = 0.0;
  double log_pi = 0.0;
  Direction z = Direction::Plus;
  /// Gradient at x, cached by Langevin steps.
  std::optional<Vector> gradient;
};

struct StepOutcome {
  bool accepted = false;
  /// Proposals drawn in the directional loop; 1 for non-guided kernels.
  int inner_tries = 1;
  /// Gradient evaluations that returned non-finite values.
  int gradient_warnings = 0;
};

/// Accept when log(u) <= log_pi_y - log_pi_x. Non-finite log_pi_y rejects.
/// The uniform is always drawn.
bool metropolis_accept(double log_pi_x, double log_pi_y, RngStream& rng);

/// Metropolis step over an arbitrary proposal and log pi. `propose` is
/// called as propose(x, rng) -> Vector, `log_pi` as log_pi(y) -> double.
template <class Propose, class LogPi>
StepOutcome metropolis_step(Vector& x, double& log_pi_x, Propose&& propose, LogPi&& log_pi,
                            RngStream& rng) {
  Vector y = propose(x, rng);
  const double log_pi_y = log_pi(y);
  StepOutcome out;
  out.accepted = metropolis_accept(log_pi_x, log_pi_y, rng);
  if (out.accepted) {
    x = std::move(y);
    log_pi_x = log_pi_y;
  }
  return out;
}

namespace detail {

// log pi for a proposed point, given the reference log-density callback.
// Off-support points map to -inf without evaluating the reference.
template <class RefFn>
std::pair<double, double> log_target_and_pi(const TargetModel& target, const Vector& y, RefFn&& ref) {
  const double lt = target.log_target(y);
  if (!std::isfinite(lt)) return {lt, -std::numeric_limits<double>::infinity()};
  return {lt, lt - ref(y)};
}

}  // namespace detail

/// Initializes the cached densities of `s` for a kernel with the given
/// reference log-density (0 for Lebesgue).
template <class RefFn>
void refresh_state(ChainState& s, const TargetModel& target, RefFn&& ref) {
  s.log_target = target.log_target(s.x);
  s.log_pi = std::isfinite(s.log_target) ? s.log_target - ref(s.x)
                                         : -std::numeric_limits<double>::infinity();
  s.gradient.reset();
}

/// Plain Metropolis kernel of (Q, Pi): pi = dPi/dmu.
template <HaarFamily F>
StepOutcome metropolis_family_step(ChainState& s, const F& fam, const TargetModel& target, RngStream& rng) {
  Vector y = fam.propose_reference(s.x, rng);
  auto [lt, lp] = detail::log_target_and_pi(target, y, [&](const Vector& v) { return fam.log_mu(v); });
  const bool acc = metropolis_accept(s.log_pi, lp, rng);
  StepOutcome out;
  out.accepted = acc;
  if (acc) {
    s.x = std::move(y);
    s.log_target = lt;
    s.log_pi = lp;
  }
  return out;
}

/// Metropolis-Haar kernel: g ~ K(x, dg), y ~ Q_g(x, dy), accept with
/// pi = dPi/dmu*.
template <HaarFamily F>
StepOutcome metropolis_haar_step(ChainState& s, const F& fam, const TargetModel& target, RngStream& rng) {
  auto draw = fam.haar_mixture_propose(s.x, rng);
  auto [lt, lp] =
      detail::log_target_and_pi(target, draw.y, [&](const Vector& v) { return fam.log_mu_star(v); });
  const bool acc = metropolis_accept(s.log_pi, lp, rng);
  StepOutcome out;
  out.accepted = acc;
  if (acc) {
    s.x = std::move(draw.y);
    s.log_target = lt;
    s.log_pi = lp;
  }
  return out;
}

inline constexpr int kDefaultMaxTries = 1000;

/// Delta-guided Metropolis-Haar kernel. Redraws (g, y) until Delta y lies
/// strictly on side z of Delta x, then accepts with pi = dPi/dmu*. Accepting
/// keeps z; rejecting keeps x and flips z. Throws PathologicalProposalError
/// after `max_tries` draws without a strictly directed proposal.
template <HaarFamily F>
StepOutcome guided_step(ChainState& s, const F& fam, const TargetModel& target, int max_tries,
                        RngStream& rng) {
  if (max_tries < 1) throw std::invalid_argument("guided_step: max_tries must be >= 1");
  const auto stat_x = fam.statistic(s.x);
  const auto wanted = s.z == Direction::Plus ? std::strong_ordering::greater : std::strong_ordering::less;
  StepOutcome out;
  out.inner_tries = 0;
  for (;;) {
    if (out.inner_tries == max_tries) {
      throw PathologicalProposalError("guided_step: no proposal on the requested side after " +
                                      std::to_string(max_tries) + " tries");
    }
    ++out.inner_tries;
    auto draw = fam.haar_mixture_propose(s.x, rng);
    if (fam.compare(fam.statistic(draw.y), stat_x) != wanted) continue;

    auto [lt, lp] =
        detail::log_target_and_pi(target, draw.y, [&](const Vector& v) { return fam.log_mu_star(v); });
    out.accepted = metropolis_accept(s.log_pi, lp, rng);
    if (out.accepted) {
      s.x = std::move(draw.y);
      s.log_target = lt;
      s.log_pi = lp;
    } else {
      s.z = flip(s.z);
    }
    return out;
  }
}

/// Gaussian random-walk Metropolis: y = x + scale * L w.
StepOutcome rwm_step(ChainState& s, double scale, const CholFactor* precond, const TargetModel& target,
                     RngStream& rng);

/// Metropolis-adjusted Langevin: y = x + (h^2 / 2) grad log pi(x) + h w.
/// A non-finite gradient at the proposal rejects and counts a warning.
StepOutcome mala_step(ChainState& s, double step, const TargetModel& target, RngStream& rng);

/// Mean of the Langevin proposal, exposed for testing.
Vector mala_proposal_mean(const Vector& x, const Vector& grad, double step);

// ------------------------------------------------------------ kernels

struct RandomWalkKernel {
  double scale = 1.0;
  std::optional<CholFactor> precond;
};

struct LangevinKernel {
  double step = 0.1;
};

/// Metropolis kernel of (Q, Pi) for a family's base proposal Q.
struct MetropolisKernel {
  KernelFamily family;
};

struct MetropolisHaarKernel {
  KernelFamily family;
};

struct GuidedKernel {
  KernelFamily family;
  int max_tries = kDefaultMaxTries;
};

using Kernel = std::variant<RandomWalkKernel, LangevinKernel, MetropolisKernel, MetropolisHaarKernel, GuidedKernel>;

std::string describe(const Kernel& k);
bool is_guided(const Kernel& k);
/// Support the kernel's proposals live on.
Support proposal_support(const Kernel& k);

/// Recomputes the cached densities of `s` for kernel `k`.
void refresh_state(ChainState& s, const Kernel& k, const TargetModel& target);

/// One transition of kernel `k`. The cache in `s` must be current.
StepOutcome step(ChainState& s, const Kernel& k, const TargetModel& target, RngStream& rng);

}  // namespace gmh
