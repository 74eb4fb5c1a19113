#include "gmh/chain.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace gmh {

ChainTrace run_chain(const Kernel& kernel, const TargetModel& target, const ChainOptions& opts) {
  if (opts.iters <= opts.burnin || opts.burnin < 0) {
    throw std::invalid_argument("run_chain: require iters > burnin >= 0");
  }
  if (opts.thin < 1) throw std::invalid_argument("run_chain: thin must be >= 1");
  if (opts.initial.size() != target.dim) throw std::invalid_argument("run_chain: initial state has wrong dimension");
  if (proposal_support(kernel) == Support::PositiveOrthant && target.support != Support::PositiveOrthant) {
    throw std::invalid_argument("run_chain: positive-orthant kernel needs a positive-orthant target");
  }

  ChainTrace trace;
  trace.seed = opts.seed;
  trace.stream_id = opts.stream_id;
  trace.kernel = describe(kernel);
  trace.target = target.name;
  const long measured = opts.iters - opts.burnin;
  trace.steps.reserve(static_cast<std::size_t>(measured));

  RngStream rng(opts.seed, opts.stream_id);
  const bool guided = is_guided(kernel);
  ChainState s;
  s.x = opts.initial;
  s.z = opts.initial_direction;
  refresh_state(s, kernel, target);

  using Clock = std::chrono::steady_clock;
  Clock::time_point start = Clock::now();
  try {
    for (long it = 0; it < opts.iters; ++it) {
      if (it == opts.burnin) start = Clock::now();
      if (opts.gibbs) {
        opts.gibbs(s.x, rng);
        refresh_state(s, kernel, target);
      }
      const StepOutcome out = step(s, kernel, target, rng);
      trace.gradient_warnings += out.gradient_warnings;
      if (it < opts.burnin) continue;
      trace.steps.push_back({s.log_target, out.accepted, guided ? static_cast<int>(s.z) : 0, out.inner_tries});
      if (opts.record_states && (it - opts.burnin) % opts.thin == 0) trace.states.push_back(s.x);
    }
  } catch (const std::exception& e) {
    trace.complete = false;
    trace.error = e.what();
  }
  trace.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  trace.final_state = s.x;
  return trace;
}

std::vector<double> log_target_series(const ChainTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.steps.size());
  for (const auto& r : trace.steps) out.push_back(r.log_target);
  return out;
}

std::vector<double> state_series(const ChainTrace& trace, Eigen::Index i) {
  std::vector<double> out;
  out.reserve(trace.states.size());
  for (const auto& x : trace.states) out.push_back(x[i]);
  return out;
}

void write_trace_csv(const ChainTrace& trace, std::ostream& out, long thin) {
  const Eigen::Index d = trace.states.empty() ? 0 : trace.states.front().size();
  out << "iter,log_target,accepted,direction,inner_tries";
  for (Eigen::Index j = 0; j < d; ++j) out << ",x" << (j + 1);
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& r = trace.steps[i];
    out << i << ',' << r.log_target << ',' << (r.accepted ? 1 : 0) << ',' << r.direction << ','
        << r.inner_tries;
    if (d > 0) {
      const bool has_state = static_cast<long>(i) % thin == 0 && i / static_cast<std::size_t>(thin) < trace.states.size();
      for (Eigen::Index j = 0; j < d; ++j) {
        out << ',';
        if (has_state) out << trace.states[i / static_cast<std::size_t>(thin)][j];
      }
    }
    out << '\n';
  }
}

void write_trace_csv(const ChainTrace& trace, const std::filesystem::path& path, long thin) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_trace_csv(trace, out, thin);
}

}  // namespace gmh
