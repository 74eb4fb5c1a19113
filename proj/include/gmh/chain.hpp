#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gmh/samplers.hpp"

namespace gmh {

struct StepRecord {
  double log_target = 0.0;
  bool accepted = false;
  /// 0 for non-guided kernels.
  int direction = 0;
  int inner_tries = 1;
};

struct ChainTrace {
  std::vector<StepRecord> steps;   ///< one per measured iteration
  std::vector<Vector> states;      ///< thinned measured states
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::string kernel;
  std::string target;
  double wall_seconds = 0.0;       ///< measured phase only
  int gradient_warnings = 0;
  bool complete = true;
  std::string error;               ///< set when a step aborted the run
  Vector final_state;
};

/// Called before every kernel step, e.g. to update Gibbs blocks that the
/// target depends on. The chain refreshes its density cache afterwards.
using GibbsUpdate = std::function<void(const Vector& x, RngStream& rng)>;

struct ChainOptions {
  long iters = 0;
  long burnin = 0;
  long thin = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  bool record_states = true;
  Vector initial;
  Direction initial_direction = Direction::Plus;
  GibbsUpdate gibbs;
};

/// Runs `iters` transitions, discarding the first `burnin`. Deterministic in
/// (kernel, target, options). Step errors stop the run and return the
/// partial trace with `complete == false`.
ChainTrace run_chain(const Kernel& kernel, const TargetModel& target, const ChainOptions& opts);

/// Per-step log-targets as a series for the diagnostics.
std::vector<double> log_target_series(const ChainTrace& trace);
/// Coordinate `i` of the recorded states.
std::vector<double> state_series(const ChainTrace& trace, Eigen::Index i);

/// CSV with header iter,log_target,accepted,direction,inner_tries and, when
/// states were recorded, x1..xd on the thinned rows (empty otherwise).
void write_trace_csv(const ChainTrace& trace, std::ostream& out, long thin = 1);
void write_trace_csv(const ChainTrace& trace, const std::filesystem::path& path, long thin = 1);

}  // namespace gmh
