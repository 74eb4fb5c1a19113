#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gmh/bench/config.hpp"
#include "gmh/chain.hpp"
#include "gmh/samplers.hpp"
#include "gmh/targets.hpp"

namespace gmh::bench {

/// A target ready to run one chain. Hierarchical targets carry their own
/// mutable Gibbs block, so each chain needs its own instance.
struct TargetInstance {
  TargetModel model;
  std::shared_ptr<PoissonHierModel> hier;
  GibbsUpdate gibbs;
};

/// Builds the immutable parts of a target once (data, Wishart draw) and
/// hands out per-chain instances.
class TargetFactory {
 public:
  explicit TargetFactory(const TargetSpec& spec);
  TargetInstance instance() const;
  Support support() const { return spec_.support(); }
  int dim() const { return spec_.dim; }

 private:
  TargetSpec spec_;
  std::shared_ptr<const DesignData> design_;
  std::optional<CholFactor> sigma_;
  std::optional<PoissonHierData> hier_data_;
};

/// Output of the random-walk burn-in stage.
struct TuningResult {
  Vector center;
  std::optional<CholFactor> precond;
  Vector last_state;
  double final_scale = 0.0;
  double accept_rate = 0.0;
};

/// Two-phase adaptive random-walk burn-in. The first half adapts an
/// isotropic step toward `spec.target_accept` and estimates a covariance;
/// the second half runs preconditioned by it. The center is the mean of the
/// last quarter and the preconditioner (if requested) its covariance plus
/// diagonal loading.
TuningResult run_tuning(const TargetModel& target, const TuningSpec& spec, const Vector& initial, RngStream& rng);

/// Empirical covariance with `loading` added to the diagonal.
Matrix empirical_covariance(const std::vector<Vector>& samples, double loading);

/// Instantiates a kernel. `xi`, when set, overrides the first coordinate of
/// an AR kernel's center.
Kernel build_kernel(const KernelSpec& spec, int dim, const TuningResult* tuning, std::optional<double> xi);

struct AggregateRow {
  std::string kernel;
  int replication = 0;
  double ess = 0.0;
  double ess_per_sec = 0.0;
  double accept_rate = 0.0;
  double mean_inner_tries = 0.0;
  std::optional<double> direction_balance;
  std::size_t n = 0;
  bool complete = true;
};

struct SweepResult {
  std::optional<double> value;  ///< sweep value, empty without a sweep
  std::vector<AggregateRow> rows;
};

struct RunOptions {
  std::optional<std::filesystem::path> output;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> kernel_filter;
  bool quiet = false;
  bool write_files = true;
  bool write_traces = true;
};

struct ExperimentResult {
  std::vector<SweepResult> sweeps;
  std::filesystem::path output;
  /// Number of chains that aborted with a step error.
  int failed_chains = 0;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Header: kernel,replication,ess,ess_per_sec,accept_rate,mean_inner_tries,direction_balance
void write_aggregate_csv(const std::vector<AggregateRow>& rows, const std::filesystem::path& path);
std::string csv_field(const std::string& s);

/// Runs fn(i) for i in [0, jobs) on up to `threads` workers (0 = hardware).
/// Rethrows the first job exception after all workers joined.
void parallel_for(std::size_t jobs, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace gmh::bench
