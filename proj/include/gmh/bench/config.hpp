#pragma once

// Experiment configuration. The file is JSON; every object is parsed
// strictly (unknown keys are errors) so a misspelt key never silently falls
// back to a default. See docs/config.md for the schema.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmh/kernels.hpp"

namespace gmh::bench {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TargetKind { Gaussian, StudentT, Scaled35, Logistic, GammaProduct, PoissonHier };

struct TargetSpec {
  TargetKind kind = TargetKind::Gaussian;
  int dim = 2;
  // student_t
  double nu = 3.0;
  // scaled35
  int wishart_dof = 50;
  std::uint64_t wishart_seed = 20210607;
  // logistic
  std::optional<std::filesystem::path> data_path;
  int synthetic_n = 208;
  int synthetic_p = 60;
  std::uint64_t synthetic_seed = 208;
  double prior_sd = 10.0;
  bool standardize = true;
  // gamma_product
  double shape = 2.0;
  double rate = 1.0;
  // poisson_hier
  int groups = 25;
  int per_group = 5;
  double alpha_true = 2.0;
  double beta_true = 1.0;
  std::uint64_t data_seed = 25;

  Support support() const;
  bool has_gradient() const { return kind != TargetKind::PoissonHier; }
};

std::string to_string(TargetKind k);

enum class KernelKind {
  Rwm, Mala,
  Pcn, Mpcn, Gmpcn,
  BetaGammaMh, BetaGammaMhh, BetaGammaGmh,
  ChiMh, ChiMhh, ChiGmh,
};

std::string to_string(KernelKind k);
KernelKind kernel_kind_from_string(const std::string& name);

enum class FamilyTag { None, Ar, BetaGamma, ChiSquared };
FamilyTag family_of(KernelKind k);

struct KernelSpec {
  KernelKind kind = KernelKind::Rwm;
  /// Name used in output files; defaults to the kind's name.
  std::string label;
  double scale = 0.5;     // rwm
  double step = 0.1;      // mala
  double rho = 0.5;       // ar, betagamma, chisq
  double k = 1.0;         // betagamma
  ProductOrder order = ProductOrder::Product;
  int dof = 1;            // chisq
  int max_tries = 1000;   // guided
  /// Explicit AR center; otherwise the tuned center, or the origin.
  std::optional<std::vector<double>> center;
  /// Use the tuned preconditioner (AR kernels and rwm).
  bool precondition = true;
};

enum class PreconditionerKind { None, Diagonal, Full };

struct TuningSpec {
  /// 0 disables the tuning stage.
  long burnin_iters = 0;
  double rwm_scale = 0.1;
  double target_accept = 0.25;
  bool estimate_center = true;
  PreconditionerKind preconditioner = PreconditionerKind::None;
  double diagonal_loading = 1e-6;
};

struct SweepSpec {
  /// Only "xi" (first coordinate of every AR kernel's center) is supported.
  std::string parameter = "xi";
  std::vector<double> values;
};

struct ExperimentConfig {
  TargetSpec target;
  std::vector<KernelSpec> kernels;
  long iters = 0;
  long burnin = 0;
  long thin = 1;
  int replications = 10;
  std::uint64_t seed = 1;
  int threads = 0;
  bool record_states = false;
  std::optional<std::vector<double>> initial;
  TuningSpec tuning;
  std::optional<SweepSpec> sweep;
  std::filesystem::path output = "results";
};

/// Strict parse and semantic validation. Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig validate_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace gmh::bench
