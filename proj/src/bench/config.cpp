#include "gmh/bench/config.hpp"

#include <fstream>
#include <set>

namespace gmh::bench {

namespace {

using nlohmann::json;

// Tracks which keys of an object were consumed so leftovers can be reported.
class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T required(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(path_ + ": missing required key '" + key + "'");
    return read<T>(key);
  }

  template <class T>
  T optional(const std::string& key, T fallback) {
    if (!j_.contains(key)) return fallback;
    return read<T>(key);
  }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  std::string child(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!used_.count(key)) throw ConfigError(path_ + ": unknown key '" + key + "'");
    }
  }

 private:
  template <class T>
  T read(const std::string& key) {
    used_.insert(key);
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key + ": wrong type");
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

TargetKind target_kind_from_string(const std::string& s) {
  if (s == "gaussian") return TargetKind::Gaussian;
  if (s == "student_t") return TargetKind::StudentT;
  if (s == "scaled35") return TargetKind::Scaled35;
  if (s == "logistic") return TargetKind::Logistic;
  if (s == "gamma_product") return TargetKind::GammaProduct;
  if (s == "poisson_hier") return TargetKind::PoissonHier;
  throw ConfigError("target.name: unknown target '" + s + "'");
}

TargetSpec parse_target(const json& j) {
  StrictObject o(j, "target");
  TargetSpec t;
  t.kind = target_kind_from_string(o.required<std::string>("name"));
  switch (t.kind) {
    case TargetKind::Gaussian:
      t.dim = o.required<int>("dim");
      break;
    case TargetKind::StudentT:
      t.dim = o.required<int>("dim");
      t.nu = o.optional("nu", t.nu);
      break;
    case TargetKind::Scaled35:
      t.dim = o.required<int>("dim");
      t.wishart_dof = o.optional("wishart_dof", t.wishart_dof);
      t.wishart_seed = o.optional("wishart_seed", t.wishart_seed);
      break;
    case TargetKind::Logistic:
      if (o.has("data")) t.data_path = o.required<std::string>("data");
      t.synthetic_n = o.optional("synthetic_n", t.synthetic_n);
      t.synthetic_p = o.optional("synthetic_p", t.synthetic_p);
      t.synthetic_seed = o.optional("synthetic_seed", t.synthetic_seed);
      t.prior_sd = o.optional("prior_sd", t.prior_sd);
      t.standardize = o.optional("standardize", t.standardize);
      t.dim = t.synthetic_p;
      if (t.data_path) t.dim = o.optional("features", 60);
      break;
    case TargetKind::GammaProduct:
      t.dim = o.required<int>("dim");
      t.shape = o.optional("shape", t.shape);
      t.rate = o.optional("rate", t.rate);
      break;
    case TargetKind::PoissonHier:
      t.dim = 2;
      t.groups = o.optional("groups", t.groups);
      t.per_group = o.optional("per_group", t.per_group);
      t.alpha_true = o.optional("alpha_true", t.alpha_true);
      t.beta_true = o.optional("beta_true", t.beta_true);
      t.data_seed = o.optional("data_seed", t.data_seed);
      break;
  }
  o.finish();
  return t;
}

KernelSpec parse_kernel(const json& j, std::size_t index) {
  const std::string path = "kernels[" + std::to_string(index) + "]";
  StrictObject o(j, path);
  KernelSpec k;
  try {
    k.kind = kernel_kind_from_string(o.required<std::string>("name"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ".name: " + e.what());
  }
  k.label = o.optional("label", to_string(k.kind));
  switch (family_of(k.kind)) {
    case FamilyTag::None:
      if (k.kind == KernelKind::Rwm) {
        k.scale = o.required<double>("scale");
        k.precondition = o.optional("precondition", k.precondition);
      } else {
        k.step = o.required<double>("step");
      }
      break;
    case FamilyTag::Ar:
      k.rho = o.required<double>("rho");
      if (o.has("center")) k.center = o.required<std::vector<double>>("center");
      k.precondition = o.optional("precondition", k.precondition);
      break;
    case FamilyTag::BetaGamma: {
      k.rho = o.required<double>("rho");
      k.k = o.required<double>("k");
      const auto order = o.optional<std::string>("order", "product");
      if (order == "product") {
        k.order = ProductOrder::Product;
      } else if (order == "mlex") {
        k.order = ProductOrder::ModifiedLex;
      } else {
        throw ConfigError(path + ".order: expected 'product' or 'mlex'");
      }
      break;
    }
    case FamilyTag::ChiSquared:
      k.rho = o.required<double>("rho");
      k.dof = o.optional("dof", k.dof);
      break;
  }
  if (k.kind == KernelKind::Gmpcn || k.kind == KernelKind::BetaGammaGmh || k.kind == KernelKind::ChiGmh) {
    k.max_tries = o.optional("max_tries", k.max_tries);
  }
  o.finish();
  return k;
}

TuningSpec parse_tuning(const json& j) {
  StrictObject o(j, "tuning");
  TuningSpec t;
  t.burnin_iters = o.optional("burnin_iters", t.burnin_iters);
  t.rwm_scale = o.optional("rwm_scale", t.rwm_scale);
  t.target_accept = o.optional("target_accept", t.target_accept);
  t.estimate_center = o.optional("estimate_center", t.estimate_center);
  t.diagonal_loading = o.optional("diagonal_loading", t.diagonal_loading);
  const auto pre = o.optional<std::string>("preconditioner", "none");
  if (pre == "none") {
    t.preconditioner = PreconditionerKind::None;
  } else if (pre == "diagonal") {
    t.preconditioner = PreconditionerKind::Diagonal;
  } else if (pre == "full") {
    t.preconditioner = PreconditionerKind::Full;
  } else {
    throw ConfigError("tuning.preconditioner: expected 'none', 'diagonal' or 'full'");
  }
  o.finish();
  return t;
}

SweepSpec parse_sweep(const json& j) {
  StrictObject o(j, "sweep");
  SweepSpec s;
  s.parameter = o.required<std::string>("parameter");
  s.values = o.required<std::vector<double>>("values");
  o.finish();
  return s;
}

}  // namespace

Support TargetSpec::support() const {
  return kind == TargetKind::GammaProduct || kind == TargetKind::PoissonHier ? Support::PositiveOrthant
                                                                            : Support::RealLine;
}

std::string to_string(TargetKind k) {
  switch (k) {
    case TargetKind::Gaussian: return "gaussian";
    case TargetKind::StudentT: return "student_t";
    case TargetKind::Scaled35: return "scaled35";
    case TargetKind::Logistic: return "logistic";
    case TargetKind::GammaProduct: return "gamma_product";
    case TargetKind::PoissonHier: return "poisson_hier";
  }
  return "?";
}

namespace {

constexpr std::pair<KernelKind, const char*> kKernelNames[] = {
    {KernelKind::Rwm, "rwm"},           {KernelKind::Mala, "mala"},
    {KernelKind::Pcn, "pcn"},           {KernelKind::Mpcn, "mpcn"},
    {KernelKind::Gmpcn, "gmpcn"},       {KernelKind::BetaGammaMh, "bg-mh"},
    {KernelKind::BetaGammaMhh, "bg-mhh"}, {KernelKind::BetaGammaGmh, "bg-gmh"},
    {KernelKind::ChiMh, "chi-mh"},      {KernelKind::ChiMhh, "chi-mhh"},
    {KernelKind::ChiGmh, "chi-gmh"},
};

}  // namespace

std::string to_string(KernelKind k) {
  for (const auto& [kind, name] : kKernelNames) {
    if (kind == k) return name;
  }
  return "?";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  for (const auto& [kind, n] : kKernelNames) {
    if (name == n) return kind;
  }
  throw std::invalid_argument("unknown kernel '" + name + "'");
}

FamilyTag family_of(KernelKind k) {
  switch (k) {
    case KernelKind::Rwm:
    case KernelKind::Mala: return FamilyTag::None;
    case KernelKind::Pcn:
    case KernelKind::Mpcn:
    case KernelKind::Gmpcn: return FamilyTag::Ar;
    case KernelKind::BetaGammaMh:
    case KernelKind::BetaGammaMhh:
    case KernelKind::BetaGammaGmh: return FamilyTag::BetaGamma;
    default: return FamilyTag::ChiSquared;
  }
}

ExperimentConfig parse_config(const json& j) {
  StrictObject o(j, "config");
  ExperimentConfig cfg;
  cfg.target = parse_target(o.raw("target"));
  if (!o.has("kernels")) throw ConfigError("config: missing required key 'kernels'");
  const json& kernels = o.raw("kernels");
  if (!kernels.is_array() || kernels.empty()) throw ConfigError("config.kernels: expected a nonempty array");
  for (std::size_t i = 0; i < kernels.size(); ++i) cfg.kernels.push_back(parse_kernel(kernels[i], i));
  cfg.iters = o.required<long>("iters");
  cfg.burnin = o.optional("burnin", cfg.burnin);
  cfg.thin = o.optional("thin", cfg.thin);
  cfg.replications = o.optional("replications", cfg.replications);
  cfg.seed = o.optional("seed", cfg.seed);
  cfg.threads = o.optional("threads", cfg.threads);
  cfg.record_states = o.optional("record_states", cfg.record_states);
  if (o.has("initial")) cfg.initial = o.required<std::vector<double>>("initial");
  if (o.has("tuning")) cfg.tuning = parse_tuning(o.raw("tuning"));
  if (o.has("sweep")) cfg.sweep = parse_sweep(o.raw("sweep"));
  cfg.output = o.optional<std::string>("output", cfg.output.string());
  o.finish();
  validate(cfg);
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.iters <= cfg.burnin || cfg.burnin < 0) throw ConfigError("config: require iters > burnin >= 0");
  if (cfg.thin < 1) throw ConfigError("config.thin: must be >= 1");
  if (cfg.replications < 1) throw ConfigError("config.replications: must be >= 1");
  if (cfg.threads < 0) throw ConfigError("config.threads: must be >= 0");
  if (cfg.target.dim < 1) throw ConfigError("target.dim: must be >= 1");
  if (cfg.initial && static_cast<int>(cfg.initial->size()) != cfg.target.dim) {
    throw ConfigError("config.initial: length differs from target dimension");
  }
  if (cfg.tuning.burnin_iters < 0) throw ConfigError("tuning.burnin_iters: must be >= 0");
  if (cfg.tuning.burnin_iters > 0 && cfg.target.support() != Support::RealLine) {
    throw ConfigError("tuning: the random-walk burn-in stage needs a target on R^d");
  }
  if (cfg.sweep) {
    if (cfg.sweep->parameter != "xi") throw ConfigError("sweep.parameter: only 'xi' is supported");
    if (cfg.sweep->values.empty()) throw ConfigError("sweep.values: must be nonempty");
  }

  std::set<std::string> labels;
  for (std::size_t i = 0; i < cfg.kernels.size(); ++i) {
    const auto& k = cfg.kernels[i];
    const std::string path = "kernels[" + std::to_string(i) + "] (" + k.label + ")";
    if (!labels.insert(k.label).second) throw ConfigError(path + ": duplicate label");
    const FamilyTag fam = family_of(k.kind);
    const bool positive_kernel = fam == FamilyTag::BetaGamma || fam == FamilyTag::ChiSquared;
    if (positive_kernel && cfg.target.support() != Support::PositiveOrthant) {
      throw ConfigError(path + ": positive-orthant kernel is incompatible with target '" +
                        to_string(cfg.target.kind) + "' on R^d");
    }
    if (!positive_kernel && cfg.target.support() == Support::PositiveOrthant) {
      throw ConfigError(path + ": kernel on R^d is incompatible with positive-orthant target '" +
                        to_string(cfg.target.kind) + "'");
    }
    if (k.kind == KernelKind::Mala && !cfg.target.has_gradient()) {
      throw ConfigError(path + ": mala needs a target with a gradient");
    }
    if (k.kind == KernelKind::Rwm && !(k.scale > 0.0)) throw ConfigError(path + ": scale must be positive");
    if (k.kind == KernelKind::Mala && !(k.step > 0.0)) throw ConfigError(path + ": step must be positive");
    if (k.max_tries < 1) throw ConfigError(path + ": max_tries must be >= 1");
    if (k.center && static_cast<int>(k.center->size()) != cfg.target.dim) {
      throw ConfigError(path + ": center length differs from target dimension");
    }
    try {
      switch (fam) {
        case FamilyTag::Ar: ArFamily(k.rho, cfg.target.dim); break;
        case FamilyTag::BetaGamma: BetaGammaFamily(k.k, k.rho, cfg.target.dim, k.order); break;
        case FamilyTag::ChiSquared: ChiSquaredFamily(k.rho, k.dof, cfg.target.dim); break;
        case FamilyTag::None: break;
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
}

ExperimentConfig validate_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
  json kernels = json::array();
  for (const auto& k : cfg.kernels) {
    json kj{{"name", to_string(k.kind)}, {"label", k.label}};
    switch (family_of(k.kind)) {
      case FamilyTag::None:
        if (k.kind == KernelKind::Rwm) {
          kj["scale"] = k.scale;
          kj["precondition"] = k.precondition;
        } else {
          kj["step"] = k.step;
        }
        break;
      case FamilyTag::Ar:
        kj["rho"] = k.rho;
        kj["precondition"] = k.precondition;
        if (k.center) kj["center"] = *k.center;
        break;
      case FamilyTag::BetaGamma:
        kj["rho"] = k.rho;
        kj["k"] = k.k;
        kj["order"] = k.order == ProductOrder::ModifiedLex ? "mlex" : "product";
        break;
      case FamilyTag::ChiSquared:
        kj["rho"] = k.rho;
        kj["dof"] = k.dof;
        break;
    }
    if (k.kind == KernelKind::Gmpcn || k.kind == KernelKind::BetaGammaGmh || k.kind == KernelKind::ChiGmh) {
      kj["max_tries"] = k.max_tries;
    }
    kernels.push_back(kj);
  }
  json j{{"target", {{"name", to_string(cfg.target.kind)}, {"dim", cfg.target.dim}}},
         {"kernels", kernels},
         {"iters", cfg.iters},
         {"burnin", cfg.burnin},
         {"thin", cfg.thin},
         {"replications", cfg.replications},
         {"seed", cfg.seed},
         {"output", cfg.output.string()}};
  if (cfg.sweep) j["sweep"] = {{"parameter", cfg.sweep->parameter}, {"values", cfg.sweep->values}};
  return j;
}

}  // namespace gmh::bench
