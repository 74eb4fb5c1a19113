#include "gmh/bench/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gmh/bench/table.hpp"
#include "gmh/diagnostics.hpp"

namespace gmh::bench {

namespace {

// Stream ids: tuning stage and initial states per replication use kernel
// slot 0; chains use slot kernel_index + 1, so filtering kernels never
// shifts the streams of the others.
std::uint64_t stream_id(std::size_t kernel_slot, int replication) {
  return (static_cast<std::uint64_t>(kernel_slot) << 32) | static_cast<std::uint32_t>(replication);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string sweep_dir_name(double v) {
  std::ostringstream os;
  os << "xi_" << v;
  return os.str();
}

Vector default_initial(const ExperimentConfig& cfg, RngStream& rng) {
  const int d = cfg.target.dim;
  if (cfg.initial) return Eigen::Map<const Vector>(cfg.initial->data(), d);
  if (cfg.target.support() == Support::PositiveOrthant) return Vector::Ones(d);
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = rng.normal();
  return x;
}

bool selected(const KernelSpec& k, const std::vector<std::string>& filter) {
  if (filter.empty()) return true;
  for (const auto& f : filter) {
    if (f == k.label || f == to_string(k.kind)) return true;
  }
  return false;
}

// The AR statistic is undefined at its own center; nudge the center by one
// ulp if a chain would start exactly there.
void separate_center(Kernel& kernel, const Vector& initial) {
  auto* fam_holder = std::visit(
      [](auto& k) -> KernelFamily* {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, RandomWalkKernel> || std::is_same_v<K, LangevinKernel>) {
          return nullptr;
        } else {
          return &k.family;
        }
      },
      kernel);
  if (!fam_holder) return;
  if (auto* ar = std::get_if<ArFamily>(fam_holder)) {
    if (ar->center() == initial) {
      Vector c = ar->center();
      c[0] = std::nextafter(c[0], std::numeric_limits<double>::infinity());
      *ar = ArFamily(ar->rho(), std::move(c), ar->precond());
    }
  }
}

nlohmann::json chain_metadata(const ChainTrace& trace, const ExperimentConfig& cfg, const std::string& label,
                              int replication, std::optional<double> sweep_value) {
  nlohmann::json j{{"kernel_label", label},
                   {"kernel", trace.kernel},
                   {"target", trace.target},
                   {"replication", replication},
                   {"seed", trace.seed},
                   {"stream_id", trace.stream_id},
                   {"iters", cfg.iters},
                   {"burnin", cfg.burnin},
                   {"thin", cfg.thin},
                   {"wall_seconds", trace.wall_seconds},
                   {"gradient_warnings", trace.gradient_warnings},
                   {"complete", trace.complete}};
  if (!trace.complete) j["error"] = trace.error;
  if (sweep_value) j["xi"] = *sweep_value;
  if (!trace.steps.empty()) j["summary"] = summarize(trace);
  return j;
}

AggregateRow aggregate(const ChainTrace& trace, const std::string& label, int replication) {
  AggregateRow row;
  row.kernel = label;
  row.replication = replication;
  row.n = trace.steps.size();
  row.complete = trace.complete;
  if (trace.steps.empty()) return row;
  const TraceSummary s = summarize(trace);
  row.accept_rate = s.acceptance_rate;
  row.mean_inner_tries = s.mean_inner_tries;
  row.direction_balance = s.direction_balance;
  if (s.log_target_ess) {
    row.ess = s.log_target_ess->ess;
    row.ess_per_sec = s.log_target_ess->ess_per_second;
  }
  return row;
}

}  // namespace

// ------------------------------------------------------------ targets

TargetFactory::TargetFactory(const TargetSpec& spec) : spec_(spec) {
  switch (spec_.kind) {
    case TargetKind::Scaled35: {
      RngStream rng(spec_.wishart_seed, 0);
      sigma_ = CholFactor::from_covariance(sample_wishart_identity(spec_.dim, spec_.wishart_dof, rng));
      break;
    }
    case TargetKind::Logistic: {
      DesignData data;
      if (spec_.data_path) {
        data = load_design_csv(*spec_.data_path, {spec_.dim, spec_.standardize});
      } else {
        data = make_synthetic_logistic(spec_.synthetic_n, spec_.synthetic_p, spec_.synthetic_seed);
        if (spec_.standardize) standardize_columns(data.x);
      }
      design_ = std::make_shared<const DesignData>(std::move(data));
      break;
    }
    case TargetKind::PoissonHier:
      hier_data_ = simulate_hier_data(spec_.alpha_true, spec_.beta_true, spec_.groups, spec_.per_group,
                                      spec_.data_seed);
      break;
    default:
      break;
  }
}

TargetInstance TargetFactory::instance() const {
  TargetInstance inst;
  switch (spec_.kind) {
    case TargetKind::Gaussian:
      inst.model = standard_gaussian_target(spec_.dim);
      break;
    case TargetKind::StudentT:
      inst.model = student_t_target(spec_.dim, spec_.nu, Vector::Zero(spec_.dim));
      break;
    case TargetKind::Scaled35:
      inst.model = scaled35_target(*sigma_);
      break;
    case TargetKind::Logistic:
      inst.model = logistic_target(design_, spec_.prior_sd);
      break;
    case TargetKind::GammaProduct:
      inst.model = gamma_product_target(Vector::Constant(spec_.dim, spec_.shape),
                                        Vector::Constant(spec_.dim, spec_.rate));
      break;
    case TargetKind::PoissonHier: {
      inst.hier = std::make_shared<PoissonHierModel>(*hier_data_);
      inst.model = inst.hier->conditional_target();
      auto hier = inst.hier;
      inst.gibbs = [hier](const Vector& ab, RngStream& rng) { hier->update_theta(ab, rng); };
      break;
    }
  }
  return inst;
}

// ------------------------------------------------------------ tuning

Matrix empirical_covariance(const std::vector<Vector>& samples, double loading) {
  if (samples.size() < 2) throw std::invalid_argument("empirical_covariance: need two samples");
  const Eigen::Index d = samples.front().size();
  Vector mean = Vector::Zero(d);
  for (const auto& s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  Matrix cov = Matrix::Zero(d, d);
  for (const auto& s : samples) {
    const Vector c = s - mean;
    cov.selfadjointView<Eigen::Lower>().rankUpdate(c);
  }
  cov = cov.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(samples.size() - 1);
  cov.diagonal().array() += loading;
  return cov;
}

namespace {

CholFactor safe_factor(const Matrix& cov, PreconditionerKind kind) {
  try {
    if (kind == PreconditionerKind::Diagonal) return CholFactor::from_variances(cov.diagonal());
    return CholFactor::from_covariance(cov);
  } catch (const std::invalid_argument&) {
    return CholFactor::identity(cov.rows());
  }
}

}  // namespace

TuningResult run_tuning(const TargetModel& target, const TuningSpec& spec, const Vector& initial, RngStream& rng) {
  if (spec.burnin_iters < 8) throw std::invalid_argument("run_tuning: burnin_iters must be >= 8");
  const long n = spec.burnin_iters;
  const long half = n / 2;
  const double d = static_cast<double>(target.dim);

  ChainState s;
  s.x = initial;
  refresh_state(s, target, [](const Vector&) { return 0.0; });

  double log_scale = std::log(spec.rwm_scale);
  std::vector<Vector> first_samples;
  std::vector<Vector> last_samples;
  long accepted = 0;
  std::optional<CholFactor> pre;

  for (long it = 0; it < n; ++it) {
    if (it == half) {
      pre = safe_factor(empirical_covariance(first_samples, spec.diagonal_loading), PreconditionerKind::Full);
      log_scale = std::log(2.38 / std::sqrt(d));
    }
    const StepOutcome out = rwm_step(s, std::exp(log_scale), pre ? &*pre : nullptr, target, rng);
    const long t = it < half ? it : it - half;
    log_scale += ((out.accepted ? 1.0 : 0.0) - spec.target_accept) / std::pow(static_cast<double>(t) + 1.0, 0.6);
    if (it >= half) accepted += out.accepted ? 1 : 0;
    if (it >= half / 2 && it < half) first_samples.push_back(s.x);
    if (it >= half + (n - half) / 2) last_samples.push_back(s.x);
  }

  TuningResult r;
  r.last_state = s.x;
  r.final_scale = std::exp(log_scale);
  r.accept_rate = static_cast<double>(accepted) / static_cast<double>(n - half);
  r.center = Vector::Zero(target.dim);
  for (const auto& x : last_samples) r.center += x;
  r.center /= static_cast<double>(last_samples.size());
  if (spec.preconditioner != PreconditionerKind::None) {
    r.precond = safe_factor(empirical_covariance(last_samples, spec.diagonal_loading), spec.preconditioner);
  }
  return r;
}

// ------------------------------------------------------------ kernels

Kernel build_kernel(const KernelSpec& spec, int dim, const TuningResult* tuning, std::optional<double> xi) {
  const bool use_pre = spec.precondition && tuning && tuning->precond;
  switch (family_of(spec.kind)) {
    case FamilyTag::None:
      if (spec.kind == KernelKind::Rwm) {
        RandomWalkKernel k{spec.scale, std::nullopt};
        if (use_pre) k.precond = tuning->precond;
        return k;
      }
      return LangevinKernel{spec.step};
    case FamilyTag::Ar: {
      Vector center = Vector::Zero(dim);
      if (spec.center) {
        center = Eigen::Map<const Vector>(spec.center->data(), dim);
      } else if (tuning) {
        center = tuning->center;
      }
      if (xi) center[0] = *xi;
      CholFactor pre = use_pre ? *tuning->precond : CholFactor::identity(dim);
      ArFamily fam(spec.rho, std::move(center), std::move(pre));
      if (spec.kind == KernelKind::Pcn) return MetropolisKernel{fam};
      if (spec.kind == KernelKind::Mpcn) return MetropolisHaarKernel{fam};
      return GuidedKernel{fam, spec.max_tries};
    }
    case FamilyTag::BetaGamma: {
      BetaGammaFamily fam(spec.k, spec.rho, dim, spec.order);
      if (spec.kind == KernelKind::BetaGammaMh) return MetropolisKernel{fam};
      if (spec.kind == KernelKind::BetaGammaMhh) return MetropolisHaarKernel{fam};
      return GuidedKernel{fam, spec.max_tries};
    }
    case FamilyTag::ChiSquared: {
      ChiSquaredFamily fam(spec.rho, spec.dof, dim);
      if (spec.kind == KernelKind::ChiMh) return MetropolisKernel{fam};
      if (spec.kind == KernelKind::ChiMhh) return MetropolisHaarKernel{fam};
      return GuidedKernel{fam, spec.max_tries};
    }
  }
  throw std::logic_error("build_kernel: unreachable");
}

// ------------------------------------------------------------ runner

void parallel_for(std::size_t jobs, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (first_error) std::rethrow_exception(first_error);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "kernel,replication,ess,ess_per_sec,accept_rate,mean_inner_tries,direction_balance\n";
  for (const auto& r : rows) {
    out << csv_field(r.kernel) << ',' << r.replication << ',' << format_number(r.ess) << ','
        << format_number(r.ess_per_sec) << ',' << format_number(r.accept_rate) << ','
        << format_number(r.mean_inner_tries) << ','
        << (r.direction_balance ? format_number(*r.direction_balance) : std::string()) << '\n';
  }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg_in, const RunOptions& opts) {
  ExperimentConfig cfg = cfg_in;
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.threads) cfg.threads = *opts.threads;
  if (opts.output) cfg.output = *opts.output;
  validate(cfg);

  std::vector<std::size_t> kernel_slots;
  for (std::size_t i = 0; i < cfg.kernels.size(); ++i) {
    if (selected(cfg.kernels[i], opts.kernel_filter)) kernel_slots.push_back(i);
  }
  if (kernel_slots.empty()) throw ConfigError("--kernel: no kernel matches the filter");

  const TargetFactory factory(cfg.target);
  const int reps = cfg.replications;

  // Initial states and the tuning stage are shared by all kernels of a
  // replication.
  std::vector<Vector> initial(static_cast<std::size_t>(reps));
  std::vector<std::optional<TuningResult>> tuning(static_cast<std::size_t>(reps));
  parallel_for(static_cast<std::size_t>(reps), cfg.threads, [&](std::size_t r) {
    RngStream rng(cfg.seed, stream_id(0, static_cast<int>(r)));
    initial[r] = default_initial(cfg, rng);
    if (cfg.tuning.burnin_iters > 0) {
      const TargetInstance inst = factory.instance();
      tuning[r] = run_tuning(inst.model, cfg.tuning, initial[r], rng);
    }
  });

  std::vector<std::optional<double>> sweep_values;
  if (cfg.sweep) {
    for (double v : cfg.sweep->values) sweep_values.emplace_back(v);
  } else {
    sweep_values.emplace_back(std::nullopt);
  }

  ExperimentResult result;
  result.output = cfg.output;
  if (opts.write_files) std::filesystem::create_directories(cfg.output);

  for (const auto& sv : sweep_values) {
    const std::filesystem::path dir = sv ? cfg.output / sweep_dir_name(*sv) : cfg.output;
    if (opts.write_files && opts.write_traces) std::filesystem::create_directories(dir / "traces");
    if (opts.write_files) std::filesystem::create_directories(dir);

    const std::size_t jobs = kernel_slots.size() * static_cast<std::size_t>(reps);
    std::vector<AggregateRow> rows(jobs);
    std::atomic<int> failed{0};
    parallel_for(jobs, cfg.threads, [&](std::size_t job) {
      const std::size_t slot = kernel_slots[job / static_cast<std::size_t>(reps)];
      const int r = static_cast<int>(job % static_cast<std::size_t>(reps));
      const KernelSpec& spec = cfg.kernels[slot];
      const TuningResult* tune = tuning[static_cast<std::size_t>(r)] ? &*tuning[static_cast<std::size_t>(r)] : nullptr;

      TargetInstance inst = factory.instance();
      ChainOptions co;
      co.iters = cfg.iters;
      co.burnin = cfg.burnin;
      co.thin = cfg.thin;
      co.seed = cfg.seed;
      co.stream_id = stream_id(slot + 1, r);
      co.record_states = cfg.record_states;
      co.initial = tune ? tune->last_state : initial[static_cast<std::size_t>(r)];
      co.gibbs = inst.gibbs;

      Kernel kernel = build_kernel(spec, cfg.target.dim, tune, sv);
      separate_center(kernel, co.initial);
      const ChainTrace trace = run_chain(kernel, inst.model, co);
      if (!trace.complete) ++failed;

      rows[job] = aggregate(trace, spec.label, r);
      if (opts.write_files && opts.write_traces) {
        const std::string stem = spec.label + "_r" + std::to_string(r);
        write_trace_csv(trace, dir / "traces" / (stem + ".csv"), cfg.thin);
        std::ofstream meta(dir / "traces" / (stem + ".json"));
        meta << chain_metadata(trace, cfg, spec.label, r, sv).dump(2) << '\n';
      }
      if (!opts.quiet) {
        std::ostringstream msg;
        msg << spec.label << " r" << r;
        if (sv) msg << " xi=" << *sv;
        msg << ": ess=" << format_number(rows[job].ess) << " accept=" << format_number(rows[job].accept_rate)
            << (trace.complete ? "" : " FAILED: " + trace.error) << '\n';
        std::cerr << msg.str();
      }
    });
    result.failed_chains += failed;
    if (opts.write_files) write_aggregate_csv(rows, dir / "aggregate.csv");
    result.sweeps.push_back({sv, std::move(rows)});
  }

  if (opts.write_files) {
    std::ofstream(cfg.output / "config.json") << to_json(cfg).dump(2) << '\n';
    if (cfg.sweep) {
      write_table_csv(emit_table(result.sweeps, TableMetric::EssPerSecond), cfg.output / "table_ess_per_sec.csv");
      write_table_csv(emit_table(result.sweeps, TableMetric::Ess), cfg.output / "table_ess.csv");
    }
  }
  return result;
}

}  // namespace gmh::bench
