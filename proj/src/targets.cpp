#include "gmh/targets.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gmh/distributions.hpp"

namespace gmh {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log1pexp(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void csv_error(const std::filesystem::path& path, int line, const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

bool TargetModel::in_support(const Vector& x) const {
  if (x.size() != dim) return false;
  if (support == Support::PositiveOrthant) return (x.array() > 0.0).all();
  return x.allFinite();
}

double TargetModel::log_target(const Vector& x) const {
  if (!in_support(x)) return kNegInf;
  const double v = log_density(x);
  return std::isnan(v) || v == std::numeric_limits<double>::infinity() ? kNegInf : v;
}

// ---------------------------------------------------------------- R^d

TargetModel gaussian_target(Vector mean, CholFactor cov) {
  if (mean.size() != cov.dim()) throw std::invalid_argument("gaussian_target: dimension mismatch");
  auto m = std::make_shared<const Vector>(std::move(mean));
  auto c = std::make_shared<const CholFactor>(std::move(cov));
  TargetModel t;
  t.name = "gaussian";
  t.dim = m->size();
  t.log_density = [m, c](const Vector& x) { return -0.5 * c->mahalanobis_sq(x - *m); };
  t.gradient = [m, c](const Vector& x) -> Vector {
    const Vector w = c->whiten(x - *m);
    return -c->lower().transpose().triangularView<Eigen::Upper>().solve(w);
  };
  return t;
}

TargetModel standard_gaussian_target(Eigen::Index dim) {
  TargetModel t;
  t.name = "gaussian";
  t.dim = dim;
  t.log_density = [](const Vector& x) { return -0.5 * x.squaredNorm(); };
  t.gradient = [](const Vector& x) -> Vector { return -x; };
  return t;
}

double mvt_logdensity(const Vector& x, const CholFactor& sigma, StudentForm form, double nu,
                      const Vector* location) {
  if (x.size() != sigma.dim()) throw std::invalid_argument("mvt_logdensity: dimension mismatch");
  if (form == StudentForm::Scaled35) {
    return -35.0 * std::log1p(sigma.mahalanobis_sq(x) / 20.0);
  }
  if (!(nu > 0.0)) throw std::invalid_argument("mvt_logdensity: nu must be positive");
  const Vector centered = location ? Vector(x - *location) : x;
  const double d = static_cast<double>(x.size());
  return -0.5 * (nu + d) * std::log1p(sigma.mahalanobis_sq(centered) / nu);
}

TargetModel scaled35_target(CholFactor sigma) {
  auto s = std::make_shared<const CholFactor>(std::move(sigma));
  TargetModel t;
  t.name = "scaled35";
  t.dim = s->dim();
  t.log_density = [s](const Vector& x) { return mvt_logdensity(x, *s, StudentForm::Scaled35); };
  t.gradient = [s](const Vector& x) -> Vector {
    const Vector w = s->whiten(x);
    const Vector sinv_x = s->lower().transpose().triangularView<Eigen::Upper>().solve(w);
    return -35.0 * (2.0 / 20.0) * sinv_x / (1.0 + w.squaredNorm() / 20.0);
  };
  return t;
}

TargetModel student_t_target(Eigen::Index dim, double nu, Vector location) {
  if (location.size() != dim) throw std::invalid_argument("student_t_target: location has wrong length");
  if (!(nu > 0.0)) throw std::invalid_argument("student_t_target: nu must be positive");
  auto loc = std::make_shared<const Vector>(std::move(location));
  const double d = static_cast<double>(dim);
  TargetModel t;
  t.name = "student_t";
  t.dim = dim;
  t.log_density = [loc, nu, d](const Vector& x) {
    return -0.5 * (nu + d) * std::log1p((x - *loc).squaredNorm() / nu);
  };
  t.gradient = [loc, nu, d](const Vector& x) -> Vector {
    const Vector c = x - *loc;
    return -(nu + d) * c / (nu + c.squaredNorm());
  };
  return t;
}

Matrix sample_wishart_identity(Eigen::Index dim, int dof, RngStream& rng) {
  if (dof < dim) throw std::invalid_argument("sample_wishart_identity: dof must be >= dim");
  Matrix z(dof, dim);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = rng.normal();
  }
  return z.transpose() * z;
}

// ------------------------------------------------------ logistic model

double logistic_logpost(const Vector& beta, const DesignData& data, double prior_sd) {
  if (beta.size() != data.x.cols() || data.x.rows() != data.y.size()) {
    throw std::invalid_argument("logistic_logpost: dimension mismatch");
  }
  const Vector eta = data.x * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += data.y[i] * eta[i] - log1pexp(eta[i]);
  return ll - 0.5 * beta.squaredNorm() / (prior_sd * prior_sd);
}

Vector logistic_gradient(const Vector& beta, const DesignData& data, double prior_sd) {
  if (beta.size() != data.x.cols() || data.x.rows() != data.y.size()) {
    throw std::invalid_argument("logistic_gradient: dimension mismatch");
  }
  const Vector eta = data.x * beta;
  Vector resid(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) resid[i] = data.y[i] - sigmoid(eta[i]);
  return data.x.transpose() * resid - beta / (prior_sd * prior_sd);
}

TargetModel logistic_target(std::shared_ptr<const DesignData> data, double prior_sd) {
  if (!(prior_sd > 0.0)) throw std::invalid_argument("logistic_target: prior_sd must be positive");
  TargetModel t;
  t.name = "logistic";
  t.dim = data->x.cols();
  t.log_density = [data, prior_sd](const Vector& b) { return logistic_logpost(b, *data, prior_sd); };
  t.gradient = [data, prior_sd](const Vector& b) { return logistic_gradient(b, *data, prior_sd); };
  return t;
}

DesignData load_design_csv(const std::filesystem::path& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::optional<int> features = opts.features;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const int nfeat = static_cast<int>(fields.size()) - 1;
    if (!features) features = nfeat;
    if (nfeat != *features) {
      csv_error(path, lineno, "expected " + std::to_string(*features + 1) + " fields, found " +
                                  std::to_string(fields.size()));
    }
    std::vector<double> row(static_cast<std::size_t>(nfeat));
    for (int j = 0; j < nfeat; ++j) {
      const auto f = fields[static_cast<std::size_t>(j)];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[static_cast<std::size_t>(j)]);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        csv_error(path, lineno, "field " + std::to_string(j + 1) + " is not a number");
      }
    }
    const auto label = fields.back();
    if (label == "M" || label == "1") {
      labels.push_back(1.0);
    } else if (label == "R" || label == "0") {
      labels.push_back(0.0);
    } else {
      csv_error(path, lineno, "label '" + std::string(label) + "' is not one of 0, 1, R, M");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": no data rows");

  DesignData out;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), *features);
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < *features; ++j) out.x(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    out.y[static_cast<Eigen::Index>(i)] = labels[i];
  }
  if (opts.standardize) standardize_columns(out.x);
  return out;
}

void standardize_columns(Matrix& x) {
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    x.col(j).array() -= mean;
    const double sd = std::sqrt(x.col(j).squaredNorm() / (n - 1.0));
    if (sd > 0.0) x.col(j) /= sd;
  }
}

DesignData make_synthetic_logistic(int n, int p, std::uint64_t seed, double coef_scale) {
  if (n < 1 || p < 1) throw std::invalid_argument("make_synthetic_logistic: sizes must be positive");
  RngStream rng(seed, 0);
  DesignData data;
  data.x.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) data.x(i, j) = rng.normal();
  }
  Vector coef(p);
  for (Eigen::Index j = 0; j < p; ++j) coef[j] = coef_scale * rng.normal();
  const Vector eta = data.x * coef;
  data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) data.y[i] = rng.uniform() < sigmoid(eta[i]) ? 1.0 : 0.0;
  return data;
}

// ------------------------------------------------------ R+^d products

TargetModel gamma_product_target(Vector shape, Vector rate) {
  if (shape.size() != rate.size()) throw std::invalid_argument("gamma_product_target: length mismatch");
  if ((shape.array() <= 0.0).any() || (rate.array() <= 0.0).any()) {
    throw std::invalid_argument("gamma_product_target: parameters must be positive");
  }
  auto a = std::make_shared<const Vector>(std::move(shape));
  auto b = std::make_shared<const Vector>(std::move(rate));
  TargetModel t;
  t.name = "gamma_product";
  t.dim = a->size();
  t.support = Support::PositiveOrthant;
  t.log_density = [a, b](const Vector& x) {
    return ((a->array() - 1.0) * x.array().log() - b->array() * x.array()).sum();
  };
  t.gradient = [a, b](const Vector& x) -> Vector {
    return ((a->array() - 1.0) / x.array() - b->array()).matrix();
  };
  return t;
}

// --------------------------------------- Poisson-Gamma hierarchical model

PoissonHierData simulate_hier_data(double alpha_true, double beta_true, int groups, int per_group,
                                   std::uint64_t seed) {
  if (!(alpha_true > 0.0) || !(beta_true > 0.0) || groups < 1 || per_group < 1) {
    throw std::invalid_argument("simulate_hier_data: invalid parameters");
  }
  RngStream rng(seed, 0);
  std::mt19937_64 counter_engine(rng.bits());
  PoissonHierData data;
  data.counts.resize(groups, per_group);
  for (int m = 0; m < groups; ++m) {
    const double theta = sample_gamma(alpha_true, beta_true, rng);
    std::poisson_distribution<int> pois(theta);
    for (int n = 0; n < per_group; ++n) data.counts(m, n) = pois(counter_engine);
  }
  return data;
}

Vector gibbs_theta(double alpha, double beta, const PoissonHierData& data, RngStream& rng) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("gibbs_theta: alpha and beta must be positive");
  const double rate = static_cast<double>(data.per_group()) + beta;
  Vector theta(data.groups());
  for (int m = 0; m < data.groups(); ++m) {
    const double shape = static_cast<double>(data.counts.row(m).sum()) + alpha;
    theta[m] = sample_gamma(shape, rate, rng);
  }
  return theta;
}

double hier_logpost(double alpha, double beta, const Vector& theta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || (theta.array() <= 0.0).any()) return kNegInf;
  const double m = static_cast<double>(theta.size());
  const double lik = m * (alpha * std::log(beta) - std::lgamma(alpha)) +
                     (alpha - 1.0) * theta.array().log().sum() - beta * theta.sum();
  const double prior = (kHierPriorShape - 1.0) * (std::log(alpha) + std::log(beta)) -
                       kHierPriorRate * (alpha + beta);
  return lik + prior;
}

PoissonHierModel::PoissonHierModel(PoissonHierData data) : data_(std::move(data)) {
  theta_ = Vector::Ones(data_.groups());
  for (int m = 0; m < data_.groups(); ++m) {
    theta_[m] = (static_cast<double>(data_.counts.row(m).sum()) + 0.5) / data_.per_group();
  }
}

void PoissonHierModel::update_theta(const Vector& alpha_beta, RngStream& rng) {
  theta_ = gibbs_theta(alpha_beta[0], alpha_beta[1], data_, rng);
}

TargetModel PoissonHierModel::conditional_target() const {
  TargetModel t;
  t.name = "poisson_hier";
  t.dim = 2;
  t.support = Support::PositiveOrthant;
  t.log_density = [this](const Vector& ab) { return hier_logpost(ab[0], ab[1], theta_); };
  return t;
}

}  // namespace gmh
