#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "gmh/targets.hpp"
#include "oracles.hpp"

using namespace gmh;
namespace gt = gmh::testing;

namespace {

Vector central_difference(const LogDensityFn& f, const Vector& x, double h = 1e-5) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector a = x;
    Vector b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

void expect_gradient_matches(const TargetModel& t, std::uint64_t seed, double spread = 1.0) {
  ASSERT_TRUE(t.has_gradient());
  RngStream rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Vector x(t.dim);
    for (auto& v : x) v = t.support == Support::PositiveOrthant ? std::exp(0.5 * rng.normal()) : spread * rng.normal();
    const Vector diff = t.gradient(x) - central_difference(t.log_density, x);
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-6) << t.name;
}

std::filesystem::path fixture(const char* name) { return std::filesystem::path(GMH_FIXTURES_DIR) / name; }

}  // namespace

TEST(StudentForms, Scaled35AtOrigin) {
  EXPECT_EQ(mvt_logdensity(Vector::Zero(3), CholFactor::identity(3), StudentForm::Scaled35), 0.0);
  const Vector x = Vector::Constant(1, 2.0);
  EXPECT_NEAR(mvt_logdensity(x, CholFactor::identity(1), StudentForm::Scaled35), -35.0 * std::log(1.2), 1e-13);
}

TEST(StudentForms, CentralRatio) {
  const auto sigma = CholFactor::identity(1);
  const double a = mvt_logdensity(Vector::Zero(1), sigma, StudentForm::Central, 3.0);
  const double b = mvt_logdensity(Vector::Ones(1), sigma, StudentForm::Central, 3.0);
  EXPECT_NEAR(std::exp(b - a), 0.5625, 1e-14);
}

TEST(StudentForms, Symmetry) {
  RngStream rng(1);
  const auto t = student_t_target(4, 3.0, Vector::Zero(4));
  for (int i = 0; i < 100; ++i) {
    Vector x(4);
    for (auto& v : x) v = 3.0 * rng.normal();
    EXPECT_DOUBLE_EQ(t.log_density(x), t.log_density(-x));
  }
}

TEST(StudentForms, LocationShiftsDensity) {
  const Vector loc = Vector::Constant(2, 10.0);
  const auto t = student_t_target(2, 3.0, loc);
  const auto t0 = student_t_target(2, 3.0, Vector::Zero(2));
  EXPECT_DOUBLE_EQ(t.log_density(loc + Vector::Ones(2)), t0.log_density(Vector::Ones(2)));
}

TEST(Gradients, MatchFiniteDifferences) {
  RngStream rng(2);
  Matrix a = Matrix::Random(4, 4);
  const CholFactor cov = CholFactor::from_covariance(a * a.transpose() + Matrix::Identity(4, 4));
  expect_gradient_matches(gaussian_target(Vector::Constant(4, 0.3), cov), 3);
  expect_gradient_matches(standard_gaussian_target(3), 4);
  const Matrix w = sample_wishart_identity(5, 50, rng);
  expect_gradient_matches(scaled35_target(CholFactor::from_covariance(w)), 5, 5.0);
  expect_gradient_matches(student_t_target(5, 3.0, Vector::Constant(5, 0.5)), 6);
  const auto data = std::make_shared<const DesignData>(make_synthetic_logistic(40, 5, 7));
  expect_gradient_matches(logistic_target(data), 8);
  expect_gradient_matches(gamma_product_target(Vector::Constant(3, 2.5), Vector::Constant(3, 0.7)), 9);
}

TEST(Wishart, MeanIsDofTimesIdentity) {
  RngStream rng(10);
  Matrix s = Matrix::Zero(3, 3);
  const int reps = 4000;
  for (int i = 0; i < reps; ++i) s += sample_wishart_identity(3, 50, rng);
  s /= reps;
  // Var of diagonal entries is 2 * dof, of off-diagonal entries dof.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(s(i, j), i == j ? 50.0 : 0.0, 4.0 * std::sqrt(100.0 / reps));
}

TEST(Logistic, ZeroCoefficients) {
  const auto data = make_synthetic_logistic(30, 4, 11);
  const double prior_sd = 10.0;
  // The prior enters without its normalizing constant.
  EXPECT_NEAR(logistic_logpost(Vector::Zero(4), data, prior_sd), -30.0 * std::log(2.0), 1e-12);
}

TEST(Logistic, SingleObservationGradient) {
  DesignData d;
  d.x = Matrix::Ones(1, 1);
  d.y = Vector::Ones(1);
  EXPECT_NEAR(logistic_gradient(Vector::Zero(1), d, 1e12)[0], 0.5, 1e-15);
}

TEST(Logistic, DimensionMismatch) {
  const auto data = make_synthetic_logistic(10, 3, 12);
  EXPECT_THROW(logistic_logpost(Vector::Zero(4), data, 10.0), std::invalid_argument);
  EXPECT_THROW(logistic_gradient(Vector::Zero(2), data, 10.0), std::invalid_argument);
}

TEST(Logistic, SyntheticShapeAndLabels) {
  const auto data = make_synthetic_logistic(208, 60, 208);
  EXPECT_EQ(data.x.rows(), 208);
  EXPECT_EQ(data.x.cols(), 60);
  for (Eigen::Index i = 0; i < data.y.size(); ++i) EXPECT_TRUE(data.y[i] == 0.0 || data.y[i] == 1.0);
  EXPECT_GT(data.y.sum(), 20.0);
  EXPECT_LT(data.y.sum(), 188.0);
}

TEST(CsvLoader, ReadsSonarLabels) {
  const auto d = load_design_csv(fixture("sonar_small.csv"));
  EXPECT_EQ(d.x.rows(), 3);
  EXPECT_EQ(d.x.cols(), 60);
  EXPECT_EQ(d.y[0], 0.0);
  EXPECT_EQ(d.y[1], 1.0);
  EXPECT_EQ(d.y[2], 1.0);
}

TEST(CsvLoader, StandardizeOption) {
  CsvOptions o;
  o.standardize = true;
  const auto d = load_design_csv(fixture("sonar_small.csv"), o);
  for (Eigen::Index j = 0; j < d.x.cols(); ++j) EXPECT_NEAR(d.x.col(j).mean(), 0.0, 1e-12);
}

TEST(CsvLoader, ShortRowNamesLine) {
  try {
    load_design_csv(fixture("sonar_bad_row.csv"));
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(CsvLoader, BadLabelAndMissingFile) {
  const auto path = std::filesystem::temp_directory_path() / "gmh_bad_label.csv";
  {
    std::ofstream out(path);
    out << "1.0,2.0,X\n";
  }
  CsvOptions o;
  o.features = 2;
  EXPECT_THROW(load_design_csv(path, o), std::runtime_error);
  EXPECT_THROW(load_design_csv(fixture("does_not_exist.csv")), std::runtime_error);
  std::filesystem::remove(path);
}

TEST(GammaProduct, OffSupportIsNegativeInfinity) {
  const auto t = gamma_product_target(Vector::Constant(2, 2.0), Vector::Ones(2));
  EXPECT_EQ(t.log_target((Vector(2) << 1.0, -1.0).finished()), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(t.log_target((Vector(2) << 0.0, 1.0).finished()), -std::numeric_limits<double>::infinity());
  EXPECT_TRUE(std::isfinite(t.log_target(Vector::Ones(2))));
}

TEST(Hierarchical, GibbsConditionalMean) {
  PoissonHierData data;
  data.counts = Eigen::MatrixXi::Zero(25, 5);
  RngStream rng(13);
  const int reps = 4000;
  std::vector<double> first;
  for (int i = 0; i < reps; ++i) first.push_back(gibbs_theta(1.0, 1.0, data, rng)[0]);
  // G(1, 6): mean 1/6, sd 1/6.
  EXPECT_LT(std::abs(gt::mean(first) - 1.0 / 6.0), 3.0 * (1.0 / 6.0) / std::sqrt(reps));
  EXPECT_THROW(gibbs_theta(0.0, 1.0, data, rng), std::invalid_argument);
}

TEST(Hierarchical, GibbsShapeUsesRowSum) {
  // Row sum 7 with alpha 0.5 gives G(7.5, N + beta).
  PoissonHierData data;
  data.counts = Eigen::MatrixXi::Zero(1, 5);
  data.counts(0, 0) = 3;
  data.counts(0, 3) = 4;
  RngStream rng(14);
  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) xs.push_back(gibbs_theta(0.5, 2.0, data, rng)[0]);
  EXPECT_GT(gt::ks_one_sample(xs, [](double v) { return gt::gamma_cdf(v, 7.5, 7.0); }).p_value, 0.01);
}

TEST(Hierarchical, LogPosteriorValues) {
  const Vector theta = Vector::Ones(25);
  const double prior = (kHierPriorShape - 1.0) * (0.0 + 0.0) - kHierPriorRate * 2.0;
  EXPECT_NEAR(hier_logpost(1.0, 1.0, theta) - prior, -25.0, 1e-12);
  Vector bad = theta;
  bad[3] = 0.0;
  EXPECT_EQ(hier_logpost(1.0, 1.0, bad), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(hier_logpost(-1.0, 1.0, theta), -std::numeric_limits<double>::infinity());
}

TEST(Hierarchical, BetaDerivativeMatchesFiniteDifference) {
  RngStream rng(15);
  for (int k = 0; k < 100; ++k) {
    Vector theta(25);
    for (auto& v : theta) v = std::exp(0.5 * rng.normal());
    const double a = std::exp(rng.normal());
    const double b = std::exp(rng.normal());
    const double h = 1e-6 * b;
    const double fd = (hier_logpost(a, b + h, theta) - hier_logpost(a, b - h, theta)) / (2.0 * h);
    const double exact = 25.0 * a / b - theta.sum() + (kHierPriorShape - 1.0) / b - kHierPriorRate;
    EXPECT_LT(std::abs(fd - exact), 1e-6 * std::max(1.0, std::abs(exact)));
  }
}

TEST(Hierarchical, SimulatedDataMean) {
  const auto d = simulate_hier_data(2.0, 1.0, 25, 5, 16);
  EXPECT_EQ(d.groups(), 25);
  EXPECT_EQ(d.per_group(), 5);
  EXPECT_GE(d.counts.minCoeff(), 0);
  // Var of one count is E[theta] + Var[theta] = 4; rows share theta so the
  // grand mean has variance (Var theta * N + E theta) / (M N) = 14 / 125.
  EXPECT_NEAR(d.counts.cast<double>().mean(), 2.0, 3.0 * std::sqrt(14.0 / 125.0));
}

TEST(Hierarchical, ConditionalTargetTracksTheta) {
  PoissonHierModel model(simulate_hier_data(2.0, 1.0, 25, 5, 17));
  const auto t = model.conditional_target();
  const Vector ab = (Vector(2) << 2.0, 1.0).finished();
  EXPECT_DOUBLE_EQ(t.log_density(ab), hier_logpost(2.0, 1.0, model.theta()));
  RngStream rng(18);
  model.update_theta(ab, rng);
  EXPECT_DOUBLE_EQ(t.log_density(ab), hier_logpost(2.0, 1.0, model.theta()));
  EXPECT_EQ(t.support, Support::PositiveOrthant);
}
