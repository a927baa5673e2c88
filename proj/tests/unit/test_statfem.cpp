#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "twin/errors.hpp"
#include "twin/statfem.hpp"
#include "twin/twin.hpp"

using namespace twin;

namespace {

struct Instance {
  GaussianBelief prior;
  Eigen::MatrixXd p;
  Eigen::MatrixXd c_d;
  Eigen::MatrixXd c_e;
  Eigen::VectorXd y;
  Hyperparameters w;
};

Instance random_instance(std::mt19937_64& rng, Eigen::Index nu, Eigen::Index ny) {
  Instance in;
  in.prior = GaussianBelief(oracle::random_vector(nu, rng), oracle::random_spd(nu, rng));
  in.p = oracle::random_matrix(ny, nu, rng);
  std::uniform_real_distribution<double> u(0.3, 2.0);
  in.w = {u(rng), u(rng), u(rng)};
  SensorLayout layout;
  for (int i = 0; i < ny; ++i) layout.sensors.push_back({i, 2.0 * u(rng), u(rng), Fiber::top, -1});
  in.c_d = mismatch_covariance(layout, in.w, 0.8);
  in.c_e = noise_covariance(ny, 0.3);
  in.y = oracle::random_vector(ny, rng);
  return in;
}

// Joint (u, y) under y = rho P u + d + e.
void joint_u_y(const Instance& in, Eigen::VectorXd& mu, Eigen::MatrixXd& sigma) {
  const Eigen::Index nu = in.prior.size(), ny = in.p.rows();
  const Eigen::MatrixXd& cu = in.prior.covariance();
  mu.resize(nu + ny);
  mu << in.prior.mean(), in.w.rho * in.p * in.prior.mean();
  sigma.resize(nu + ny, nu + ny);
  sigma.topLeftCorner(nu, nu) = cu;
  sigma.topRightCorner(nu, ny) = in.w.rho * cu * in.p.transpose();
  sigma.bottomLeftCorner(ny, nu) = sigma.topRightCorner(nu, ny).transpose();
  sigma.bottomRightCorner(ny, ny) = in.w.rho * in.w.rho * in.p * cu * in.p.transpose() + in.c_d + in.c_e;
}

SensorLayout line(int n, double y = 0.0) {
  SensorLayout l;
  for (int i = 0; i < n; ++i) l.sensors.push_back({i + 1, 0.7 * i, y, Fiber::bottom, -1});
  return l;
}

}  // namespace

TEST(SqExp, Examples) {
  Eigen::MatrixX2d pts(3, 2);
  pts << 0.0, 0.0, 0.5, 0.0, 1.7, 0.0;
  const double sigma = 2.5, ell = 0.5;
  const Eigen::MatrixXd k = sq_exp_covariance(pts, sigma, ell);
  EXPECT_EQ(k(1, 1), sigma * sigma);
  EXPECT_NEAR(k(0, 1), sigma * sigma * std::exp(-0.5), 1e-15 * sigma * sigma);
  EXPECT_NEAR(std::exp(-0.5), 0.6065, 1e-4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_NEAR(k(i, j), oracle::sq_exp(pts(i, 0) - pts(j, 0), pts(i, 1) - pts(j, 1), sigma, ell), 1e-15 * 6.25);
  EXPECT_TRUE(k.isApprox(k.transpose(), 0.0));
  EXPECT_THROW(sq_exp_covariance(pts, 0.0, 1.0), ValidationError);
  EXPECT_THROW(sq_exp_covariance(pts, 1.0, 0.0), ValidationError);
}

TEST(SqExp, DuplicatePointsAllowed) {
  Eigen::MatrixX2d pts(2, 2);
  pts << 1.0, 2.0, 1.0, 2.0;
  const Eigen::MatrixXd k = sq_exp_covariance(pts, 3.0, 1.0);
  EXPECT_EQ(k(0, 1), 9.0);
  EXPECT_GT(factorize_covariance(k, "test").jitter(), 0.0);
}

TEST(Mismatch, GammaScaling) {
  const SensorLayout l = line(5);
  const Hyperparameters w{1.0, 3e-6, 0.8};
  const Eigen::MatrixXd full = mismatch_covariance(l, w, 1.0);
  const Eigen::MatrixXd base = sq_exp_covariance(l.coordinates(), w.sigma_d, w.ell_d);
  EXPECT_TRUE(full == base);
  const Eigen::MatrixXd half = mismatch_covariance(l, w, 0.5);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) EXPECT_EQ(half(i, j), 0.25 * full(i, j));
  EXPECT_EQ(mismatch_covariance(l, w, 0.0).norm(), 0.0);
  EXPECT_THROW(mismatch_covariance(l, w, 1.5), ValidationError);
}

TEST(Jitter, EscalatesThenFails) {
  Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(3, 3);
  const CovarianceFactor f = factorize_covariance(singular, "ones");
  EXPECT_GT(f.jitter(), 0.0);
  EXPECT_LE(f.jitter(), 1e-8);
  Eigen::MatrixXd indefinite = Eigen::MatrixXd::Identity(3, 3);
  indefinite(2, 2) = -1.0;
  EXPECT_THROW(factorize_covariance(indefinite, "indefinite"), NumericalError);
  EXPECT_FALSE(try_factorize_covariance(indefinite, "indefinite").has_value());
  EXPECT_EQ(factorize_covariance(Eigen::MatrixXd::Identity(3, 3), "eye").jitter(), 0.0);
}

TEST(PosteriorU, JointGaussianOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance in = random_instance(rng, 2 + trial % 8, 1 + trial % 4);
    const GaussianBelief post = posterior_u(in.y, in.w, in.prior, in.p, in.c_d, in.c_e);
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    joint_u_y(in, mu, sigma);
    const auto want = oracle::condition_by_precision(mu, sigma, in.prior.size(), in.y);
    EXPECT_LE(oracle::rel(post.mean(), want.mean), 1e-10);
    EXPECT_LE(oracle::rel(post.covariance(), want.cov), 1e-10);
  }
}

TEST(PosteriorU, TwoDofToy) {
  const GaussianBelief prior(Eigen::Vector2d(1.0, -0.5), (Eigen::Matrix2d() << 2.0, 0.3, 0.3, 1.0).finished());
  const Eigen::MatrixXd p = Eigen::Matrix2d::Identity();
  const Eigen::MatrixXd c_d = (Eigen::Matrix2d() << 0.2, 0.05, 0.05, 0.2).finished();
  const Eigen::MatrixXd c_e = 0.1 * Eigen::Matrix2d::Identity();
  const Eigen::Vector2d y(1.4, 0.2);
  const GaussianBelief post = posterior_u(y, {1.0, 1.0, 1.0}, prior, p, c_d, c_e);
  // Block formula with S = C_u + C_d + C_e.
  const Eigen::Matrix2d cu = prior.covariance();
  const Eigen::Matrix2d s_inv = (cu + c_d + c_e).inverse();
  EXPECT_LE(oracle::rel(post.mean(), prior.mean() + cu * s_inv * (y - prior.mean())), 1e-10);
  EXPECT_LE(oracle::rel(post.covariance(), cu - cu * s_inv * cu), 1e-10);
}

TEST(PosteriorU, UninformativeDataLimit) {
  std::mt19937_64 rng(2);
  Instance in = random_instance(rng, 6, 3);
  in.c_e = noise_covariance(3, 1e6 * in.y.norm());
  const GaussianBelief post = posterior_u(in.y, in.w, in.prior, in.p, in.c_d, in.c_e);
  EXPECT_LE(oracle::rel(post.mean(), in.prior.mean()), 1e-4);
  EXPECT_LE(oracle::rel(post.covariance(), in.prior.covariance()), 1e-4);
}

TEST(PosteriorU, InterpolationLimit) {
  std::mt19937_64 rng(6);
  Instance in = random_instance(rng, 4, 4);
  in.w = {1.0, 1e-8, 1.0};
  in.c_d = mismatch_covariance(line(4), in.w, 1.0);
  in.c_e = noise_covariance(4, 1e-8);
  const GaussianBelief post = posterior_u(in.y, in.w, in.prior, in.p, in.c_d, in.c_e);
  EXPECT_LE(oracle::rel(in.p * post.mean(), in.y), 1e-4);
}

TEST(PosteriorU, SingularPriorHandled) {
  std::mt19937_64 rng(12);
  Instance in = random_instance(rng, 5, 3);
  in.prior = GaussianBelief(in.prior.mean(), Eigen::MatrixXd::Zero(5, 5));
  const GaussianBelief post = posterior_u(in.y, in.w, in.prior, in.p, in.c_d, in.c_e);
  EXPECT_EQ(post.mean(), in.prior.mean());
  EXPECT_EQ(post.covariance().norm(), 0.0);
  // Rank-deficient prior against the oracle on its range.
  const Eigen::MatrixXd b = oracle::random_matrix(5, 2, rng);
  in.prior = GaussianBelief(in.prior.mean(), b * b.transpose());
  const GaussianBelief low = posterior_u(in.y, in.w, in.prior, in.p, in.c_d, in.c_e);
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  joint_u_y(in, mu, sigma);
  const auto want = oracle::condition_by_covariance(mu, sigma, 5, in.y);
  EXPECT_LE(oracle::rel(low.mean(), want.mean), 1e-10);
  EXPECT_LE((low.covariance() - want.cov).norm(), 1e-10 * in.prior.covariance().norm());
}

TEST(PosteriorU, ContractionAndLinearity) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    Instance in = random_instance(rng, 8, 3);
    const GaussianBelief post = posterior_u(in.y, in.w, in.prior, in.p, in.c_d, in.c_e);
    const Eigen::MatrixXd& cu = in.prior.covariance();
    const double slack = 1e-12 * cu.diagonal().maxCoeff();
    EXPECT_TRUE(((post.covariance().diagonal() - cu.diagonal()).array() <= slack).all());
    const Eigen::VectorXd strain_prior = (in.p * cu * in.p.transpose()).diagonal();
    const Eigen::VectorXd strain_post = (in.p * post.covariance() * in.p.transpose()).diagonal();
    EXPECT_TRUE(((strain_post - strain_prior).array() <= 1e-12 * strain_prior.maxCoeff()).all());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cu - post.covariance());
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * cu.norm());

    const Eigen::VectorXd y2 = oracle::random_vector(3, rng);
    const double a = 0.3;
    const Eigen::VectorXd mix = a * in.y + (1.0 - a) * y2;
    const Eigen::VectorXd got = posterior_u(mix, in.w, in.prior, in.p, in.c_d, in.c_e).mean();
    const Eigen::VectorXd want = a * post.mean() + (1.0 - a) * posterior_u(y2, in.w, in.prior, in.p, in.c_d, in.c_e).mean();
    EXPECT_LE(oracle::rel(got, want), 1e-10);
  }
}

TEST(PosteriorU, ShapeErrors) {
  std::mt19937_64 rng(1);
  const Instance in = random_instance(rng, 4, 2);
  EXPECT_THROW(posterior_u(Eigen::VectorXd::Zero(3), in.w, in.prior, in.p, in.c_d, in.c_e), ValidationError);
  EXPECT_THROW(posterior_u(in.y, in.w, in.prior, Eigen::MatrixXd::Zero(2, 5), in.c_d, in.c_e), ValidationError);
  EXPECT_THROW(posterior_u(in.y, in.w, in.prior, in.p, Eigen::MatrixXd::Zero(3, 3), in.c_e), ValidationError);
}

TEST(PosteriorZ, PushforwardAndFloor) {
  std::mt19937_64 rng(41);
  Instance in = random_instance(rng, 6, 3);
  const GaussianBelief post = posterior_u(in.y, {1.0, in.w.sigma_d, in.w.ell_d}, in.prior, in.p, in.c_d, in.c_e);
  const GaussianBelief z0 = posterior_z(post, {1.0, 1.0, 1.0}, in.p, Eigen::MatrixXd::Zero(3, 3));
  const GaussianBelief push = post.pushforward(in.p);
  EXPECT_LE(oracle::rel(z0.mean(), push.mean()), 1e-15);
  EXPECT_LE(oracle::rel(z0.covariance(), push.covariance()), 1e-15);

  const GaussianBelief z = posterior_z(post, in.w, in.p, in.c_d);
  const double floor = 0.8 * 0.8 * in.w.sigma_d * in.w.sigma_d;
  EXPECT_TRUE((z.covariance().diagonal().array() >= floor * (1.0 - 1e-12)).all());
}

TEST(PosteriorZ, OracleConditionalPushedThroughP) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const Instance in = random_instance(rng, 3 + trial % 7, 1 + trial % 4);
    const GaussianBelief post = posterior_u(in.y, in.w, in.prior, in.p, in.c_d, in.c_e);
    const GaussianBelief z = posterior_z(post, in.w, in.p, in.c_d);
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    joint_u_y(in, mu, sigma);
    const auto u = oracle::condition_by_precision(mu, sigma, in.prior.size(), in.y);
    EXPECT_LE(oracle::rel(z.mean(), in.w.rho * in.p * u.mean), 1e-10);
    EXPECT_LE(oracle::rel(z.covariance(), in.w.rho * in.w.rho * in.p * u.cov * in.p.transpose() + in.c_d), 1e-10);
  }
}

TEST(PredictiveY, IdentityAtObservedLayout) {
  std::mt19937_64 rng(47);
  const Instance in = random_instance(rng, 7, 4);
  const GaussianBelief post = posterior_u(in.y, in.w, in.prior, in.p, in.c_d, in.c_e);
  const GaussianBelief z = posterior_z(post, in.w, in.p, in.c_d);
  const GaussianBelief y = predictive_y(post, in.w, in.p, in.c_d, in.c_e);
  EXPECT_TRUE(y.mean() == z.mean());
  EXPECT_LE((y.covariance() - z.covariance() - in.c_e).norm(), 1e-12 * y.covariance().norm());
  const GaussianBelief e0 = predictive_y(post, in.w, in.p, in.c_d, Eigen::MatrixXd::Zero(4, 4));
  EXPECT_TRUE(e0.covariance() == z.covariance());
}

TEST(PredictiveY, JointOracleAtNewLayout) {
  std::mt19937_64 rng(53);
  const Instance in = random_instance(rng, 6, 3);
  const Eigen::MatrixXd p_hat = oracle::random_matrix(2, 6, rng);
  const Eigen::MatrixXd cd_hat = mismatch_covariance(line(2, 5.0), in.w, 0.8);
  const Eigen::MatrixXd ce_hat = noise_covariance(2, 0.3);
  const GaussianBelief post = posterior_u(in.y, in.w, in.prior, in.p, in.c_d, in.c_e);
  const GaussianBelief pred = predictive_y(post, in.w, p_hat, cd_hat, ce_hat);
  // Joint (y_hat, y) with independent mismatch and noise at the two layouts.
  const Eigen::MatrixXd& cu = in.prior.covariance();
  const double r2 = in.w.rho * in.w.rho;
  Eigen::VectorXd mu(5);
  mu << in.w.rho * p_hat * in.prior.mean(), in.w.rho * in.p * in.prior.mean();
  Eigen::MatrixXd sigma(5, 5);
  sigma.topLeftCorner(2, 2) = r2 * p_hat * cu * p_hat.transpose() + cd_hat + ce_hat;
  sigma.topRightCorner(2, 3) = r2 * p_hat * cu * in.p.transpose();
  sigma.bottomLeftCorner(3, 2) = sigma.topRightCorner(2, 3).transpose();
  sigma.bottomRightCorner(3, 3) = r2 * in.p * cu * in.p.transpose() + in.c_d + in.c_e;
  const auto want = oracle::condition_by_precision(mu, sigma, 2, in.y);
  EXPECT_LE(oracle::rel(pred.mean(), want.mean), 1e-9);
  EXPECT_LE(oracle::rel(pred.covariance(), want.cov), 1e-9);
}

TEST(LogMarginal, ScalarOracle) {
  const GaussianBelief prior(Eigen::Vector2d(0.4, -1.0), (Eigen::Matrix2d() << 1.5, 0.2, 0.2, 0.7).finished());
  Eigen::MatrixXd p(1, 2);
  p << 0.8, -0.3;
  const Hyperparameters w{0.9, 0.6, 1.0};
  const double sigma_e = 0.25, gamma = 0.7;
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 0.35);
  const double s2 = gamma * gamma * w.sigma_d * w.sigma_d + sigma_e * sigma_e +
                    w.rho * w.rho * (p * prior.covariance() * p.transpose())(0, 0);
  const double m = w.rho * (p * prior.mean())(0);
  const double want = -0.5 * std::log(2.0 * M_PI * s2) - (y(0) - m) * (y(0) - m) / (2.0 * s2);
  const double got = log_marginal_instant(y, w, prior, p, line(1), noise_covariance(1, sigma_e), gamma);
  EXPECT_NEAR(got, want, 1e-12 * std::abs(want));
}

TEST(LogMarginal, ModeAndNoiseMonotonicity) {
  std::mt19937_64 rng(59);
  const Instance in = random_instance(rng, 5, 3);
  const SensorLayout l = line(3);
  const Eigen::VectorXd mode = in.w.rho * in.p * in.prior.mean();
  const double at_mode = log_marginal_instant(mode, in.w, in.prior, in.p, l, in.c_e, 0.6);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd shifted = mode + 0.3 * oracle::random_vector(3, rng);
    EXPECT_LT(log_marginal_instant(shifted, in.w, in.prior, in.p, l, in.c_e, 0.6), at_mode);
  }
  EXPECT_LT(log_marginal_instant(mode, in.w, in.prior, in.p, l, noise_covariance(3, 0.6), 0.6), at_mode);
}

namespace {

ObservationSet small_observations(std::mt19937_64& rng, int ny, int no, PriorSeries& priors, Eigen::MatrixXd& p) {
  ObservationSet obs;
  obs.layout = line(ny);
  obs.readings = oracle::random_matrix(ny, no, rng);
  for (int k = 0; k < no; ++k) {
    obs.timestamps.push_back(0.1 * k);
    obs.gamma.push_back(0.2 + 0.8 * k / std::max(1, no - 1));
  }
  obs.sigma_e = 0.5e-6;
  const int nu = 4;
  priors.means = oracle::random_matrix(nu, no, rng) * 1e-3;
  priors.covariance = oracle::random_spd(nu, rng) * 1e-12;
  p = oracle::random_matrix(ny, nu, rng) * 1e-3;
  return obs;
}

}  // namespace

TEST(LogMarginal, SumOverInstants) {
  std::mt19937_64 rng(61);
  PriorSeries priors;
  Eigen::MatrixXd p;
  ObservationSet obs = small_observations(rng, 3, 1, priors, p);
  const Hyperparameters w{1.1, 2e-6, 0.9};
  const double single = log_marginal_instant(obs.strain(0), w, priors.at(0), p, obs.layout,
                                             noise_covariance(3, obs.sigma_e), obs.gamma[0]);
  EXPECT_NEAR(log_marginal(obs, w, priors, p), single, 1e-12 * std::abs(single));

  obs = small_observations(rng, 3, 9, priors, p);
  const double base = log_marginal(obs, w, priors, p);
  std::vector<int> order(9);
  for (int i = 0; i < 9; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  ObservationSet perm = obs;
  PriorSeries pp = priors;
  for (int i = 0; i < 9; ++i) {
    perm.readings.col(i) = obs.readings.col(order[i]);
    perm.timestamps[i] = obs.timestamps[order[i]];
    perm.gamma[i] = obs.gamma[order[i]];
    pp.means.col(i) = priors.means.col(order[i]);
  }
  EXPECT_NEAR(log_marginal(perm, w, pp, p), base, 1e-12 * std::abs(base));
  const MarginalLikelihood fast(obs, priors, p);
  EXPECT_NEAR(fast(w), base, 1e-10 * std::abs(base));
}

TEST(LogMarginal, DirectProductOracle) {
  // Unit-scale quantities so that linear-space densities stay representable.
  const GaussianBelief prior(Eigen::Vector2d(0.1, -0.2), (Eigen::Matrix2d() << 0.3, 0.05, 0.05, 0.2).finished());
  const Eigen::MatrixXd p = (Eigen::Matrix2d() << 1.0, 0.2, -0.1, 0.7).finished();
  const Hyperparameters w{0.9, 0.4, 1.3};
  const SensorLayout l = line(2);
  const Eigen::MatrixXd c_e = noise_covariance(2, 0.2);
  const Eigen::Vector2d y1(0.05, -0.1), y2(0.2, -0.3);
  const double g1 = 1.0, g2 = 0.6;
  double product = 1.0;
  for (const auto& [y, g] : {std::pair{y1, g1}, std::pair{y2, g2}}) {
    const Eigen::MatrixXd cov = mismatch_covariance(l, w, g) + c_e + w.rho * w.rho * p * prior.covariance() * p.transpose();
    product *= std::exp(oracle::log_normal_pdf(y, w.rho * p * prior.mean(), cov));
  }
  const double sum = log_marginal_instant(y1, w, prior, p, l, c_e, g1) + log_marginal_instant(y2, w, prior, p, l, c_e, g2);
  EXPECT_NEAR(sum, std::log(product), 1e-10 * std::abs(std::log(product)));
}

TEST(LogMarginal, CompensatedSumOrderInsensitive) {
  std::mt19937_64 rng(67);
  std::vector<double> v;
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) v.push_back(n(rng) * std::pow(10.0, i % 9));
  const double a = compensated_sum(v);
  std::shuffle(v.begin(), v.end(), rng);
  EXPECT_NEAR(compensated_sum(v), a, 1e-12 * std::abs(a));
  EXPECT_EQ(compensated_sum({1e100, 1.0, -1e100}), 1.0);
}

TEST(Observations, Validation) {
  std::mt19937_64 rng(71);
  PriorSeries priors;
  Eigen::MatrixXd p;
  ObservationSet obs = small_observations(rng, 2, 3, priors, p);
  EXPECT_NO_THROW(validate_observations(obs));
  ObservationSet bad = obs;
  bad.sigma_e = 0.0;
  EXPECT_THROW(validate_observations(bad), ValidationError);
  bad = obs;
  bad.readings(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate_observations(bad), ValidationError);
  bad = obs;
  bad.gamma.pop_back();
  EXPECT_THROW(validate_observations(bad), ValidationError);
  bad = obs;
  bad.readings.resize(0, 0);
  EXPECT_THROW(validate_observations(bad), ValidationError);
}

TEST(Bridge, WestPredictionMovesWithEastData) {
  const DigitalTwin twin(make_two_girder(default_bridge_template()), default_scenario());
  const SensorLayout east = sensor_line(kEastGirder, 0.0, 13.42, 10, 1.0, false, true, 1);
  const SensorLayout west = sensor_line(kWestGirder, 7.3, 13.42, 10, 1.0, false, true, 101);
  const LoadSeries loads = twin.loads({2.0});
  const GaussianBelief prior = twin.priors(loads).at(0);
  const Eigen::MatrixXd p = twin.strain_operator(east).matrix;
  const Eigen::MatrixXd p_hat = twin.strain_operator(west).matrix;
  const Hyperparameters w{1.0, 2e-6, 1.0};
  const Eigen::VectorXd y = 1.3 * p * prior.mean();
  const GaussianBelief post = posterior_u(y, w, prior, p, mismatch_covariance(east, w, 1.0), noise_covariance(10, 1e-6));
  const GaussianBelief pred = predictive_y(post, w, p_hat, mismatch_covariance(west, w, 1.0), noise_covariance(10, 1e-6));
  const Eigen::VectorXd prior_mean = p_hat * prior.mean();
  EXPECT_GT((pred.mean() - prior_mean).norm(), 1e-3 * prior_mean.norm());
}
