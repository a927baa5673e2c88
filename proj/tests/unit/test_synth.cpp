#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "twin/errors.hpp"
#include "twin/synth.hpp"

using namespace twin;

namespace {

const DigitalTwin& bridge() {
  static const DigitalTwin twin(make_two_girder(default_bridge_template()), default_scenario());
  return twin;
}

SensorLayout east(int n = 10) { return sensor_line(kEastGirder, 0.0, 13.42, n, 1.0, false, true); }

}  // namespace

TEST(Truth, NoMismatchIsScaledFeStrain) {
  const SensorLayout l = east();
  const std::vector<double> times{1.0, 1.5, 2.0, 2.5};
  const Eigen::MatrixXd fe = bridge().strain_operator(l).matrix * bridge().priors(bridge().loads(times)).means;
  const TruthSeries one = generate_truth(bridge(), l, {1.0, 0.0, 1.0, 3}, times);
  EXPECT_TRUE(one.strain == fe);
  const TruthSeries scaled = generate_truth(bridge(), l, {0.9, 0.0, 1.0, 3}, times);
  EXPECT_TRUE(scaled.strain == (0.9 * fe).eval());
}

TEST(Truth, MismatchCovarianceBySampling) {
  const SensorLayout l = east(5);
  const std::vector<double> times{2.0};
  const double d_sigma = 4e-6, d_ell = 0.5;
  const Eigen::MatrixXd fe = bridge().strain_operator(l).matrix * bridge().priors(bridge().loads(times)).means;
  const int n = 10000;
  Eigen::MatrixXd d(5, n);
  for (int s = 0; s < n; ++s) {
    const TruthSeries t = generate_truth(bridge(), l, {1.0, d_sigma, d_ell, static_cast<std::uint64_t>(s)}, times);
    d.col(s) = t.strain.col(0) - fe.col(0);
  }
  const Eigen::MatrixXd emp = d * d.transpose() / n;
  const Eigen::MatrixXd want = sq_exp_covariance(l.coordinates(), d_sigma, d_ell);
  EXPECT_LE(oracle::rel(emp, want), 0.05);
}

TEST(Truth, DeterministicGivenSeed) {
  const SensorLayout l = east();
  const TruthSeries a = generate_truth(bridge(), l, {0.9, 4e-6, 0.5, 77});
  const TruthSeries b = generate_truth(bridge(), l, {0.9, 4e-6, 0.5, 77});
  const TruthSeries c = generate_truth(bridge(), l, {0.9, 4e-6, 0.5, 78});
  EXPECT_TRUE(a.strain == b.strain);
  EXPECT_FALSE(a.strain == c.strain);
  EXPECT_EQ(a.timestamps.size(), 901u);
}

TEST(Truth, SpecValidation) {
  const SensorLayout l = east();
  EXPECT_THROW(generate_truth(bridge(), l, {0.0, 1e-6, 0.5, 1}), ValidationError);
  EXPECT_THROW(generate_truth(bridge(), l, {1.0, -1e-6, 0.5, 1}), ValidationError);
  EXPECT_THROW(generate_truth(bridge(), l, {1.0, 1e-6, 0.0, 1}), ValidationError);
}

TEST(Truth, MisspecifiedStiffness) {
  const SensorLayout l = east();
  const TruthSeries nominal = generate_truth(bridge(), l, {1.0, 0.0, 1.0, 5});
  const TruthSeries same = generate_misspecified_truth(bridge(), l, 0.0, {1.0, 0.0, 1.0, 5});
  EXPECT_LE(oracle::rel(same.strain, nominal.strain), 1e-12);
  const TruthSeries off = generate_misspecified_truth(bridge(), l, 0.1, {1.0, 0.0, 1.0, 5});
  EXPECT_GT(oracle::rel(off.strain, nominal.strain), 1e-4);
  EXPECT_THROW(generate_misspecified_truth(bridge(), l, -0.1, {1.0, 0.0, 1.0, 5}), ValidationError);
}

TEST(Observations, NoiseFreeEqualsTruth) {
  const TruthSeries t = generate_truth(bridge(), east(), {0.9, 4e-6, 0.5, 1});
  const ObservationSet obs = generate_observations(t, 0.0, 9);
  for (Eigen::Index k = 0; k < obs.instants(); ++k) {
    EXPECT_LE((obs.strain(k) - t.strain.col(k)).cwiseAbs().maxCoeff(), 1e-15 * t.strain.cwiseAbs().maxCoeff());
  }
  EXPECT_EQ(obs.timestamps, t.timestamps);
}

TEST(Observations, NoiseStatistics) {
  TruthSeries t;
  t.layout = east(10);
  t.strain = Eigen::MatrixXd::Constant(10, 10000, 2e-5);
  t.timestamps.resize(10000);
  t.gamma.assign(10000, 1.0);
  for (int k = 0; k < 10000; ++k) t.timestamps[k] = 1e-3 * k;
  const double sigma_e = 1e-6;
  const ObservationSet a = generate_observations(t, sigma_e, 1);
  const ObservationSet b = generate_observations(t, sigma_e, 2);
  const Eigen::MatrixXd e = a.readings * kMicrostrain - t.strain;
  EXPECT_NEAR(std::sqrt(e.squaredNorm() / static_cast<double>(e.size())), sigma_e, 0.02 * sigma_e);
  EXPECT_FALSE(a.readings == b.readings);
  EXPECT_TRUE(generate_observations(t, sigma_e, 1).readings == a.readings);
  EXPECT_THROW(generate_observations(t, -1.0, 1), ValidationError);
}

TEST(NoiseEstimate, Examples) {
  EXPECT_EQ(estimate_noise_std(Eigen::MatrixXd::Constant(4, 30, 7.5)), 0.0);
  Eigen::MatrixXd two(3, 2);
  two << 1.0, 3.0, -2.0, 2.0, 0.5, 0.5;
  // Per-sensor sample variances 2, 8, 0 pooled over one dof each.
  EXPECT_NEAR(estimate_noise_std(two), std::sqrt((2.0 + 8.0 + 0.0) / 3.0), 1e-15);
  EXPECT_THROW(estimate_noise_std(Eigen::MatrixXd::Zero(3, 1)), ValidationError);
}

TEST(NoiseEstimate, QuiescentWindowRecoversOneMicrostrain) {
  const TruthSeries t = generate_truth(bridge(), east(20), {0.9, 4e-6, 0.5, 1});
  const ObservationSet obs = generate_observations(t, 1e-6, 4);
  const auto cols = columns_in_window(obs, default_scenario().quiescent_window);
  EXPECT_EQ(cols.size(), 126u);
  const ObservationSet quiet = select_columns(obs, cols);
  // 20 x 126 entries; the truth is static there (the train has not arrived).
  EXPECT_GE(quiet.readings.size(), 2520);
  EXPECT_NEAR(estimate_noise_std(quiet.readings), 1.0, 0.05);
}

TEST(InstantSeed, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 100; ++k)
    for (std::uint64_t s = 1; s <= 4; ++s) seen.insert(instant_seed(42, k, s));
  EXPECT_EQ(seen.size(), 400u);
  EXPECT_EQ(instant_seed(42, 3, 1), instant_seed(42, 3, 1));
}
