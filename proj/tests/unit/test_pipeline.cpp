#include <gtest/gtest.h>

#include "twin/errors.hpp"
#include "twin/inference.hpp"
#include "twin/synth.hpp"
#include "twin/twin.hpp"

using namespace twin;

namespace {

const DigitalTwin& bridge() {
  static const DigitalTwin twin(make_two_girder(default_bridge_template()), default_scenario());
  return twin;
}

ObservationSet recording(int per_fiber, bool top, std::uint64_t seed) {
  const SensorLayout l = sensor_line(kEastGirder, 0.0, 13.42, per_fiber, 1.0, top, true);
  return generate_observations(generate_truth(bridge(), l, {0.9, 4e-6, 0.5, seed}), 1e-6, seed + 1);
}

}  // namespace

TEST(Prepare, WindowStrideAndGammaFilter) {
  const ObservationSet rec = recording(10, false, 1);
  const InferenceProblem full = bridge().prepare(rec, {1.0, 3.0}, 1, 1e-6);
  EXPECT_EQ(full.observations.instants(), 501);
  const InferenceProblem thin = bridge().prepare(rec, {1.0, 3.0}, 5, 1e-6);
  EXPECT_EQ(thin.observations.instants(), 101);
  EXPECT_EQ(thin.priors.instants(), 101);
  for (double g : thin.observations.gamma) EXPECT_GE(g, bridge().scenario().gamma_min);
  EXPECT_THROW(bridge().prepare(rec, {0.0, 0.5}, 1, 1e-6), ValidationError);
  EXPECT_THROW(bridge().prepare(rec, {1.0, 3.0}, 0, 1e-6), ValidationError);
  // The crossing ends inside the record, so the tail window is filtered out.
  const InferenceProblem tail = bridge().prepare(rec, {0.5, 3.6}, 1, 1e-6);
  EXPECT_LT(tail.observations.instants(), 776);
}

TEST(Prepare, FastLikelihoodMatchesReference) {
  const InferenceProblem p = bridge().prepare(recording(10, true, 3), {1.0, 3.0}, 25, 1e-6);
  const MarginalLikelihood fast(p.observations, p.priors, p.strain.matrix);
  for (const Hyperparameters& w : {Hyperparameters{0.9, 4e-6, 0.5}, Hyperparameters{1.2, 1e-6, 3.0}}) {
    const double ref = log_marginal(p.observations, w, p.priors, p.strain.matrix);
    EXPECT_NEAR(fast(w), ref, 1e-10 * std::abs(ref));
  }
}

TEST(Prepare, ContractionOnBridge) {
  const InferenceProblem p = bridge().prepare(recording(20, true, 5), {1.0, 3.0}, 5, 1e-6);
  const Hyperparameters w{0.9, 4e-6, 0.5};
  const Eigen::MatrixXd& pm = p.strain.matrix;
  const Eigen::MatrixXd c_e = noise_covariance(p.observations.sensors(), 1e-6);
  for (Eigen::Index k : {0, 50, 100}) {
    const GaussianBelief prior = p.priors.at(k);
    const Eigen::MatrixXd c_d = mismatch_covariance(p.observations.layout, w, p.observations.gamma[k]);
    const GaussianBelief post = posterior_u(p.observations.strain(k), w, prior, pm, c_d, c_e);
    const double slack = 1e-12 * prior.covariance().diagonal().maxCoeff();
    EXPECT_TRUE(((post.covariance().diagonal() - prior.covariance().diagonal()).array() <= slack).all());
  }
}

TEST(Pipeline, StartingPointIsInsideBox) {
  const InferenceProblem p = bridge().prepare(recording(10, false, 9), {1.0, 3.0}, 5, 1e-6);
  const McmcConfig c = suggest_start(p.observations, p.priors, p.strain.matrix);
  EXPECT_NO_THROW(validate_config(c));
  EXPECT_NEAR(c.initial.rho, 0.9, 0.05);
  EXPECT_TRUE(std::isfinite(MarginalLikelihood(p.observations, p.priors, p.strain.matrix)(c.initial)));
}

TEST(Pipeline, NearestColumn) {
  EXPECT_EQ(nearest_column({0.0, 0.5, 1.0}, 0.6), 1u);
  EXPECT_EQ(nearest_column({0.0, 0.5, 1.0}, 5.0), 2u);
  EXPECT_THROW(nearest_column({}, 0.0), ValidationError);
}
