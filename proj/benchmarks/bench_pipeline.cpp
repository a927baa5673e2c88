#include <map>
#include <string>

#include <benchmark/benchmark.h>

#include "twin/fem.hpp"
#include "twin/inference.hpp"
#include "twin/io.hpp"
#include "twin/synth.hpp"
#include "twin/twin.hpp"

using namespace twin;

namespace {

const std::string kData = TWIN_DATA_DIR;

const DigitalTwin& bridge() {
  static const DigitalTwin t(load_model(kData + "/bridge.json"), load_scenario(kData + "/train_t1.json"));
  return t;
}

const InferenceProblem& problem(int stride) {
  static std::map<int, InferenceProblem> cache;
  auto it = cache.find(stride);
  if (it == cache.end()) {
    const SensorLayout layout = load_sensor_layout(kData + "/sensors_east.csv");
    const TruthSeries truth = generate_truth(bridge(), layout, {0.9, 4e-6, 0.5, 3, false});
    const ObservationSet rec = generate_observations(truth, 1e-6, 3);
    it = cache.emplace(stride, bridge().prepare(rec, bridge().scenario().analysis_window, stride, 1e-6)).first;
  }
  return it->second;
}

}  // namespace

static void BM_AssembleBridge(benchmark::State& state) {
  const GrillageModel m = make_two_girder(default_bridge_template());
  for (auto _ : state) benchmark::DoNotOptimize(assemble(m));
}
BENCHMARK(BM_AssembleBridge)->Unit(benchmark::kMicrosecond);

static void BM_ForceCovariance(benchmark::State& state) {
  const DigitalTwin& t = bridge();
  const RandomLoadSpec spec{1000.0, 1.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(force_covariance(t.model(), t.dofs(), spec));
}
BENCHMARK(BM_ForceCovariance)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_PosteriorU(benchmark::State& state) {
  const InferenceProblem& p = problem(5);
  const Hyperparameters w{0.9, 4e-6, 0.5};
  const auto& obs = p.observations;
  const Eigen::MatrixXd c_d = mismatch_covariance(obs.layout, w, obs.gamma[50]);
  const Eigen::MatrixXd c_e = noise_covariance(obs.sensors(), obs.sigma_e);
  const GaussianBelief prior = p.priors.at(50);
  const Eigen::VectorXd y = obs.strain(50);
  for (auto _ : state) benchmark::DoNotOptimize(posterior_u(y, w, prior, p.strain.matrix, c_d, c_e));
}
BENCHMARK(BM_PosteriorU)->Unit(benchmark::kMicrosecond);

static void BM_LogMarginal(benchmark::State& state) {
  const InferenceProblem& p = problem(static_cast<int>(state.range(0)));
  const MarginalLikelihood lik(p.observations, p.priors, p.strain.matrix);
  const Hyperparameters w{0.9, 4e-6, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(lik(w));
  state.counters["n_o"] = static_cast<double>(p.observations.instants());
}
BENCHMARK(BM_LogMarginal)->Arg(50)->Arg(5)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_LogMarginalReference(benchmark::State& state) {
  const InferenceProblem& p = problem(5);
  const Hyperparameters w{0.9, 4e-6, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(log_marginal(p.observations, w, p.priors, p.strain.matrix));
}
BENCHMARK(BM_LogMarginalReference)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
