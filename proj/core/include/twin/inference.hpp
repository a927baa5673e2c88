#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "twin/statfem.hpp"

namespace twin {

/// Random-walk Metropolis settings. Component order is (rho, sigma_d, ell_d);
/// sigma_d quantities are in internal strain units.
struct McmcConfig {
  int iterations = 20000;
  double burn_in_fraction = 0.25;
  Hyperparameters initial{1.0, 1e-6, 1.0};
  std::array<double, 3> step{0.02, 1e-7, 0.1};
  std::array<double, 3> lower{1e-3, 1e-3 * kMicrostrain, 1e-2};
  std::array<double, 3> upper{1e2, 1e3 * kMicrostrain, 1e2};
  std::uint64_t seed = 1;
  double target_low = 0.2;
  double target_high = 0.5;
  int adapt_block = 100;

  int burn_in() const;
};

/// Throws ValidationError on inconsistent settings.
void validate_config(const McmcConfig& c);

struct StepRecord {
  int iteration = 0;  // first iteration the steps apply to
  std::array<double, 3> step{};
  double block_acceptance = 0.0;
};

struct Chain {
  std::vector<Hyperparameters> samples;  // post burn-in, one per iteration
  std::vector<double> log_density;
  std::vector<std::uint8_t> accepted;
  std::size_t accepted_count = 0;
  std::size_t proposed_count = 0;
  double acceptance_ratio = 0.0;  // post burn-in accepted / proposed
  std::vector<StepRecord> step_history;
  std::uint64_t seed = 0;
  int burn_in = 0;

  std::size_t size() const { return samples.size(); }
};

using LogDensity = std::function<double(const Hyperparameters&)>;

/// Metropolis with a joint Gaussian proposal (diagonal, per-component steps) and a
/// flat prior on the support box. Steps adapt per block during burn-in only.
Chain run_metropolis(const LogDensity& log_density, const McmcConfig& config);

/// Samples p(w | Y) with the marginal likelihood of all instants in `obs`.
Chain sample_hyperposterior(const ObservationSet& obs, const PriorSeries& priors, const Eigen::MatrixXd& strain_map,
                            const McmcConfig& config);

/// Data-driven start: least-squares rho, residual-based sigma_d, ell_d = 1 m, steps scaled to each.
McmcConfig suggest_start(const ObservationSet& obs, const PriorSeries& priors, const Eigen::MatrixXd& strain_map,
                         McmcConfig base = {});

/// Componentwise mean of the post burn-in samples.
Hyperparameters point_estimate(const Chain& chain);

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<std::size_t> counts;
};

struct ComponentSummary {
  double mean = 0.0;
  double std_dev = 0.0;
  Histogram histogram;
};

struct ChainDiagnostics {
  std::array<ComponentSummary, 3> components;  // rho, sigma_d, ell_d
  double acceptance_ratio = 0.0;
  std::size_t samples = 0;
};

ChainDiagnostics chain_diagnostics(const Chain& chain, int bins = 30);

/// Report with sigma_d quantities in microstrain.
nlohmann::json to_json(const ChainDiagnostics& d);

/// `iter,rho,sigma_d,ell_d,log_post,accepted`, sigma_d in microstrain.
void write_chain_csv(std::ostream& out, const Chain& chain);

}  // namespace twin
