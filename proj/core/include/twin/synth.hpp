#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "twin/statfem.hpp"
#include "twin/twin.hpp"

namespace twin {

/// Ground-truth generator settings; d_sigma is in internal strain units.
struct DiscrepancySpec {
  double true_rho = 1.0;
  double d_sigma = 0.0;
  double d_ell = 1.0;
  std::uint64_t seed = 0;
  /// Draw each instant's displacement from the prior, not just its mean.
  bool sample_load = false;
};

struct TruthSeries {
  Eigen::MatrixXd strain;          // n_y x n_o, internal strain
  std::vector<double> timestamps;  // s
  std::vector<double> gamma;
  SensorLayout layout;
};

/// Deterministic per-instant stream seed derived from (seed, k).
std::uint64_t instant_seed(std::uint64_t seed, std::uint64_t k, std::uint64_t stream);

/// z_k = true_rho P u_k + d_k on the scenario grid, d_k ~ N(0, C_d(gamma_k d_sigma, d_ell)).
TruthSeries generate_truth(const DigitalTwin& twin, const SensorLayout& layout, const DiscrepancySpec& spec);
TruthSeries generate_truth(const DigitalTwin& twin, const SensorLayout& layout, const DiscrepancySpec& spec,
                           const std::vector<double>& times);

/// Truth from a structure whose element stiffness is perturbed by lognormal
/// factors exp(N(0, stiffness_cv^2)); no quantitative recovery is expected.
TruthSeries generate_misspecified_truth(const DigitalTwin& twin, const SensorLayout& layout, double stiffness_cv,
                                        const DiscrepancySpec& spec);

/// Y = z + e, e ~ N(0, sigma_e^2) i.i.d.; readings returned in microstrain.
ObservationSet generate_observations(const TruthSeries& truth, double sigma_e, std::uint64_t seed);

/// Pooled sample standard deviation over sensors (rows) of a quiescent window.
double estimate_noise_std(const Eigen::MatrixXd& readings);

}  // namespace twin
