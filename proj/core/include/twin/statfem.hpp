#pragma once

#include <vector>

#include <Eigen/Core>

#include "twin/gaussian.hpp"
#include "twin/sensors.hpp"

namespace twin {

/// Microstrain to internal (dimensionless) strain.
inline constexpr double kMicrostrain = 1e-6;

/// Statistical-model hyperparameters. sigma_d is in internal strain units.
struct Hyperparameters {
  double rho = 1.0;
  double sigma_d = 0.0;
  double ell_d = 1.0;  // m

  bool positive() const { return rho > 0.0 && sigma_d > 0.0 && ell_d > 0.0; }
  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

/// Strain readings restricted to the instants used for inference.
///
/// Readings are kept in microstrain exactly as recorded so that a CSV round
/// trip reproduces them bit for bit; strain(k) returns internal units.
struct ObservationSet {
  Eigen::MatrixXd readings;        // n_y x n_o, microstrain
  std::vector<double> timestamps;  // s, one per column
  std::vector<double> gamma;       // load scale factor per column
  double sigma_e = 0.0;            // measurement noise std, internal strain
  SensorLayout layout;

  Eigen::Index sensors() const { return readings.rows(); }
  Eigen::Index instants() const { return readings.cols(); }
  Eigen::VectorXd strain(Eigen::Index k) const { return readings.col(k) * kMicrostrain; }
};

/// Throws ValidationError when shapes disagree, entries are missing, or sigma_e <= 0.
void validate_observations(const ObservationSet& obs);

/// K(i,j) = sigma^2 exp(-|x_i - x_j|^2 / (2 ell^2)).
Eigen::MatrixXd sq_exp_covariance(const Eigen::MatrixX2d& points, double sigma, double ell);

/// Mismatch covariance at instant scale gamma: kernel with amplitude gamma*sigma_d.
Eigen::MatrixXd mismatch_covariance(const SensorLayout& layout, const Hyperparameters& w, double gamma);

/// Measurement covariance sigma_e^2 I.
Eigen::MatrixXd noise_covariance(Eigen::Index sensors, double sigma_e);

/// p(u | y) for y = rho P u + d + e.
///
/// Evaluated in gain form, which never inverts C_u and therefore also covers
/// a singular prior (deterministic forcing):
///   S = rho^2 P C_u P^T + C_d + C_e
///   mean = u_bar + rho C_u P^T S^-1 (y - rho P u_bar)
///   cov  = C_u - rho^2 C_u P^T S^-1 P C_u
GaussianBelief posterior_u(const Eigen::VectorXd& y, const Hyperparameters& w, const GaussianBelief& prior,
                           const Eigen::MatrixXd& strain_map, const Eigen::MatrixXd& mismatch_cov,
                           const Eigen::MatrixXd& noise_cov);

/// p(z | y) = N(rho P u_post, rho^2 P C_post P^T + C_d).
GaussianBelief posterior_z(const GaussianBelief& post_u, const Hyperparameters& w, const Eigen::MatrixXd& strain_map,
                           const Eigen::MatrixXd& mismatch_cov);

/// p(y_hat | y) at another layout: posterior_z plus the measurement covariance there.
GaussianBelief predictive_y(const GaussianBelief& post_u, const Hyperparameters& w,
                            const Eigen::MatrixXd& strain_map_hat, const Eigen::MatrixXd& mismatch_cov_hat,
                            const Eigen::MatrixXd& noise_cov_hat);

/// log N(x; mean, cov) through a Cholesky factor (jitter policy applies).
double log_normal_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);

/// Per-instant displacement priors sharing one covariance.
struct PriorSeries {
  Eigen::MatrixXd means;       // n_u x n_o
  Eigen::MatrixXd covariance;  // n_u x n_u

  Eigen::Index instants() const { return means.cols(); }
  GaussianBelief at(Eigen::Index k) const { return GaussianBelief(means.col(k), covariance); }
};

/// log p(y_k | w) = log N(rho P u_k, C_d,k + C_e + rho^2 P C_u P^T).
double log_marginal_instant(const Eigen::VectorXd& y, const Hyperparameters& w, const GaussianBelief& prior,
                            const Eigen::MatrixXd& strain_map, const SensorLayout& layout,
                            const Eigen::MatrixXd& noise_cov, double gamma);

/// Sum of log_marginal_instant over the instants of `obs`.
double log_marginal(const ObservationSet& obs, const Hyperparameters& w, const PriorSeries& priors,
                    const Eigen::MatrixXd& strain_map);

/// log p(Y | w) with the strain-space prior quantities precomputed once.
class MarginalLikelihood {
 public:
  MarginalLikelihood(const ObservationSet& obs, const PriorSeries& priors, const Eigen::MatrixXd& strain_map);

  double operator()(const Hyperparameters& w) const;
  /// Per-instant terms, in column order.
  std::vector<double> terms(const Hyperparameters& w) const;

  Eigen::Index sensors() const { return strain_means_.rows(); }
  Eigen::Index instants() const { return strain_means_.cols(); }

 private:
  double term(const Hyperparameters& w, const Eigen::MatrixXd& kernel_shape, Eigen::Index k) const;
  Eigen::MatrixXd kernel_shape(double ell) const;

  Eigen::MatrixXd data_;             // internal strain, n_y x n_o
  Eigen::MatrixXd strain_means_;     // P u_k
  Eigen::MatrixXd strain_cov_;       // P C_u P^T
  Eigen::MatrixXd squared_distance_;
  std::vector<double> gamma_;
  double sigma_e_ = 0.0;
};

/// Neumaier-compensated sum.
double compensated_sum(const std::vector<double>& values);

}  // namespace twin
