#include "twin/statfem.hpp"

#include <cmath>
#include <numbers>

#include "twin/errors.hpp"

namespace twin {

void validate_observations(const ObservationSet& obs) {
  if (obs.sensors() < 1 || obs.instants() < 1) throw ValidationError("observation set is empty");
  if (static_cast<std::size_t>(obs.sensors()) != obs.layout.size()) {
    throw ValidationError("observation rows do not match the sensor layout");
  }
  if (static_cast<std::size_t>(obs.instants()) != obs.timestamps.size() ||
      obs.timestamps.size() != obs.gamma.size()) {
    throw ValidationError("observation columns do not match timestamps / gamma");
  }
  if (!obs.readings.allFinite()) throw ValidationError("observation set has missing entries");
  if (!(obs.sigma_e > 0.0)) throw ValidationError("measurement noise sigma_e must be positive");
  for (const double g : obs.gamma) {
    if (!(g >= 0.0 && g <= 1.0)) throw ValidationError("gamma must lie in [0, 1]");
  }
}

Eigen::MatrixXd sq_exp_covariance(const Eigen::MatrixX2d& points, double sigma, double ell) {
  if (!(sigma > 0.0 && ell > 0.0)) throw ValidationError("kernel scale and length scale must be positive");
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd k(n, n);
  const double s2 = sigma * sigma;
  const double inv = 1.0 / (2.0 * ell * ell);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = s2;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = s2 * std::exp(-(points.row(i) - points.row(j)).squaredNorm() * inv);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::MatrixXd mismatch_covariance(const SensorLayout& layout, const Hyperparameters& w, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("gamma must lie in [0, 1]");
  const auto n = static_cast<Eigen::Index>(layout.size());
  if (gamma == 0.0) return Eigen::MatrixXd::Zero(n, n);
  return sq_exp_covariance(layout.coordinates(), gamma * w.sigma_d, w.ell_d);
}

Eigen::MatrixXd noise_covariance(Eigen::Index sensors, double sigma_e) {
  return Eigen::MatrixXd::Identity(sensors, sensors) * (sigma_e * sigma_e);
}

namespace {

void check_shapes(const Eigen::VectorXd& y, const GaussianBelief& prior, const Eigen::MatrixXd& p,
                  const Eigen::MatrixXd& c_d, const Eigen::MatrixXd& c_e) {
  const Eigen::Index ny = p.rows();
  if (p.cols() != prior.size()) throw ValidationError("strain operator columns do not match the prior dimension");
  if (y.size() != ny) throw ValidationError("observation vector does not match the strain operator rows");
  if (c_d.rows() != ny || c_d.cols() != ny || c_e.rows() != ny || c_e.cols() != ny) {
    throw ValidationError("mismatch / noise covariance dimensions do not match the observations");
  }
}

}  // namespace

GaussianBelief posterior_u(const Eigen::VectorXd& y, const Hyperparameters& w, const GaussianBelief& prior,
                           const Eigen::MatrixXd& p, const Eigen::MatrixXd& c_d, const Eigen::MatrixXd& c_e) {
  check_shapes(y, prior, p, c_d, c_e);
  const Eigen::MatrixXd& cu = prior.covariance();
  const Eigen::MatrixXd pcu = w.rho * (p * cu);  // rho P C_u
  Eigen::MatrixXd s = w.rho * pcu * p.transpose() + c_d + c_e;
  symmetrize(s);
  const CovarianceFactor f = factorize_covariance(s, "innovation covariance");

  const Eigen::MatrixXd wt = f.llt().matrixL().solve(pcu);  // L^-1 rho P C_u
  const Eigen::VectorXd residual = y - w.rho * (p * prior.mean());
  const Eigen::VectorXd whitened = f.llt().matrixL().solve(residual);

  Eigen::VectorXd mean = prior.mean() + wt.transpose() * whitened;
  Eigen::MatrixXd cov = cu - wt.transpose() * wt;
  symmetrize(cov);
  return GaussianBelief(std::move(mean), std::move(cov));
}

GaussianBelief posterior_z(const GaussianBelief& post_u, const Hyperparameters& w, const Eigen::MatrixXd& p,
                           const Eigen::MatrixXd& c_d) {
  if (p.cols() != post_u.size()) throw ValidationError("strain operator columns do not match the belief dimension");
  if (c_d.rows() != p.rows() || c_d.cols() != p.rows()) throw ValidationError("mismatch covariance dimension");
  Eigen::MatrixXd cov = (w.rho * w.rho) * (p * post_u.covariance() * p.transpose()) + c_d;
  symmetrize(cov);
  return GaussianBelief(w.rho * (p * post_u.mean()), std::move(cov));
}

GaussianBelief predictive_y(const GaussianBelief& post_u, const Hyperparameters& w, const Eigen::MatrixXd& p_hat,
                            const Eigen::MatrixXd& c_d_hat, const Eigen::MatrixXd& c_e_hat) {
  if (c_e_hat.rows() != p_hat.rows() || c_e_hat.cols() != p_hat.rows()) {
    throw ValidationError("noise covariance dimension does not match the prediction layout");
  }
  const GaussianBelief z = posterior_z(post_u, w, p_hat, c_d_hat);
  return GaussianBelief(z.mean(), z.covariance() + c_e_hat);
}

double log_normal_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  const CovarianceFactor f = factorize_covariance(cov, "marginal covariance");
  const Eigen::VectorXd white = f.llt().matrixL().solve(x - mean);
  const double n = static_cast<double>(x.size());
  return -0.5 * (n * std::log(2.0 * std::numbers::pi) + f.log_determinant() + white.squaredNorm());
}

double log_marginal_instant(const Eigen::VectorXd& y, const Hyperparameters& w, const GaussianBelief& prior,
                            const Eigen::MatrixXd& p, const SensorLayout& layout, const Eigen::MatrixXd& c_e,
                            double gamma) {
  const Eigen::MatrixXd c_d = mismatch_covariance(layout, w, gamma);
  check_shapes(y, prior, p, c_d, c_e);
  Eigen::MatrixXd cov = c_d + c_e + (w.rho * w.rho) * (p * prior.covariance() * p.transpose());
  symmetrize(cov);
  return log_normal_density(y, w.rho * (p * prior.mean()), cov);
}

double compensated_sum(const std::vector<double>& values) {
  double sum = 0.0;
  double c = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

double log_marginal(const ObservationSet& obs, const Hyperparameters& w, const PriorSeries& priors,
                    const Eigen::MatrixXd& p) {
  validate_observations(obs);
  if (priors.instants() != obs.instants()) throw ValidationError("one prior per observed instant is required");
  const Eigen::MatrixXd c_e = noise_covariance(obs.sensors(), obs.sigma_e);
  std::vector<double> terms(static_cast<std::size_t>(obs.instants()));
  for (Eigen::Index k = 0; k < obs.instants(); ++k) {
    terms[static_cast<std::size_t>(k)] =
        log_marginal_instant(obs.strain(k), w, priors.at(k), p, obs.layout, c_e, obs.gamma[k]);
  }
  return compensated_sum(terms);
}

MarginalLikelihood::MarginalLikelihood(const ObservationSet& obs, const PriorSeries& priors,
                                       const Eigen::MatrixXd& p)
    : gamma_(obs.gamma), sigma_e_(obs.sigma_e) {
  validate_observations(obs);
  if (priors.instants() != obs.instants()) throw ValidationError("one prior per observed instant is required");
  if (p.rows() != obs.sensors() || p.cols() != priors.means.rows()) {
    throw ValidationError("strain operator does not match observations / priors");
  }
  data_ = obs.readings * kMicrostrain;
  strain_means_ = p * priors.means;
  strain_cov_ = p * priors.covariance * p.transpose();
  symmetrize(strain_cov_);
  const Eigen::MatrixX2d xy = obs.layout.coordinates();
  const Eigen::Index n = xy.rows();
  squared_distance_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) squared_distance_(i, j) = (xy.row(i) - xy.row(j)).squaredNorm();
  }
}

Eigen::MatrixXd MarginalLikelihood::kernel_shape(double ell) const {
  return (-squared_distance_.array() / (2.0 * ell * ell)).exp().matrix();
}

double MarginalLikelihood::term(const Hyperparameters& w, const Eigen::MatrixXd& shape, Eigen::Index k) const {
  const double g = gamma_[static_cast<std::size_t>(k)] * w.sigma_d;
  Eigen::MatrixXd cov = (g * g) * shape + (w.rho * w.rho) * strain_cov_;
  cov.diagonal().array() += sigma_e_ * sigma_e_;
  return log_normal_density(data_.col(k), w.rho * strain_means_.col(k), cov);
}

std::vector<double> MarginalLikelihood::terms(const Hyperparameters& w) const {
  const Eigen::MatrixXd shape = kernel_shape(w.ell_d);
  std::vector<double> out(static_cast<std::size_t>(instants()));
  for (Eigen::Index k = 0; k < instants(); ++k) out[static_cast<std::size_t>(k)] = term(w, shape, k);
  return out;
}

double MarginalLikelihood::operator()(const Hyperparameters& w) const { return compensated_sum(terms(w)); }

}  // namespace twin
