#include "twin/gaussian.hpp"

#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "twin/errors.hpp"
#include "twin/log.hpp"

namespace twin {

double CovarianceFactor::log_determinant() const {
  const auto& l = llt_.matrixLLT();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) sum += std::log(l(i, i));
  return 2.0 * sum;
}

std::optional<CovarianceFactor> try_factorize_covariance(const Eigen::MatrixXd& cov, std::string_view what) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return CovarianceFactor(std::move(llt), 0.0);

  const double scale = cov.rows() > 0 ? cov.diagonal().mean() : 0.0;
  if (!(scale > 0.0) || !std::isfinite(scale)) return std::nullopt;

  for (const double eps : kJitterLevels) {
    const double jitter = eps * scale;
    Eigen::MatrixXd shifted = cov;
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) {
      logger()->debug("jitter {:.3g} (eps {:.0e}) added to factorize {}", jitter, eps, what);
      return CovarianceFactor(std::move(llt), jitter);
    }
  }
  return std::nullopt;
}

CovarianceFactor factorize_covariance(const Eigen::MatrixXd& cov, std::string_view what) {
  auto f = try_factorize_covariance(cov, what);
  if (!f) {
    throw NumericalError("covariance '" + std::string(what) +
                         "' is not positive definite after maximum jitter");
  }
  return *std::move(f);
}

void symmetrize(Eigen::MatrixXd& m) {
  m = 0.5 * (m + m.transpose()).eval();
}

bool is_symmetric(const Eigen::MatrixXd& m, double relative_tolerance) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= relative_tolerance * scale;
}

GaussianBelief::GaussianBelief(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (covariance_.rows() != mean_.size() || covariance_.cols() != mean_.size()) {
    throw ValidationError("belief covariance must be square and match the mean dimension");
  }
}

Eigen::VectorXd GaussianBelief::std_dev() const {
  return covariance_.diagonal().cwiseMax(0.0).cwiseSqrt();
}

Eigen::VectorXd GaussianBelief::lower95() const { return mean_ - kBand95 * std_dev(); }
Eigen::VectorXd GaussianBelief::upper95() const { return mean_ + kBand95 * std_dev(); }

const CovarianceFactor& GaussianBelief::factor() const {
  if (!factor_) factor_ = factorize_covariance(covariance_, "belief");
  return *factor_;
}

GaussianBelief GaussianBelief::pushforward(const Eigen::MatrixXd& map) const {
  Eigen::MatrixXd cov = map * covariance_ * map.transpose();
  symmetrize(cov);
  return GaussianBelief(map * mean_, std::move(cov));
}

}  // namespace twin
