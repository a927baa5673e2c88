#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace twin {

/// Relative jitter levels tried, in order, after a plain factorization fails.
inline constexpr double kJitterLevels[] = {1e-12, 1e-11, 1e-10, 1e-9, 1e-8};

/// Cholesky factor of a covariance, with the diagonal jitter that was needed.
class CovarianceFactor {
 public:
  CovarianceFactor() = default;
  CovarianceFactor(Eigen::LLT<Eigen::MatrixXd> llt, double jitter) : llt_(std::move(llt)), jitter_(jitter) {}

  const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }
  Eigen::MatrixXd lower() const { return llt_.matrixL(); }
  double jitter() const { return jitter_; }
  Eigen::Index size() const { return llt_.rows(); }
  double log_determinant() const;

  template <typename Rhs>
  auto solve(const Eigen::MatrixBase<Rhs>& rhs) const {
    return llt_.solve(rhs);
  }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
};

/// Factorizes `cov`, escalating jitter eps*mean(diag) over kJitterLevels.
/// Throws NumericalError naming `what` when every level fails.
CovarianceFactor factorize_covariance(const Eigen::MatrixXd& cov, std::string_view what);

/// Same as factorize_covariance but returns nullopt instead of throwing.
std::optional<CovarianceFactor> try_factorize_covariance(const Eigen::MatrixXd& cov, std::string_view what);

void symmetrize(Eigen::MatrixXd& m);
bool is_symmetric(const Eigen::MatrixXd& m, double relative_tolerance = 1e-12);

/// Multivariate normal with a lazily cached factorization.
class GaussianBelief {
 public:
  GaussianBelief() = default;
  GaussianBelief(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  Eigen::Index size() const { return mean_.size(); }

  Eigen::VectorXd std_dev() const;
  Eigen::VectorXd lower95() const;
  Eigen::VectorXd upper95() const;

  /// Factorization under the jitter policy; computed on first use.
  const CovarianceFactor& factor() const;

  /// Density of p = A x under this belief: N(A m, A C A^T).
  GaussianBelief pushforward(const Eigen::MatrixXd& map) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  mutable std::optional<CovarianceFactor> factor_;
};

/// 95% band half-width multiplier.
inline constexpr double kBand95 = 1.96;

}  // namespace twin
