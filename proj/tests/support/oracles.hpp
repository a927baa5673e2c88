#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace oracle {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) { return random_matrix(n, 1, rng); }

// B B^T / n + floor I: well conditioned SPD.
inline Eigen::MatrixXd random_spd(Eigen::Index n, std::mt19937_64& rng, double floor = 0.1) {
  const Eigen::MatrixXd b = random_matrix(n, n, rng);
  Eigen::MatrixXd s = b * b.transpose() / static_cast<double>(n);
  s.diagonal().array() += floor;
  return 0.5 * (s + s.transpose());
}

inline double rel(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  const double d = (got - want).norm();
  const double s = want.norm();
  return s > 0.0 ? d / s : d;
}

struct Conditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// Conditions the first `na` components of a joint Gaussian on the rest taking
// value `b`, through the blocks of the explicitly inverted joint precision.
inline Conditional condition_by_precision(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma, Eigen::Index na,
                                          const Eigen::VectorXd& b) {
  const Eigen::Index nb = mu.size() - na;
  const Eigen::MatrixXd lambda = sigma.fullPivLu().inverse();
  const Eigen::MatrixXd laa = lambda.topLeftCorner(na, na);
  const Eigen::MatrixXd lab = lambda.topRightCorner(na, nb);
  const Eigen::MatrixXd cov = laa.fullPivLu().inverse();
  Conditional c;
  c.mean = mu.head(na) - cov * lab * (b - mu.tail(nb));
  c.cov = 0.5 * (cov + cov.transpose());
  return c;
}

// Schur-complement route on the covariance blocks.
inline Conditional condition_by_covariance(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma, Eigen::Index na,
                                           const Eigen::VectorXd& b) {
  const Eigen::Index nb = mu.size() - na;
  const Eigen::MatrixXd sbb_inv = sigma.bottomRightCorner(nb, nb).fullPivLu().inverse();
  const Eigen::MatrixXd sab = sigma.topRightCorner(na, nb);
  Conditional c;
  c.mean = mu.head(na) + sab * sbb_inv * (b - mu.tail(nb));
  c.cov = sigma.topLeftCorner(na, na) - sab * sbb_inv * sab.transpose();
  return c;
}

// Density by explicit inverse and LU determinant.
inline double log_normal_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mu, const Eigen::MatrixXd& cov) {
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(cov);
  const Eigen::VectorXd r = x - mu;
  const double quad = r.dot(lu.inverse() * r);
  return -0.5 * (static_cast<double>(x.size()) * std::log(2.0 * M_PI) + std::log(lu.determinant()) + quad);
}

inline double sq_exp(double dx, double dy, double sigma, double ell) {
  return sigma * sigma * std::exp(-(dx * dx + dy * dy) / (2.0 * ell * ell));
}

}  // namespace oracle
