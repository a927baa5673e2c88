#include "twin/synth.hpp"

#include <cmath>
#include <random>

#include "twin/errors.hpp"
#include "twin/gaussian.hpp"

namespace twin {

std::uint64_t instant_seed(std::uint64_t seed, std::uint64_t k, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

namespace {

constexpr std::uint64_t kMismatchStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kLoadStream = 3;

void check_spec(const DiscrepancySpec& s) {
  if (!(s.true_rho > 0.0)) throw ValidationError("true_rho must be positive");
  if (!(s.d_sigma >= 0.0)) throw ValidationError("d_sigma must be non-negative");
  if (!(s.d_ell > 0.0)) throw ValidationError("d_ell must be positive");
}

Eigen::VectorXd standard_normal(std::uint64_t seed, Eigen::Index n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

// Adds gamma_k-scaled mismatch draws to the scaled FE strains.
TruthSeries finish_truth(Eigen::MatrixXd fe_strain, const LoadSeries& loads, const SensorLayout& layout,
                         const DiscrepancySpec& spec) {
  TruthSeries t;
  t.timestamps = loads.timestamps;
  t.gamma = loads.gamma;
  t.layout = layout;
  t.strain = spec.true_rho * fe_strain;
  if (spec.d_sigma > 0.0) {
    const Eigen::MatrixXd c_d = sq_exp_covariance(layout.coordinates(), spec.d_sigma, spec.d_ell);
    const Eigen::MatrixXd l = factorize_covariance(c_d, "truth mismatch covariance").lower();
    for (Eigen::Index k = 0; k < t.strain.cols(); ++k) {
      const double g = t.gamma[static_cast<std::size_t>(k)];
      if (g == 0.0) continue;
      const auto z = standard_normal(instant_seed(spec.seed, static_cast<std::uint64_t>(k), kMismatchStream), l.rows());
      t.strain.col(k) += g * (l * z);
    }
  }
  return t;
}

}  // namespace

TruthSeries generate_truth(const DigitalTwin& twin, const SensorLayout& layout, const DiscrepancySpec& spec,
                           const std::vector<double>& times) {
  check_spec(spec);
  const StrainOperator p = twin.strain_operator(layout);
  const LoadSeries loads = twin.loads(times);
  Eigen::MatrixXd u = twin.priors(loads).means;
  if (spec.sample_load) {
    const auto f = try_factorize_covariance(twin.displacement_covariance(), "displacement prior");
    if (f) {
      const Eigen::MatrixXd l = f->lower();
      for (Eigen::Index k = 0; k < u.cols(); ++k) {
        u.col(k) += l * standard_normal(instant_seed(spec.seed, static_cast<std::uint64_t>(k), kLoadStream), l.rows());
      }
    }
  }
  return finish_truth(p.matrix * u, loads, layout, spec);
}

TruthSeries generate_truth(const DigitalTwin& twin, const SensorLayout& layout, const DiscrepancySpec& spec) {
  return generate_truth(twin, layout, spec, time_grid(twin.scenario().train.time_window, twin.scenario().train.time_step));
}

TruthSeries generate_misspecified_truth(const DigitalTwin& twin, const SensorLayout& layout, double stiffness_cv,
                                        const DiscrepancySpec& spec) {
  check_spec(spec);
  if (!(stiffness_cv >= 0.0)) throw ValidationError("stiffness_cv must be non-negative");
  GrillageModel perturbed = twin.model();
  std::mt19937_64 rng(instant_seed(spec.seed, 0, 4));
  std::normal_distribution<double> normal(0.0, stiffness_cv);
  for (Element& e : perturbed.elements) {
    const double factor = std::exp(normal(rng));
    e.section.bending_stiffness *= factor;
    e.section.torsion_stiffness *= factor;
  }
  const AssembledSystem sys = assemble(perturbed);
  const LoadSeries loads =
      load_series(perturbed, sys.dofs, twin.scenario().train);
  const StrainOperator p = build_strain_operator(perturbed, sys.dofs, layout);
  return finish_truth(p.matrix * solve(sys.stiffness, loads.forces), loads, layout, spec);
}

ObservationSet generate_observations(const TruthSeries& truth, double sigma_e, std::uint64_t seed) {
  if (!(sigma_e >= 0.0)) throw ValidationError("sigma_e must be non-negative");
  ObservationSet obs;
  obs.layout = truth.layout;
  obs.timestamps = truth.timestamps;
  obs.gamma = truth.gamma;
  obs.sigma_e = sigma_e;
  obs.readings.resize(truth.strain.rows(), truth.strain.cols());
  for (Eigen::Index k = 0; k < truth.strain.cols(); ++k) {
    Eigen::VectorXd y = truth.strain.col(k);
    if (sigma_e > 0.0) {
      y += sigma_e * standard_normal(instant_seed(seed, static_cast<std::uint64_t>(k), kNoiseStream), y.size());
    }
    obs.readings.col(k) = y / kMicrostrain;
  }
  return obs;
}

double estimate_noise_std(const Eigen::MatrixXd& readings) {
  if (readings.cols() < 2) throw ValidationError("noise estimate needs at least two readings per sensor");
  double ss = 0.0;
  for (Eigen::Index r = 0; r < readings.rows(); ++r) {
    const double mean = readings.row(r).mean();
    ss += (readings.row(r).array() - mean).square().sum();
  }
  const double dof = static_cast<double>(readings.rows()) * static_cast<double>(readings.cols() - 1);
  return std::sqrt(ss / dof);
}

}  // namespace twin
