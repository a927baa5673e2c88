#include "twin/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "twin/errors.hpp"
#include "twin/log.hpp"

#include <spdlog/spdlog.h>

namespace twin {

namespace {

std::array<double, 3> as_array(const Hyperparameters& w) { return {w.rho, w.sigma_d, w.ell_d}; }
Hyperparameters from_array(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

bool inside(const std::array<double, 3>& v, const McmcConfig& c) {
  for (int i = 0; i < 3; ++i) {
    if (!(v[i] >= c.lower[i] && v[i] <= c.upper[i])) return false;
  }
  return true;
}

}  // namespace

int McmcConfig::burn_in() const { return static_cast<int>(std::floor(burn_in_fraction * iterations)); }

void validate_config(const McmcConfig& c) {
  if (c.iterations < 2) throw ValidationError("MCMC needs at least two iterations");
  const int b = c.burn_in();
  if (!(b > 0 && b < c.iterations)) throw ValidationError("burn-in must leave 0 < burn_in < iterations");
  if (c.adapt_block < 1) throw ValidationError("adaptation block must be >= 1");
  for (int i = 0; i < 3; ++i) {
    if (!(c.lower[i] > 0.0 && c.lower[i] < c.upper[i])) throw ValidationError("support box needs 0 < lo < hi");
    if (!(c.step[i] > 0.0)) throw ValidationError("proposal steps must be positive");
  }
  if (!(c.target_low > 0.0 && c.target_low < c.target_high && c.target_high < 1.0)) {
    throw ValidationError("target acceptance band must satisfy 0 < low < high < 1");
  }
}

Chain run_metropolis(const LogDensity& log_density, const McmcConfig& config) {
  validate_config(config);
  std::array<double, 3> current = as_array(config.initial);
  if (!inside(current, config)) throw ValidationError("initial hyperparameters lie outside the support box");
  double current_lp = log_density(config.initial);
  if (!std::isfinite(current_lp)) throw NumericalError("log density is not finite at the initial point");

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Chain chain;
  chain.seed = config.seed;
  chain.burn_in = config.burn_in();
  const auto kept = static_cast<std::size_t>(config.iterations - chain.burn_in);
  chain.samples.reserve(kept);
  chain.log_density.reserve(kept);
  chain.accepted.reserve(kept);

  std::array<double, 3> step = config.step;
  chain.step_history.push_back({0, step, 0.0});
  int block_accepted = 0;
  int block_count = 0;

  for (int it = 0; it < config.iterations; ++it) {
    std::array<double, 3> proposal{};
    for (int i = 0; i < 3; ++i) proposal[i] = current[i] + step[i] * normal(rng);
    const double log_u = std::log(uniform(rng));

    bool accept = false;
    if (inside(proposal, config)) {
      const double lp = log_density(from_array(proposal));
      if (std::isfinite(lp) && log_u < lp - current_lp) {
        accept = true;
        current = proposal;
        current_lp = lp;
      }
    }

    if (it < chain.burn_in) {
      block_accepted += accept ? 1 : 0;
      if (++block_count == config.adapt_block) {
        const double rate = static_cast<double>(block_accepted) / block_count;
        double factor = 1.0;
        if (rate > config.target_high) factor = 1.1;
        if (rate < config.target_low) factor = 0.9;
        if (factor != 1.0) {
          for (double& s : step) s *= factor;
          chain.step_history.push_back({it + 1, step, rate});
        }
        block_accepted = 0;
        block_count = 0;
      }
      continue;
    }

    chain.samples.push_back(from_array(current));
    chain.log_density.push_back(current_lp);
    chain.accepted.push_back(accept ? 1 : 0);
    ++chain.proposed_count;
    chain.accepted_count += accept ? 1 : 0;
  }
  chain.acceptance_ratio =
      chain.proposed_count > 0 ? static_cast<double>(chain.accepted_count) / static_cast<double>(chain.proposed_count)
                               : 0.0;
  logger()->info("MCMC: {} iterations, burn-in {}, acceptance {:.3f}", config.iterations, chain.burn_in,
                 chain.acceptance_ratio);
  return chain;
}

Chain sample_hyperposterior(const ObservationSet& obs, const PriorSeries& priors, const Eigen::MatrixXd& strain_map,
                            const McmcConfig& config) {
  const MarginalLikelihood likelihood(obs, priors, strain_map);
  return run_metropolis(
      [&likelihood](const Hyperparameters& w) {
        try {
          return likelihood(w);
        } catch (const NumericalError&) {
          return -std::numeric_limits<double>::infinity();
        }
      },
      config);
}

McmcConfig suggest_start(const ObservationSet& obs, const PriorSeries& priors, const Eigen::MatrixXd& strain_map,
                         McmcConfig base) {
  const Eigen::MatrixXd model = strain_map * priors.means;
  const Eigen::MatrixXd data = obs.readings * kMicrostrain;
  const double denom = model.squaredNorm();
  double rho = denom > 0.0 ? (model.array() * data.array()).sum() / denom : 1.0;
  rho = std::clamp(rho, base.lower[0] * 10.0, base.upper[0] * 0.1);

  // Residual spread, rescaled by gamma, minus the known noise.
  double sq = 0.0;
  double weight = 0.0;
  for (Eigen::Index k = 0; k < data.cols(); ++k) {
    const double g = obs.gamma[static_cast<std::size_t>(k)];
    sq += (data.col(k) - rho * model.col(k)).squaredNorm();
    weight += g * g * static_cast<double>(data.rows());
  }
  const double excess = weight > 0.0 ? sq / weight - obs.sigma_e * obs.sigma_e : 0.0;
  double sigma = std::sqrt(std::max(excess, obs.sigma_e * obs.sigma_e));
  sigma = std::clamp(sigma, base.lower[1] * 10.0, base.upper[1] * 0.1);
  const double ell = std::clamp(1.0, base.lower[2] * 10.0, base.upper[2] * 0.1);

  base.initial = {rho, sigma, ell};
  base.step = {0.02 * rho, 0.1 * sigma, 0.1 * ell};
  return base;
}

Hyperparameters point_estimate(const Chain& chain) {
  if (chain.samples.empty()) throw ValidationError("chain is empty");
  // Mean of deviations from the first sample; exact for a constant chain.
  const auto first = as_array(chain.samples.front());
  std::array<double, 3> sum{};
  for (const Hyperparameters& w : chain.samples) {
    const auto a = as_array(w);
    for (int i = 0; i < 3; ++i) sum[i] += a[i] - first[i];
  }
  const auto n = static_cast<double>(chain.samples.size());
  std::array<double, 3> mean{};
  for (int i = 0; i < 3; ++i) mean[i] = first[i] + sum[i] / n;
  return from_array(mean);
}

ChainDiagnostics chain_diagnostics(const Chain& chain, int bins) {
  if (chain.samples.empty()) throw ValidationError("chain is empty");
  if (bins < 1) throw ValidationError("histogram needs at least one bin");
  ChainDiagnostics d;
  d.acceptance_ratio = chain.acceptance_ratio;
  d.samples = chain.samples.size();
  const Hyperparameters mean = point_estimate(chain);
  const auto m = as_array(mean);
  const auto n = static_cast<double>(chain.samples.size());

  for (int i = 0; i < 3; ++i) {
    ComponentSummary& c = d.components[i];
    c.mean = m[i];
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double ss = 0.0;
    for (const Hyperparameters& w : chain.samples) {
      const double v = as_array(w)[i];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ss += (v - m[i]) * (v - m[i]);
    }
    c.std_dev = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
      if (m[i] != 0.0) {
        lo = m[i] - 0.5 * std::abs(m[i]);
        hi = m[i] + 0.5 * std::abs(m[i]);
      }
    }
    c.histogram.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) c.histogram.edges[b] = lo + (hi - lo) * b / bins;
    c.histogram.counts.assign(static_cast<std::size_t>(bins), 0);
    for (const Hyperparameters& w : chain.samples) {
      const double v = as_array(w)[i];
      auto b = static_cast<int>((v - lo) / (hi - lo) * bins);
      b = std::clamp(b, 0, bins - 1);
      ++c.histogram.counts[static_cast<std::size_t>(b)];
    }
  }
  return d;
}

nlohmann::json to_json(const ChainDiagnostics& d) {
  static constexpr const char* kNames[] = {"rho", "sigma_d", "ell_d"};
  static constexpr double kScale[] = {1.0, 1.0 / kMicrostrain, 1.0};
  nlohmann::json out;
  out["acceptance_ratio"] = d.acceptance_ratio;
  out["samples"] = d.samples;
  out["units"] = {{"rho", "1"}, {"sigma_d", "microstrain"}, {"ell_d", "m"}};
  for (int i = 0; i < 3; ++i) {
    const ComponentSummary& c = d.components[i];
    std::vector<double> edges;
    for (const double e : c.histogram.edges) edges.push_back(e * kScale[i]);
    out[kNames[i]] = {{"mean", c.mean * kScale[i]},
                      {"std", c.std_dev * kScale[i]},
                      {"histogram", {{"edges", edges}, {"counts", c.histogram.counts}}}};
  }
  return out;
}

void write_chain_csv(std::ostream& out, const Chain& chain) {
  out << "iter,rho,sigma_d,ell_d,log_post,accepted\n";
  for (std::size_t i = 0; i < chain.samples.size(); ++i) {
    const Hyperparameters& w = chain.samples[i];
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", chain.burn_in + static_cast<int>(i), w.rho,
                       w.sigma_d / kMicrostrain, w.ell_d, chain.log_density[i], static_cast<int>(chain.accepted[i]));
  }
}

}  // namespace twin
