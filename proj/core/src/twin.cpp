#include "twin/twin.hpp"

#include <cmath>
#include <string>

#include "twin/errors.hpp"

namespace twin {

DigitalTwin::DigitalTwin(GrillageModel model, ScenarioConfig scenario)
    : model_(std::move(model)), scenario_(std::move(scenario)), system_(assemble(model_)) {
  validate_scenario(scenario_.train);
  force_cov_ = twin::force_covariance(model_, system_.dofs, scenario_.random_load);
  displacement_cov_ = propagate_covariance(system_.stiffness, force_cov_);
}

StrainOperator DigitalTwin::strain_operator(const SensorLayout& layout) const {
  validate_layout(layout);
  return build_strain_operator(model_, system_.dofs, layout);
}

LoadSeries DigitalTwin::loads() const { return load_series(model_, system_.dofs, scenario_.train); }

LoadSeries DigitalTwin::loads(const std::vector<double>& times) const {
  return load_series_at(model_, system_.dofs, scenario_.train, times);
}

PriorSeries DigitalTwin::priors(const LoadSeries& loads) const {
  return {solve(system_.stiffness, loads.forces), displacement_cov_};
}

PriorSeries DigitalTwin::priors(const LoadSeries& loads, const std::vector<std::size_t>& columns) const {
  Eigen::MatrixXd f(loads.forces.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    f.col(static_cast<Eigen::Index>(i)) = loads.forces.col(static_cast<Eigen::Index>(columns[i]));
  }
  return {solve(system_.stiffness, f), displacement_cov_};
}

void DigitalTwin::annotate(ObservationSet& obs) const { obs.gamma = loads(obs.timestamps).gamma; }

std::vector<std::size_t> columns_in_window(const ObservationSet& obs, const TimeWindow& window) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < obs.timestamps.size(); ++k) {
    if (window.contains(obs.timestamps[k])) out.push_back(k);
  }
  return out;
}

ObservationSet select_columns(const ObservationSet& obs, const std::vector<std::size_t>& columns) {
  ObservationSet out;
  out.layout = obs.layout;
  out.sigma_e = obs.sigma_e;
  out.readings.resize(obs.readings.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out.readings.col(static_cast<Eigen::Index>(i)) = obs.readings.col(static_cast<Eigen::Index>(columns[i]));
    out.timestamps.push_back(obs.timestamps[columns[i]]);
    if (!obs.gamma.empty()) out.gamma.push_back(obs.gamma[columns[i]]);
  }
  return out;
}

std::size_t nearest_column(const std::vector<double>& timestamps, double t) {
  if (timestamps.empty()) throw ValidationError("no instants to choose from");
  std::size_t best = 0;
  for (std::size_t k = 1; k < timestamps.size(); ++k) {
    if (std::abs(timestamps[k] - t) < std::abs(timestamps[best] - t)) best = k;
  }
  return best;
}

InferenceProblem DigitalTwin::prepare(const ObservationSet& recording, const TimeWindow& window, int stride,
                                      double sigma_e) const {
  if (stride < 1) throw ValidationError("stride must be >= 1");
  const LoadSeries series = loads(recording.timestamps);
  const auto in_window = columns_in_window(recording, window);
  std::vector<std::size_t> columns;
  for (std::size_t i = 0; i < in_window.size(); i += static_cast<std::size_t>(stride)) {
    if (series.gamma[in_window[i]] >= scenario_.gamma_min) columns.push_back(in_window[i]);
  }
  if (columns.empty()) throw ValidationError("empty effective observation window");

  InferenceProblem p;
  ObservationSet annotated = recording;
  annotated.gamma = series.gamma;
  annotated.sigma_e = sigma_e;
  p.observations = select_columns(annotated, columns);
  validate_observations(p.observations);
  p.priors = priors(series, columns);
  p.strain = strain_operator(recording.layout);
  p.columns = std::move(columns);
  return p;
}

}  // namespace twin
