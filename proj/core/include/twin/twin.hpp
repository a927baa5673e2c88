#pragma once

#include <vector>

#include <Eigen/Core>

#include "twin/fem.hpp"
#include "twin/loading.hpp"
#include "twin/model.hpp"
#include "twin/statfem.hpp"

namespace twin {

/// Everything needed for inference at one sensor layout.
struct InferenceProblem {
  ObservationSet observations;
  PriorSeries priors;
  StrainOperator strain;
  std::vector<std::size_t> columns;  // source columns of the selected instants
};

/// Deterministic structure + probabilistic loading, assembled once.
///
/// The displacement covariance is shared by all instants because the random
/// pressure field does not depend on the train position.
class DigitalTwin {
 public:
  DigitalTwin(GrillageModel model, ScenarioConfig scenario);

  const GrillageModel& model() const { return model_; }
  const ScenarioConfig& scenario() const { return scenario_; }
  const StiffnessMatrix& stiffness() const { return system_.stiffness; }
  const DofMap& dofs() const { return system_.dofs; }
  const Eigen::MatrixXd& force_covariance() const { return force_cov_; }
  const Eigen::MatrixXd& displacement_covariance() const { return displacement_cov_; }

  StrainOperator strain_operator(const SensorLayout& layout) const;

  /// Mean loads on the scenario record grid, or at explicit instants.
  LoadSeries loads() const;
  LoadSeries loads(const std::vector<double>& times) const;

  PriorSeries priors(const LoadSeries& loads) const;
  PriorSeries priors(const LoadSeries& loads, const std::vector<std::size_t>& columns) const;

  /// Fills obs.gamma from the load series at the observation timestamps.
  void annotate(ObservationSet& obs) const;

  /// Instants inside `window`, every `stride`-th, with gamma >= gamma_min.
  /// Throws ValidationError if nothing remains.
  InferenceProblem prepare(const ObservationSet& recording, const TimeWindow& window, int stride,
                           double sigma_e) const;

 private:
  GrillageModel model_;
  ScenarioConfig scenario_;
  AssembledSystem system_;
  Eigen::MatrixXd force_cov_;
  Eigen::MatrixXd displacement_cov_;
};

/// Columns of `obs` whose timestamps fall inside `window`.
std::vector<std::size_t> columns_in_window(const ObservationSet& obs, const TimeWindow& window);

/// Copy of `obs` restricted to `columns`.
ObservationSet select_columns(const ObservationSet& obs, const std::vector<std::size_t>& columns);

/// Nearest column to time t.
std::size_t nearest_column(const std::vector<double>& timestamps, double t);

}  // namespace twin
