#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "twin/fem.hpp"
#include "twin/model.hpp"

namespace twin {

struct TimeWindow {
  double begin = 0.0;  // s
  double end = 0.0;    // s

  bool contains(double t, double slack = 1e-9) const { return t >= begin - slack && t <= end + slack; }
};

/// Train moving in +x; the head reaches x = 0 at `entry_time`.
struct TrainScenario {
  std::vector<double> axle_offsets;  // m behind the head, strictly increasing
  double train_length = 0.0;         // m, head to tail
  double wheel_load = 0.0;           // N per wheel
  double speed = 0.0;                // m/s
  double track_y = 0.0;              // m, lateral position of the track centreline
  double gauge = 1.435;              // m, lateral wheel spacing
  double entry_time = 0.0;           // s
  double time_step = 0.0;            // s
  TimeWindow time_window;            // s
};

struct RandomLoadSpec {
  double sigma_r = 1000.0;       // Pa
  double length_scale_r = 1.0;   // m
  int quadrature_order = 4;      // Gauss points per element and direction
};

struct LoadSeries {
  std::vector<double> timestamps;  // s
  Eigen::MatrixXd forces;          // n_u x n_o, free dofs, N
  std::vector<double> gamma;       // in [0, 1]
  std::vector<double> force_norm;  // vertical-force L2 norm per instant, N

  std::size_t size() const { return timestamps.size(); }
};

/// Axle offsets of a four-car electric multiple unit, 81.47 m long.
std::vector<double> four_car_emu_axles();
/// Bundled passenger train: 52 kN per wheel at 131 km/h on the deck centreline.
TrainScenario default_train(double track_y = 3.65);

void validate_scenario(const TrainScenario& s);

/// Time from the head entering to the tail leaving a span.
double crossing_duration(const TrainScenario& s, double span);

/// Positions (m) of the axles on [0, span] at time t.
std::vector<double> axle_positions(const TrainScenario& s, double span, double t);

/// Uniform grid t0 + k*dt covering the window (inclusive of both ends).
std::vector<double> time_grid(const TimeWindow& window, double step);

struct PointLoad {
  double x = 0.0;
  double y = 0.0;
  double magnitude = 0.0;  // N, downward positive
};

/// Wheel contact points of the given axle positions.
std::vector<PointLoad> wheel_loads(const TrainScenario& s, const std::vector<double>& axles);

/// Work-equivalent nodal forces for downward point loads, over all nodal dofs
/// (reactions at constrained dofs kept). Loads between transverse members are
/// shared by the two adjacent members in proportion to proximity.
Eigen::VectorXd nodal_loads_full(const GrillageModel& model, const std::vector<PointLoad>& loads);
/// Same, restricted to free dofs.
Eigen::VectorXd nodal_loads(const GrillageModel& model, const DofMap& dofs, const std::vector<PointLoad>& loads);

/// Mean force vectors and scale factors on the scenario time grid.
LoadSeries load_series(const GrillageModel& model, const DofMap& dofs, const TrainScenario& s);
/// Same, at explicit instants. gamma is normalised over these instants.
LoadSeries load_series_at(const GrillageModel& model, const DofMap& dofs, const TrainScenario& s,
                          const std::vector<double>& times);

/// Gauss-Legendre nodes and weights on [0, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order);

/// Covariance of the consistent vertical nodal forces produced by a zero-mean
/// squared-exponential pressure field on all loaded elements.
Eigen::MatrixXd force_covariance(const GrillageModel& model, const DofMap& dofs, const RandomLoadSpec& spec);

/// Scenario document: train, windows, random load, instant filter.
struct ScenarioConfig {
  TrainScenario train;
  RandomLoadSpec random_load;
  TimeWindow analysis_window{1.0, 3.0};
  TimeWindow quiescent_window{0.0, 0.5};
  double gamma_min = 0.05;
};

inline constexpr int kScenarioSchemaVersion = 1;

ScenarioConfig default_scenario();
ScenarioConfig build_scenario(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& s);

}  // namespace twin
