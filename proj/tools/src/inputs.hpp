#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "twin/model.hpp"
#include "twin/loading.hpp"
#include "twin/sensors.hpp"
#include "twin/statfem.hpp"

namespace twin::cli {

/// Built-in defaults apply when a path is empty.
GrillageModel model_or_default(const std::string& path);
ScenarioConfig scenario_or_default(const std::string& path);
/// Default: 20 top + 20 bottom sensors at 1 m on the east girder around midspan.
SensorLayout sensors_or_default(const std::string& path);

/// Binary output stream; throws IoError if the file cannot be created.
std::ofstream open_output(const std::filesystem::path& path);
/// Throws IoError if the stream went bad while writing.
void finish_output(std::ofstream& out, const std::filesystem::path& path);

/// Creates the directory (and parents); throws IoError on failure.
void ensure_directory(const std::filesystem::path& dir);

/// Point estimate read from a JSON file written by `infer`, or given inline as
/// "rho,sigma_d,ell_d" with sigma_d in microstrain.
struct PointEstimate {
  Hyperparameters w;
  std::optional<double> sigma_e;  // internal strain, when the file carries it
};
PointEstimate read_point_estimate(const std::string& file_or_inline);

/// 1.96, the two-sided 95% normal quantile used for every band.
inline constexpr double kBand95 = 1.96;

}  // namespace twin::cli
