#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "twin/loading.hpp"
#include "twin/sensors.hpp"
#include "twin/statfem.hpp"

namespace twin {

/// Round-trip decimal form (17 significant digits).
std::string format_double(double v);

/// Splits one CSV line on commas, trimming blanks. No quoting.
std::vector<std::string> split_csv_line(const std::string& line);
/// Strict full-string parse; throws ValidationError naming `what`.
double parse_double(const std::string& s, const std::string& what);
int parse_int(const std::string& s, const std::string& what);

/// Non-empty, non-comment ('#') lines of a CSV stream.
std::vector<std::vector<std::string>> read_csv_rows(std::istream& in);

/// `id,x,y,fiber,girder`; fiber is top|bottom, girder is the member id (-1 = any).
void write_sensor_layout(std::ostream& out, const SensorLayout& layout);
SensorLayout read_sensor_layout(std::istream& in);
SensorLayout load_sensor_layout(const std::filesystem::path& path);

/// `t,s<ID>...`, one row per instant, time in s, strain in microstrain.
void write_observation_csv(std::ostream& out, const ObservationSet& obs);
/// Columns are matched to `layout` by sensor id; every layout sensor must be present.
ObservationSet read_observation_csv(std::istream& in, const SensorLayout& layout);
ObservationSet load_observation_csv(const std::filesystem::path& path, const SensorLayout& layout);

/// `t,f_norm,gamma`.
void write_load_series_csv(std::ostream& out, const LoadSeries& series);

}  // namespace twin
