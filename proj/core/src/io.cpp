#include "twin/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "twin/errors.hpp"

namespace twin {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string field = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw ValidationError("invalid number '" + s + "' in " + what);
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw ValidationError("invalid integer '" + s + "' in " + what);
  return v;
}

std::vector<std::vector<std::string>> read_csv_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

void write_sensor_layout(std::ostream& out, const SensorLayout& layout) {
  out << "id,x,y,fiber,girder\n";
  for (const Sensor& s : layout.sensors) {
    out << s.id << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
        << (s.fiber == Fiber::top ? "top" : "bottom") << ',' << s.member << '\n';
  }
}

SensorLayout read_sensor_layout(std::istream& in) {
  const auto rows = read_csv_rows(in);
  if (rows.empty() || rows.front() != std::vector<std::string>{"id", "x", "y", "fiber", "girder"}) {
    throw ValidationError("sensor layout header must be 'id,x,y,fiber,girder'");
  }
  SensorLayout layout;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    const std::string where = "sensor layout row " + std::to_string(r);
    if (f.size() != 5) throw ValidationError(where + ": expected 5 fields");
    Sensor s;
    s.id = parse_int(f[0], where);
    s.x = parse_double(f[1], where);
    s.y = parse_double(f[2], where);
    if (f[3] == "top") {
      s.fiber = Fiber::top;
    } else if (f[3] == "bottom") {
      s.fiber = Fiber::bottom;
    } else {
      throw ValidationError(where + ": fiber must be top or bottom");
    }
    s.member = parse_int(f[4], where);
    layout.sensors.push_back(s);
  }
  validate_layout(layout);
  return layout;
}

SensorLayout load_sensor_layout(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sensor layout " + path.string());
  return read_sensor_layout(in);
}

void write_observation_csv(std::ostream& out, const ObservationSet& obs) {
  out << 't';
  for (const Sensor& s : obs.layout.sensors) out << ",s" << s.id;
  out << '\n';
  for (Eigen::Index k = 0; k < obs.instants(); ++k) {
    out << format_double(obs.timestamps[static_cast<std::size_t>(k)]);
    for (Eigen::Index r = 0; r < obs.sensors(); ++r) out << ',' << format_double(obs.readings(r, k));
    out << '\n';
  }
}

ObservationSet read_observation_csv(std::istream& in, const SensorLayout& layout) {
  const auto rows = read_csv_rows(in);
  if (rows.empty() || rows.front().empty() || rows.front().front() != "t") {
    throw ValidationError("observation header must start with 't'");
  }
  const auto& header = rows.front();
  std::map<int, std::size_t> column_of;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].size() < 2 || header[c][0] != 's') throw ValidationError("bad observation column '" + header[c] + "'");
    const int id = parse_int(header[c].substr(1), "observation header");
    if (!column_of.emplace(id, c).second) throw ValidationError("duplicate sensor column s" + std::to_string(id));
  }

  ObservationSet obs;
  obs.layout = layout;
  const auto n_o = static_cast<Eigen::Index>(rows.size() - 1);
  obs.readings.resize(static_cast<Eigen::Index>(layout.size()), n_o);
  std::vector<std::size_t> source;
  for (const Sensor& s : layout.sensors) {
    const auto it = column_of.find(s.id);
    if (it == column_of.end()) throw ValidationError("observations lack sensor s" + std::to_string(s.id));
    source.push_back(it->second);
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    const std::string where = "observation row " + std::to_string(r);
    if (f.size() != header.size()) throw ValidationError(where + ": field count differs from header");
    obs.timestamps.push_back(parse_double(f[0], where));
    for (std::size_t i = 0; i < source.size(); ++i) {
      obs.readings(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r - 1)) = parse_double(f[source[i]], where);
    }
  }
  for (std::size_t k = 1; k < obs.timestamps.size(); ++k) {
    if (!(obs.timestamps[k] > obs.timestamps[k - 1])) throw ValidationError("observation timestamps must increase");
  }
  return obs;
}

ObservationSet load_observation_csv(const std::filesystem::path& path, const SensorLayout& layout) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open observations " + path.string());
  return read_observation_csv(in, layout);
}

void write_load_series_csv(std::ostream& out, const LoadSeries& series) {
  out << "t,f_norm,gamma\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    out << format_double(series.timestamps[k]) << ',' << format_double(series.force_norm[k]) << ','
        << format_double(series.gamma[k]) << '\n';
  }
}

}  // namespace twin
