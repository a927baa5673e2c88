#include "inputs.hpp"

#include <system_error>

#include "twin/errors.hpp"
#include "twin/io.hpp"

namespace twin::cli {

GrillageModel model_or_default(const std::string& path) {
  if (path.empty()) return make_two_girder(default_bridge_template());
  return load_model(path);
}

ScenarioConfig scenario_or_default(const std::string& path) {
  if (path.empty()) return default_scenario();
  return load_scenario(path);
}

SensorLayout sensors_or_default(const std::string& path) {
  if (path.empty()) return sensor_line(kEastGirder, 0.0, 13.42, 20, 1.0, true, true);
  return load_sensor_layout(path);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file " + path.generic_string());
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw IoError("failed writing " + path.generic_string());
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.generic_string() + ": " + ec.message());
}

PointEstimate read_point_estimate(const std::string& file_or_inline) {
  PointEstimate p;
  std::error_code ec;
  if (std::filesystem::is_regular_file(file_or_inline, ec)) {
    std::ifstream in(file_or_inline);
    if (!in) throw IoError("cannot open " + file_or_inline);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
      p.w.rho = doc.at("rho").get<double>();
      p.w.sigma_d = doc.at("sigma_d").get<double>() * kMicrostrain;
      p.w.ell_d = doc.at("ell_d").get<double>();
      if (doc.contains("sigma_e")) p.sigma_e = doc.at("sigma_e").get<double>() * kMicrostrain;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(file_or_inline + ": " + e.what());
    }
  } else {
    const auto fields = split_csv_line(file_or_inline);
    if (fields.size() != 3) {
      throw ValidationError("w-star must be a JSON file or 'rho,sigma_d,ell_d' (sigma_d in microstrain)");
    }
    p.w.rho = parse_double(fields[0], "w-star rho");
    p.w.sigma_d = parse_double(fields[1], "w-star sigma_d") * kMicrostrain;
    p.w.ell_d = parse_double(fields[2], "w-star ell_d");
  }
  if (!p.w.positive()) throw ValidationError("w-star components must be positive");
  return p;
}

}  // namespace twin::cli
