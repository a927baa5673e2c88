#include "manifest.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>

#include <Eigen/Core>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include "twin/errors.hpp"

namespace twin::cli {

namespace {

nlohmann::json versions() {
  return {{"twin", TWIN_VERSION},
          {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
          {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                        NLOHMANN_JSON_VERSION_PATCH)},
          {"fmt", FMT_VERSION}};
}

}  // namespace

std::string creation_time() {
  std::int64_t seconds = 0;
  const char* env = std::getenv("SOURCE_DATE_EPOCH");
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    seconds = std::strtoll(env, &end, 10);
    if (*end != '\0') throw ValidationError("SOURCE_DATE_EPOCH must be an integer");
  } else {
    seconds = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
                  .count();
  }
  const std::chrono::sys_seconds tp{std::chrono::seconds(seconds)};
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", tp);
}

RunManifest::RunManifest(std::string command, std::vector<std::string> arguments) {
  doc_["command"] = std::move(command);
  doc_["arguments"] = std::move(arguments);
  doc_["versions"] = versions();
  doc_["configs"] = nlohmann::json::object();
  doc_["seeds"] = nlohmann::json::object();
  doc_["parameters"] = nlohmann::json::object();
  doc_["outputs"] = nlohmann::json::array();
}

void RunManifest::config(const std::string& key, const std::filesystem::path& path) {
  doc_["configs"][key] = path.generic_string();
}

void RunManifest::seed(const std::string& key, std::uint64_t value) { doc_["seeds"][key] = value; }

void RunManifest::parameter(const std::string& key, nlohmann::json value) {
  doc_["parameters"][key] = std::move(value);
}

void RunManifest::output(const std::filesystem::path& path) {
  std::error_code ec;
  const auto bytes = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("artifact was not written: " + path.generic_string());
  doc_["outputs"].push_back({{"path", path.generic_string()}, {"bytes", bytes}});
}

void RunManifest::write(const std::filesystem::path& path) {
  doc_["created"] = creation_time();
  doc_["manifest"] = path.generic_string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest " + path.generic_string());
  out << doc_.dump(2) << '\n';
  if (!out) throw IoError("failed writing manifest " + path.generic_string());
}

}  // namespace twin::cli
