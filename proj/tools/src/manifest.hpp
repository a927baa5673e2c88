#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace twin::cli {

/// Record of one command run: inputs, seeds, versions and every artifact written.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> arguments);

  void config(const std::string& key, const std::filesystem::path& path);
  void seed(const std::string& key, std::uint64_t value);
  void parameter(const std::string& key, nlohmann::json value);
  void output(const std::filesystem::path& path);

  /// Writes the manifest, recording its own path. Timestamp honours SOURCE_DATE_EPOCH.
  void write(const std::filesystem::path& path);

  const nlohmann::json& document() const { return doc_; }

 private:
  nlohmann::json doc_;
};

/// ISO-8601 UTC time of SOURCE_DATE_EPOCH when set, else of now.
std::string creation_time();

}  // namespace twin::cli
