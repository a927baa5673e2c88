#include "twin/log.hpp"

#include <cstdlib>
#include <string_view>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace twin {

namespace {

spdlog::level::level_enum level_from_env() {
  const char* env = std::getenv("TWIN_LOG");
  if (env == nullptr) return spdlog::level::err;
  const std::string_view v(env);
  if (v == "debug") return spdlog::level::debug;
  if (v == "info") return spdlog::level::info;
  return spdlog::level::err;
}

}  // namespace

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = spdlog::stderr_color_mt("twin");
    l->set_pattern("[%l] %v");
    l->set_level(level_from_env());
    return l;
  }();
  return instance;
}

}  // namespace twin
