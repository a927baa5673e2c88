#pragma once

#include <memory>

namespace spdlog {
class logger;
}

namespace twin {

// Shared stderr logger. Level comes from TWIN_LOG (error|info|debug), default error.
std::shared_ptr<spdlog::logger> logger();

}  // namespace twin
