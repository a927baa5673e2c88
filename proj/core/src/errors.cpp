#include "twin/errors.hpp"

namespace twin {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::validation:
      return "validation";
    case ErrorKind::numerical:
      return "numerical";
    case ErrorKind::io:
      return "io";
  }
  return "unknown";
}

}  // namespace twin
