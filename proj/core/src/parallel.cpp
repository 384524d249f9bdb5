#include "fngon/parallel.hpp"

#include <cstdlib>
#include <string>

namespace fngon {

std::size_t default_workers() {
  if (const char* env = std::getenv("FNGON_WORKERS"); env != nullptr && *env) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace fngon
