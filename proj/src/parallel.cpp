#include "freelip/parallel.hpp"

#include <cstdlib>
#include <string>

namespace freelip {

unsigned thread_budget() {
  if (const char* env = std::getenv("FREELIP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace freelip
