#include "sphk/util.hpp"

#include <cstdlib>

namespace sphk {

std::size_t thread_budget() {
  static const std::size_t budget = [] {
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("SPHERE_KERNELS_THREADS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v >= 1) {
        return std::min<std::size_t>(hw, static_cast<std::size_t>(v));
      }
    }
    return hw;
  }();
  return budget;
}

}  // namespace sphk
