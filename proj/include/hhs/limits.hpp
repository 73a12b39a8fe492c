#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>

namespace hhs {

/// Size caps. Exceeding one raises SizeLimitExceeded instead of silently
/// running an infeasible sweep.
struct Limits {
  /// Global vertex cap: all-pairs distances, products, generators.
  std::size_t max_vertices = 20000;
  /// Cap for the O(n^4) four-point and O(n^3) thin-triangle sweeps.
  std::size_t delta_vertices = 400;

  /// Defaults, with HHS_MAX_VERTICES overriding the global cap when set.
  static Limits from_env() {
    Limits limits;
    if (const char* value = std::getenv("HHS_MAX_VERTICES")) {
      try {
        auto parsed = std::stoull(value);
        if (parsed > 0) limits.max_vertices = static_cast<std::size_t>(parsed);
      } catch (...) {
        // unparsable override: keep the default
      }
    }
    return limits;
  }
};

}  // namespace hhs
