#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "hhs/error.hpp"
#include "hhs/limits.hpp"
#include "hhs/metric_space.hpp"
#include "hhs/parallel.hpp"
#include "hhs/rational.hpp"

namespace hhs {

struct DeltaValue {
  Rational delta{0};
  /// Lexicographically smallest tuple attaining delta; empty when the space
  /// has too few vertices to form one.
  std::vector<Vertex> witness;
};

struct DeltaReport {
  DeltaValue four_point;
  DeltaValue thin_triangle;
};

namespace detail {

inline void require_delta_size(const MetricSpace& space, const Limits& limits, const char* what) {
  if (space.size() > limits.delta_vertices) {
    throw Error(ErrorCode::SizeLimitExceeded, std::string(what) + " refused: " + std::to_string(space.size()) +
                                                  " vertices exceeds the delta cap of " +
                                                  std::to_string(limits.delta_vertices));
  }
}

struct ScaledBest {
  std::int64_t value = -1;
  std::vector<Vertex> witness;
};

inline void keep_larger(ScaledBest& acc, const ScaledBest& candidate) {
  if (candidate.value > acc.value) acc = candidate;
}

}  // namespace detail

/// Gromov four-point delta: max over quadruples of (M1 - M2) / 2 where
/// M1 >= M2 are the two largest of the three pairwise distance sums.
inline DeltaValue four_point_delta(const MetricSpace& space, const Limits& limits = Limits::from_env()) {
  detail::require_delta_size(space, limits, "four-point sweep");
  const std::size_t n = space.size();
  if (n < 4) return {};
  const auto& d = space.scaled_distances();
  auto at = [&](std::size_t i, std::size_t j) { return d[i * n + j]; };

  auto sweep = [&](std::size_t begin, std::size_t end) {
    detail::ScaledBest best;
    for (std::size_t a = begin; a < end; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const auto ab = at(a, b);
        for (std::size_t c = b + 1; c < n; ++c) {
          const auto ac = at(a, c);
          const auto bc = at(b, c);
          for (std::size_t e = c + 1; e < n; ++e) {
            std::int64_t s1 = ab + at(c, e);
            std::int64_t s2 = ac + at(b, e);
            std::int64_t s3 = at(a, e) + bc;
            // (largest - middle) of the three sums
            std::int64_t hi = std::max({s1, s2, s3});
            std::int64_t lo = std::min({s1, s2, s3});
            std::int64_t mid = s1 + s2 + s3 - hi - lo;
            std::int64_t gap = hi - mid;
            if (gap > best.value) {
              best.value = gap;
              best.witness = {static_cast<Vertex>(a), static_cast<Vertex>(b), static_cast<Vertex>(c),
                              static_cast<Vertex>(e)};
            }
          }
        }
      }
    }
    return best;
  };
  auto best = detail::ordered_parallel_reduce(n, detail::ScaledBest{}, sweep, detail::keep_larger);
  return {Rational(best.value, 2 * space.scale()), best.witness};
}

/// Thin-triangle delta using one canonical geodesic per vertex pair (always
/// traversed from the smaller id). Vertices of a side are the sample points;
/// the value is the largest distance from such a point to the union of the
/// other two sides. Because geodesics are fixed rather than ranging over all
/// choices, this is a diagnostic, not the exact thin-triangle constant.
inline DeltaValue thin_triangle_delta_canonical(const MetricSpace& space, const Limits& limits = Limits::from_env()) {
  detail::require_delta_size(space, limits, "thin-triangle sweep");
  const std::size_t n = space.size();
  if (n < 3) return {};
  const auto& d = space.scaled_distances();

  std::vector<std::vector<Vertex>> geodesics(n * n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) geodesics[u * n + v] = canonical_geodesic(space, u, v);
  }
  auto side = [&](std::size_t u, std::size_t v) -> const std::vector<Vertex>& { return geodesics[u * n + v]; };

  auto sweep = [&](std::size_t begin, std::size_t end) {
    detail::ScaledBest best;
    std::vector<std::uint64_t> stamp(n, 0);
    std::uint64_t epoch = 0;
    // farthest point of `probe` from the union of `other1` and `other2`;
    // gives up as soon as it cannot beat `floor`
    auto side_excess = [&](const std::vector<Vertex>& probe, const std::vector<Vertex>& other1,
                           const std::vector<Vertex>& other2, std::int64_t floor) {
      ++epoch;
      for (Vertex q : other1) stamp[q] = epoch;
      for (Vertex q : other2) stamp[q] = epoch;
      std::int64_t worst = -1;
      for (Vertex p : probe) {
        if (stamp[p] == epoch) continue;
        std::int64_t nearest = std::numeric_limits<std::int64_t>::max();
        const std::int64_t* row = d.data() + static_cast<std::size_t>(p) * n;
        for (Vertex q : other1) nearest = std::min(nearest, row[q]);
        if (nearest <= floor) continue;
        for (Vertex q : other2) nearest = std::min(nearest, row[q]);
        if (nearest <= floor) continue;
        worst = std::max(worst, nearest);
        floor = nearest;
      }
      return worst;
    };
    for (std::size_t a = begin; a < end; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        for (std::size_t c = b + 1; c < n; ++c) {
          if (best.value < 0) {
            best.value = 0;
            best.witness = {static_cast<Vertex>(a), static_cast<Vertex>(b), static_cast<Vertex>(c)};
          }
          const auto& ab = side(a, b);
          const auto& bc = side(b, c);
          const auto& ac = side(a, c);
          std::int64_t value = side_excess(ab, bc, ac, best.value);
          value = std::max(value, side_excess(bc, ab, ac, std::max(value, best.value)));
          value = std::max(value, side_excess(ac, ab, bc, std::max(value, best.value)));
          if (value > best.value) {
            best.value = value;
            best.witness = {static_cast<Vertex>(a), static_cast<Vertex>(b), static_cast<Vertex>(c)};
          }
        }
      }
    }
    return best;
  };
  auto best = detail::ordered_parallel_reduce(n, detail::ScaledBest{}, sweep, detail::keep_larger);
  if (best.value < 0) return {};
  return {Rational(best.value, space.scale()), best.witness};
}

inline DeltaReport delta_report(const MetricSpace& space, const Limits& limits = Limits::from_env()) {
  return {four_point_delta(space, limits), thin_triangle_delta_canonical(space, limits)};
}

}  // namespace hhs
