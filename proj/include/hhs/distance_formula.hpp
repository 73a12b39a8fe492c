#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "hhs/error.hpp"
#include "hhs/metric_space.hpp"
#include "hhs/rational.hpp"
#include "hhs/structure.hpp"

namespace hhs {

using VertexPair = std::pair<Vertex, Vertex>;

/// Sum over all domains of the coordinate distances.
inline Rational df_sum(const HHSStructure& s, Vertex x, Vertex y) {
  s.total_space().check_vertex(x);
  s.total_space().check_vertex(y);
  Rational total(0);
  for (DomainId u = 0; u < s.domain_count(); ++u) {
    const auto& proj = s.projection(u);
    total += s.domain_space(u).distance(proj[x], proj[y]);
  }
  return total;
}

/// Same sum keeping only terms >= threshold.
inline Rational df_thresholded(const HHSStructure& s, Vertex x, Vertex y, const Rational& threshold) {
  if (threshold < 0) throw Error(ErrorCode::ConfigValidation, "distance formula threshold must be nonnegative");
  s.total_space().check_vertex(x);
  s.total_space().check_vertex(y);
  Rational total(0);
  for (DomainId u = 0; u < s.domain_count(); ++u) {
    const auto& proj = s.projection(u);
    Rational term = s.domain_space(u).distance(proj[x], proj[y]);
    if (term >= threshold) total += term;
  }
  return total;
}

struct QIFit {
  Rational multiplicative{1};
  Rational additive{0};
  Rational threshold{0};
  /// max over pairs of (sum / K - d_X), clamped at 0.
  Rational max_lower_violation{0};
  /// max over pairs of (d_X - K * sum), clamped at 0.
  Rational max_upper_violation{0};
  std::size_t pairs = 0;

  friend bool operator==(const QIFit&, const QIFit&) = default;
};

/// Every unordered pair x < y of the total space.
inline std::vector<VertexPair> all_vertex_pairs(const MetricSpace& space) {
  std::vector<VertexPair> pairs;
  const auto n = static_cast<Vertex>(space.size());
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
  }
  return pairs;
}

/// Deterministic sample of `count` distinct pairs x < y (all pairs if fewer
/// exist), sorted.
inline std::vector<VertexPair> sample_vertex_pairs(const MetricSpace& space, std::size_t count, std::uint64_t seed) {
  auto pairs = all_vertex_pairs(space);
  if (pairs.size() <= count) return pairs;
  std::mt19937_64 rng(seed);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(count);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

/// Fits (1/K) S - C <= d_X <= K S + C with S the thresholded sum. K is the
/// largest ratio max(S/d, d/S) over pairs where both are positive; C is the
/// largest residual left at that K.
inline QIFit fit_qi_constants(const HHSStructure& s, std::span<const VertexPair> pairs, const Rational& threshold) {
  if (pairs.empty()) throw Error(ErrorCode::DegeneratePairs, "no pairs to fit");
  struct Sample {
    Rational d;
    Rational sum;
  };
  std::vector<Sample> samples;
  samples.reserve(pairs.size());
  bool any_distance = false;
  bool any_comparable = false;
  Rational k(1);
  for (auto [x, y] : pairs) {
    Sample sample{s.total_space().distance(x, y), df_thresholded(s, x, y, threshold)};
    if (sample.d > 0) {
      any_distance = true;
      if (sample.sum > 0) {
        any_comparable = true;
        k = std::max({k, sample.sum / sample.d, sample.d / sample.sum});
      }
    }
    samples.push_back(sample);
  }
  if (!any_distance) throw Error(ErrorCode::DegeneratePairs, "every pair has d_X = 0");
  if (!any_comparable) {
    throw Error(ErrorCode::DegeneratePairs, "no pair has both d_X > 0 and a positive thresholded sum");
  }
  QIFit fit;
  fit.multiplicative = k;
  fit.threshold = threshold;
  fit.pairs = samples.size();
  for (const auto& sample : samples) {
    fit.max_lower_violation = std::max(fit.max_lower_violation, sample.sum / k - sample.d);
    fit.max_upper_violation = std::max(fit.max_upper_violation, sample.d - k * sample.sum);
  }
  fit.additive = std::max(fit.max_lower_violation, fit.max_upper_violation);
  return fit;
}

inline QIFit fit_qi_constants(const HHSStructure& s, const Rational& threshold) {
  auto pairs = all_vertex_pairs(s.total_space());
  return fit_qi_constants(s, pairs, threshold);
}

/// Vertices z whose every coordinate z_U lies within `slack` of some
/// geodesic of C(U) from x_U to y_U. The union of all such geodesics is the
/// geodesic interval, so membership is decided without enumerating paths.
inline std::vector<Vertex> coarse_hull(const HHSStructure& s, Vertex x, Vertex y, const Rational& slack) {
  if (slack < 0) throw Error(ErrorCode::ConfigValidation, "hull slack must be nonnegative");
  const auto& X = s.total_space();
  X.check_vertex(x);
  X.check_vertex(y);
  std::vector<char> inside(X.size(), 1);
  for (DomainId u = 0; u < s.domain_count(); ++u) {
    const auto& space = s.domain_space(u);
    const auto& proj = s.projection(u);
    auto interval = geodesic_interval(space, proj[x], proj[y]);
    std::vector<char> near(space.size(), 0);
    for (Vertex c = 0; c < space.size(); ++c) {
      for (Vertex q : interval) {
        if (space.distance(c, q) <= slack) {
          near[c] = 1;
          break;
        }
      }
    }
    for (Vertex z = 0; z < X.size(); ++z) {
      if (!near[proj[z]]) inside[z] = 0;
    }
  }
  std::vector<Vertex> hull;
  for (Vertex z = 0; z < X.size(); ++z) {
    if (inside[z]) hull.push_back(z);
  }
  return hull;
}

}  // namespace hhs
