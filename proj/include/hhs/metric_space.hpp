#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hhs/error.hpp"
#include "hhs/limits.hpp"
#include "hhs/rational.hpp"

namespace hhs {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  Rational weight{1};

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Outgoing adjacency entry. Weights are stored scaled by the space's common
/// denominator so every distance is an exact integer internally.
struct Arc {
  Vertex to = 0;
  std::int64_t scaled_weight = 1;
};

/// A finite connected weighted graph with its shortest-path metric.
///
/// Immutable after construction. Copies share the same state, including the
/// lazily computed all-pairs distance matrix, which is filled at most once
/// under a std::call_once guard and is therefore safe to query concurrently.
class MetricSpace {
 public:
  /// The one-point space.
  MetricSpace() : MetricSpace(build(1, {}, "point")) {}

  static MetricSpace build(std::size_t n, std::vector<Edge> edges, std::string label = {},
                           const Limits& limits = Limits::from_env()) {
    if (n == 0) throw Error(ErrorCode::InvalidVertex, "a metric space needs at least one vertex");
    if (n > std::numeric_limits<Vertex>::max()) {
      throw Error(ErrorCode::SizeLimitExceeded, "vertex count does not fit the vertex id type");
    }
    auto impl = std::make_shared<Impl>();
    impl->n = n;
    impl->label = std::move(label);
    impl->max_vertices = limits.max_vertices;

    std::int64_t scale = 1;
    for (auto& e : edges) {
      if (e.u >= n || e.v >= n) {
        throw Error(ErrorCode::InvalidEdge, "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                                ") has an endpoint outside 0.." + std::to_string(n - 1));
      }
      if (e.u == e.v) throw Error(ErrorCode::InvalidEdge, "self-loop at vertex " + std::to_string(e.u));
      if (e.weight <= 0) {
        throw Error(ErrorCode::InvalidEdge, "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                                ") has nonpositive weight " + to_string(e.weight));
      }
      if (e.u > e.v) std::swap(e.u, e.v);
      scale = std::lcm(scale, e.weight.denominator());
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
        throw Error(ErrorCode::InvalidEdge,
                    "duplicate edge (" + std::to_string(edges[i].u) + ", " + std::to_string(edges[i].v) + ")");
      }
    }
    impl->scale = scale;
    impl->unit = true;

    std::vector<std::size_t> degree(n + 1, 0);
    for (const auto& e : edges) {
      ++degree[e.u + 1];
      ++degree[e.v + 1];
    }
    std::partial_sum(degree.begin(), degree.end(), degree.begin());
    impl->offsets = degree;
    impl->arcs.resize(2 * edges.size());
    std::vector<std::size_t> fill(degree.begin(), degree.end() - 1);
    for (const auto& e : edges) {
      auto scaled = e.weight.numerator() * (scale / e.weight.denominator());
      if (scaled != 1) impl->unit = false;
      impl->arcs[fill[e.u]++] = Arc{e.v, scaled};
      impl->arcs[fill[e.v]++] = Arc{e.u, scaled};
    }
    for (std::size_t v = 0; v < n; ++v) {
      std::sort(impl->arcs.begin() + static_cast<std::ptrdiff_t>(impl->offsets[v]),
                impl->arcs.begin() + static_cast<std::ptrdiff_t>(impl->offsets[v + 1]),
                [](const Arc& a, const Arc& b) { return a.to < b.to; });
    }
    impl->edges = std::move(edges);

    MetricSpace space(std::move(impl));
    auto reached = space.reachable_from(0);
    if (reached != n) {
      throw Error(ErrorCode::DisconnectedGraph, "only " + std::to_string(reached) + " of " + std::to_string(n) +
                                                    " vertices are reachable from vertex 0");
    }
    return space;
  }

  std::size_t size() const noexcept { return impl_->n; }
  const std::string& label() const noexcept { return impl_->label; }
  /// Edges normalized to u < v and sorted.
  const std::vector<Edge>& edges() const noexcept { return impl_->edges; }
  bool unit_weights() const noexcept { return impl_->unit; }
  /// Common denominator of all edge weights.
  std::int64_t scale() const noexcept { return impl_->scale; }
  std::size_t max_vertices() const noexcept { return impl_->max_vertices; }

  /// Neighbors of v in increasing id order.
  std::span<const Arc> neighbors(Vertex v) const {
    check_vertex(v);
    return {impl_->arcs.data() + impl_->offsets[v], impl_->offsets[v + 1] - impl_->offsets[v]};
  }

  void check_vertex(Vertex v) const {
    if (v >= impl_->n) {
      throw Error(ErrorCode::InvalidVertex,
                  "vertex " + std::to_string(v) + " is not in " + (label().empty() ? "the space" : label()) +
                      " (size " + std::to_string(impl_->n) + ")");
    }
  }

  /// Row-major matrix of distances multiplied by scale().
  const std::vector<std::int64_t>& scaled_distances() const {
    std::call_once(impl_->once, [this] { impl_->compute_distances(); });
    return impl_->dist;
  }

  std::int64_t scaled_distance(Vertex u, Vertex v) const {
    return scaled_distances()[static_cast<std::size_t>(u) * impl_->n + v];
  }

  Rational distance(Vertex u, Vertex v) const {
    check_vertex(u);
    check_vertex(v);
    return Rational(scaled_distance(u, v), impl_->scale);
  }

  Rational diameter() const {
    const auto& d = scaled_distances();
    return Rational(*std::max_element(d.begin(), d.end()), impl_->scale);
  }

  friend bool operator==(const MetricSpace& a, const MetricSpace& b) {
    return a.size() == b.size() && a.label() == b.label() && a.edges() == b.edges();
  }

 private:
  struct Impl {
    std::size_t n = 0;
    std::string label;
    std::vector<Edge> edges;
    std::vector<std::size_t> offsets;
    std::vector<Arc> arcs;
    std::int64_t scale = 1;
    bool unit = true;
    std::size_t max_vertices = 0;
    std::once_flag once;
    std::vector<std::int64_t> dist;

    void compute_distances() {
      if (n > max_vertices) {
        throw Error(ErrorCode::SizeLimitExceeded, "all-pairs distances refused: " + std::to_string(n) +
                                                      " vertices exceeds the cap of " +
                                                      std::to_string(max_vertices));
      }
      std::vector<std::int64_t> result(n * n, -1);
      for (std::size_t s = 0; s < n; ++s) {
        std::int64_t* row = result.data() + s * n;
        if (unit) {
          bfs_row(static_cast<Vertex>(s), row);
        } else {
          dijkstra_row(static_cast<Vertex>(s), row);
        }
      }
      dist = std::move(result);
    }

    void bfs_row(Vertex source, std::int64_t* row) const {
      std::deque<Vertex> queue{source};
      row[source] = 0;
      while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) {
          Vertex w = arcs[i].to;
          if (row[w] < 0) {
            row[w] = row[u] + 1;
            queue.push_back(w);
          }
        }
      }
    }

    void dijkstra_row(Vertex source, std::int64_t* row) const {
      using Item = std::pair<std::int64_t, Vertex>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      row[source] = 0;
      heap.emplace(0, source);
      while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d != row[u]) continue;
        for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) {
          const Arc& arc = arcs[i];
          std::int64_t candidate = d + arc.scaled_weight;
          if (row[arc.to] < 0 || candidate < row[arc.to]) {
            row[arc.to] = candidate;
            heap.emplace(candidate, arc.to);
          }
        }
      }
    }
  };

  explicit MetricSpace(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

  std::size_t reachable_from(Vertex source) const {
    std::vector<char> seen(impl_->n, 0);
    std::vector<Vertex> stack{source};
    seen[source] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (const Arc& arc : neighbors(u)) {
        if (!seen[arc.to]) {
          seen[arc.to] = 1;
          ++count;
          stack.push_back(arc.to);
        }
      }
    }
    return count;
  }

  std::shared_ptr<Impl> impl_;
};

inline MetricSpace build_graph(std::size_t n, std::vector<Edge> edges, std::string label = {},
                               const Limits& limits = Limits::from_env()) {
  return MetricSpace::build(n, std::move(edges), std::move(label), limits);
}

/// Exact all-pairs matrix, scaled by space.scale(); computed once and cached.
inline const std::vector<std::int64_t>& all_pairs_distances(const MetricSpace& space) {
  return space.scaled_distances();
}

/// Deterministic shortest path: at each step take the smallest-id neighbor
/// that remains on some shortest path to the target.
inline std::vector<Vertex> canonical_geodesic(const MetricSpace& space, Vertex u, Vertex v) {
  space.check_vertex(u);
  space.check_vertex(v);
  std::vector<Vertex> path{u};
  Vertex current = u;
  while (current != v) {
    const auto remaining = space.scaled_distance(current, v);
    for (const Arc& arc : space.neighbors(current)) {
      if (arc.scaled_weight + space.scaled_distance(arc.to, v) == remaining) {
        current = arc.to;
        break;
      }
    }
    path.push_back(current);
  }
  return path;
}

struct GeodesicList {
  std::vector<std::vector<Vertex>> paths;
  bool truncated = false;
};

/// All shortest u-v paths in lexicographic order, stopping after `cap`.
/// `truncated` is set iff at least one further path exists.
inline GeodesicList enumerate_geodesics(const MetricSpace& space, Vertex u, Vertex v, std::size_t cap) {
  space.check_vertex(u);
  space.check_vertex(v);
  if (cap == 0) throw Error(ErrorCode::GeodesicCapExceeded, "geodesic cap must be at least 1");
  GeodesicList result;
  std::vector<Vertex> path{u};
  std::function<bool(Vertex)> extend = [&](Vertex current) -> bool {
    if (current == v) {
      if (result.paths.size() == cap) {
        result.truncated = true;
        return false;
      }
      result.paths.push_back(path);
      return true;
    }
    const auto remaining = space.scaled_distance(current, v);
    for (const Arc& arc : space.neighbors(current)) {
      if (arc.scaled_weight + space.scaled_distance(arc.to, v) != remaining) continue;
      path.push_back(arc.to);
      bool keep_going = extend(arc.to);
      path.pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  extend(u);
  return result;
}

/// Vertices lying on at least one shortest a-b path, in increasing id order.
inline std::vector<Vertex> geodesic_interval(const MetricSpace& space, Vertex a, Vertex b) {
  space.check_vertex(a);
  space.check_vertex(b);
  std::vector<Vertex> result;
  const auto total = space.scaled_distance(a, b);
  for (Vertex q = 0; q < space.size(); ++q) {
    if (space.scaled_distance(a, q) + space.scaled_distance(q, b) == total) result.push_back(q);
  }
  return result;
}

struct Projection {
  Vertex canonical = 0;
  /// Every target vertex at minimal distance, increasing ids.
  std::vector<Vertex> full_set;
};

inline Projection closest_point_projection(const MetricSpace& space, Vertex x, std::span<const Vertex> target) {
  space.check_vertex(x);
  if (target.empty()) throw Error(ErrorCode::EmptyTarget, "closest-point projection onto an empty set");
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<Vertex> argmin;
  for (Vertex t : target) {
    space.check_vertex(t);
    auto d = space.scaled_distance(x, t);
    if (d < best) {
      best = d;
      argmin.assign(1, t);
    } else if (d == best) {
      argmin.push_back(t);
    }
  }
  std::sort(argmin.begin(), argmin.end());
  argmin.erase(std::unique(argmin.begin(), argmin.end()), argmin.end());
  return Projection{argmin.front(), std::move(argmin)};
}

/// Cartesian product with the l1 (sum) metric. Vertex (i, j) gets id
/// i * b.size() + j.
inline MetricSpace l1_product(const MetricSpace& a, const MetricSpace& b, const Limits& limits = Limits::from_env()) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  if (na > limits.max_vertices / nb) {
    throw Error(ErrorCode::SizeLimitExceeded, "product of " + std::to_string(na) + " and " + std::to_string(nb) +
                                                  " vertices exceeds the cap of " +
                                                  std::to_string(limits.max_vertices));
  }
  auto id = [nb](std::size_t i, std::size_t j) { return static_cast<Vertex>(i * nb + j); };
  std::vector<Edge> edges;
  edges.reserve(a.edges().size() * nb + b.edges().size() * na);
  for (const auto& e : a.edges()) {
    for (std::size_t j = 0; j < nb; ++j) edges.push_back({id(e.u, j), id(e.v, j), e.weight});
  }
  for (const auto& e : b.edges()) {
    for (std::size_t i = 0; i < na; ++i) edges.push_back({id(i, e.u), id(i, e.v), e.weight});
  }
  std::string label = a.label() + "x" + b.label();
  return MetricSpace::build(na * nb, std::move(edges), std::move(label), limits);
}

/// Path with `length` unit edges (length + 1 vertices, ids in order).
inline MetricSpace path_of_length(std::size_t length, const Limits& limits = Limits::from_env()) {
  if (length + 1 > limits.max_vertices) {
    throw Error(ErrorCode::SizeLimitExceeded, "path of length " + std::to_string(length) + " exceeds the cap");
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < length; ++i) {
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1), Rational(1)});
  }
  return MetricSpace::build(length + 1, std::move(edges), "P" + std::to_string(length), limits);
}

}  // namespace hhs
