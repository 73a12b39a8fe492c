#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hhs/error.hpp"
#include "hhs/limits.hpp"
#include "hhs/metric_space.hpp"
#include "hhs/relation_axioms.hpp"
#include "hhs/structure.hpp"

namespace hhs {

// ---------------------------------------------------------------------------
// Tree of flats
// ---------------------------------------------------------------------------

struct TreeOfFlatsConfig {
  /// Flats are (2N+1)x(2N+1) l1 grids with coordinates in [-N, N]^2.
  int radius = 1;
  /// Levels of child flats below the root flat.
  int depth = 0;
  /// Lattice points of a flat that carry a unit edge to the origin of a
  /// child flat, in child-creation order.
  std::vector<std::pair<int, int>> spawn_points{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

  friend bool operator==(const TreeOfFlatsConfig&, const TreeOfFlatsConfig&) = default;
};

struct FlatInfo {
  std::optional<std::size_t> parent;
  /// Vertex of the parent flat joined to this flat's origin.
  std::optional<Vertex> attached_from;
  Vertex first_vertex = 0;
  int depth = 0;
};

/// Vertex numbering of a tree of flats: flat by flat in creation order,
/// then x-major within a flat.
struct FlatLayout {
  TreeOfFlatsConfig config;
  std::vector<FlatInfo> flats;

  int side() const { return 2 * config.radius + 1; }
  std::size_t flat_size() const { return static_cast<std::size_t>(side()) * side(); }

  Vertex vertex(std::size_t flat, int x, int y) const {
    const int n = config.radius;
    return flats.at(flat).first_vertex + static_cast<Vertex>((x + n) * side() + (y + n));
  }
  std::size_t flat_of(Vertex v) const { return v / flat_size(); }
  std::pair<int, int> local(Vertex v) const {
    auto offset = static_cast<int>(v % flat_size());
    return {offset / side() - config.radius, offset % side() - config.radius};
  }
  std::vector<Vertex> flat_vertices(std::size_t flat) const {
    std::vector<Vertex> out(flat_size());
    std::iota(out.begin(), out.end(), flats.at(flat).first_vertex);
    return out;
  }
};

struct TreeOfFlats : FlatLayout {
  HHSStructure structure;

  const MetricSpace& space() const { return structure.total_space(); }

  static constexpr DomainId tree_domain() { return 0; }
  static constexpr DomainId x_domain(std::size_t flat) { return static_cast<DomainId>(1 + 2 * flat); }
  static constexpr DomainId y_domain(std::size_t flat) { return static_cast<DomainId>(2 + 2 * flat); }
};

/// Finite truncation of the tree of flats. Domains: T (the flat-adjacency
/// tree, coordinate = collapse map) and, per flat F, F_x and F_y (coordinate
/// = x resp. y of the closest point of F).
inline TreeOfFlats tree_of_flats(const TreeOfFlatsConfig& cfg, const Limits& limits = Limits::from_env()) {
  if (cfg.radius < 1) throw Error(ErrorCode::ConfigValidation, "tree of flats needs radius N >= 1");
  if (cfg.depth < 0) throw Error(ErrorCode::ConfigValidation, "tree of flats needs depth D >= 0");
  std::set<std::pair<int, int>> seen;
  for (auto [x, y] : cfg.spawn_points) {
    if (std::abs(x) > cfg.radius || std::abs(y) > cfg.radius) {
      throw Error(ErrorCode::ConfigValidation, "spawn point (" + std::to_string(x) + ", " + std::to_string(y) +
                                                   ") lies outside the flat");
    }
    if (x == 0 && y == 0) throw Error(ErrorCode::ConfigValidation, "the origin cannot be a spawn point");
    if (!seen.emplace(x, y).second) throw Error(ErrorCode::ConfigValidation, "duplicate spawn point");
  }

  const std::size_t side = 2 * static_cast<std::size_t>(cfg.radius) + 1;
  const std::size_t per_flat = side * side;
  std::size_t flat_count = 0;
  std::size_t level = 1;
  for (int d = 0; d <= cfg.depth; ++d) {
    flat_count += level;
    if (flat_count > limits.max_vertices / per_flat) {
      throw Error(ErrorCode::SizeLimitExceeded, "tree of flats exceeds the vertex cap of " +
                                                    std::to_string(limits.max_vertices));
    }
    level *= cfg.spawn_points.size();
  }

  FlatLayout result{cfg, {}};
  result.flats.push_back({std::nullopt, std::nullopt, 0, 0});
  for (std::size_t f = 0; f < result.flats.size(); ++f) {
    if (result.flats[f].depth == cfg.depth) continue;
    for (auto [x, y] : cfg.spawn_points) {
      FlatInfo child;
      child.parent = f;
      child.attached_from = result.vertex(f, x, y);
      child.first_vertex = static_cast<Vertex>(result.flats.size() * per_flat);
      child.depth = result.flats[f].depth + 1;
      result.flats.push_back(child);
    }
  }

  const int n = cfg.radius;
  std::vector<Edge> edges;
  for (std::size_t f = 0; f < result.flats.size(); ++f) {
    for (int x = -n; x <= n; ++x) {
      for (int y = -n; y <= n; ++y) {
        if (x < n) edges.push_back({result.vertex(f, x, y), result.vertex(f, x + 1, y), Rational(1)});
        if (y < n) edges.push_back({result.vertex(f, x, y), result.vertex(f, x, y + 1), Rational(1)});
      }
    }
    if (result.flats[f].attached_from) {
      edges.push_back({*result.flats[f].attached_from, result.vertex(f, 0, 0), Rational(1)});
    }
  }
  auto label = "tree_of_flats(N=" + std::to_string(cfg.radius) + ",D=" + std::to_string(cfg.depth) + ")";
  MetricSpace total = build_graph(result.flats.size() * per_flat, std::move(edges), label, limits);

  std::vector<Edge> tree_edges;
  for (std::size_t f = 1; f < result.flats.size(); ++f) {
    tree_edges.push_back({static_cast<Vertex>(*result.flats[f].parent), static_cast<Vertex>(f), Rational(1)});
  }
  MetricSpace tree = build_graph(result.flats.size(), std::move(tree_edges), "C(T)", limits);
  std::vector<Edge> axis_edges;
  for (std::size_t i = 0; i + 1 < side; ++i) {
    axis_edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1), Rational(1)});
  }

  StructureData data;
  data.total_space = total;
  std::vector<Vertex> collapse(total.size());
  for (Vertex v = 0; v < total.size(); ++v) collapse[v] = static_cast<Vertex>(v / per_flat);
  data.domains.push_back({"T", tree, std::move(collapse)});

  std::vector<std::vector<Vertex>> flat_members;
  for (std::size_t f = 0; f < result.flats.size(); ++f) flat_members.push_back(result.flat_vertices(f));
  auto axis_index = [n](int c) { return static_cast<Vertex>(c + n); };

  for (std::size_t f = 0; f < result.flats.size(); ++f) {
    std::vector<Vertex> px(total.size());
    std::vector<Vertex> py(total.size());
    for (Vertex v = 0; v < total.size(); ++v) {
      auto gate = closest_point_projection(total, v, flat_members[f]).canonical;
      auto [gx, gy] = result.local(gate);
      px[v] = axis_index(gx);
      py[v] = axis_index(gy);
    }
    auto name = "F" + std::to_string(f);
    data.domains.push_back({name + "_x", build_graph(side, axis_edges, "C(" + name + "_x)", limits), std::move(px)});
    data.domains.push_back({name + "_y", build_graph(side, axis_edges, "C(" + name + "_y)", limits), std::move(py)});
  }

  for (std::size_t f = 0; f < result.flats.size(); ++f) {
    const DomainId fx = TreeOfFlats::x_domain(f);
    const DomainId fy = TreeOfFlats::y_domain(f);
    data.nesting.emplace_back(fx, TreeOfFlats::tree_domain());
    data.nesting.emplace_back(fy, TreeOfFlats::tree_domain());
    data.orthogonal.emplace_back(fx, fy);
    data.complements.push_back({fx, TreeOfFlats::tree_domain(), fy});
    data.complements.push_back({fy, TreeOfFlats::tree_domain(), fx});
    data.rho.push_back({fx, TreeOfFlats::tree_domain(), static_cast<Vertex>(f)});
    data.rho.push_back({fy, TreeOfFlats::tree_domain(), static_cast<Vertex>(f)});
    for (std::size_t e = 0; e < result.flats.size(); ++e) {
      if (e == f) continue;
      // every point of E has the same gate in F; use E's origin
      auto gate = closest_point_projection(total, result.vertex(e, 0, 0), flat_members[f]).canonical;
      auto [gx, gy] = result.local(gate);
      for (DomainId of : {TreeOfFlats::x_domain(e), TreeOfFlats::y_domain(e)}) {
        data.rho.push_back({of, fx, axis_index(gx)});
        data.rho.push_back({of, fy, axis_index(gy)});
      }
    }
  }

  TreeOfFlats out{std::move(result), HHSStructure::create(std::move(data))};
  auto violations = validate_relation_axioms(out.structure);
  if (!violations.empty()) throw Error(ErrorCode::ConfigValidation, violations.front().message);
  return out;
}

// ---------------------------------------------------------------------------
// Interval complex
// ---------------------------------------------------------------------------

struct BlockSpec {
  std::string name;
  /// Interval length along each axis (1 to 3 axes).
  std::vector<int> sides;
};

/// A sub-grid of a block: fixed coordinates where `at` has a value, free
/// axes where it is empty.
struct FaceRef {
  std::string block;
  std::vector<std::optional<int>> at;
};

/// Identifies two faces point by point, matching free axes in order.
struct Gluing {
  FaceRef a;
  FaceRef b;
};

/// Coordinate rule of a domain on one block: offset + sign * coord[axis]
/// when `axis` is set, otherwise the constant `value`.
struct ProjectionRule {
  std::optional<int> axis;
  int offset = 0;
  int sign = 1;
  int value = 0;
};

struct DomainDecl {
  std::string name;
  /// C(U) is the path with this many unit edges.
  int length = 0;
  std::map<std::string, ProjectionRule> rules;
  /// Coordinate on blocks without a rule.
  int default_value = 0;
};

struct NamedRho {
  std::string of;
  std::string in;
  int vertex = 0;
};

struct NamedComplement {
  std::string v;
  std::string w;
  std::string comp;
};

struct IntervalComplexConfig {
  std::string label = "interval_complex";
  std::string note;
  std::vector<BlockSpec> blocks;
  std::vector<Gluing> gluings;
  std::vector<DomainDecl> domains;
  std::vector<std::pair<std::string, std::string>> nesting;
  std::vector<std::pair<std::string, std::string>> orthogonal;
  std::vector<NamedRho> rho;
  std::vector<NamedComplement> complements;
};

struct IntervalLayout {
  /// block name -> (first global slot, sides); used by vertex().
  std::map<std::string, std::pair<std::size_t, std::vector<int>>> layout;
  /// global slot -> final vertex id
  std::vector<Vertex> slot_vertex;

  Vertex vertex(const std::string& block, const std::vector<int>& coords) const {
    auto it = layout.find(block);
    if (it == layout.end()) throw Error(ErrorCode::ConfigValidation, "unknown block " + block);
    const auto& sides = it->second.second;
    if (coords.size() != sides.size()) throw Error(ErrorCode::ConfigValidation, "wrong coordinate count for " + block);
    std::size_t local = 0;
    for (std::size_t i = 0; i < sides.size(); ++i) {
      if (coords[i] < 0 || coords[i] > sides[i]) throw Error(ErrorCode::ConfigValidation, "coordinate out of block");
      local = local * static_cast<std::size_t>(sides[i] + 1) + static_cast<std::size_t>(coords[i]);
    }
    return slot_vertex[it->second.first + local];
  }
};

struct IntervalComplex : IntervalLayout {
  HHSStructure structure;

  const MetricSpace& space() const { return structure.total_space(); }
};

namespace detail {

inline std::size_t block_volume(const std::vector<int>& sides) {
  std::size_t v = 1;
  for (int s : sides) v *= static_cast<std::size_t>(s + 1);
  return v;
}

inline std::vector<int> unflatten(std::size_t local, const std::vector<int>& sides) {
  std::vector<int> coords(sides.size());
  for (std::size_t i = sides.size(); i-- > 0;) {
    auto extent = static_cast<std::size_t>(sides[i] + 1);
    coords[i] = static_cast<int>(local % extent);
    local /= extent;
  }
  return coords;
}

inline std::size_t flatten(const std::vector<int>& coords, const std::vector<int>& sides) {
  std::size_t local = 0;
  for (std::size_t i = 0; i < sides.size(); ++i) local = local * static_cast<std::size_t>(sides[i] + 1) + coords[i];
  return local;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

/// Glues grid blocks into one complex and attaches the declared domains.
/// The declared relations must satisfy every relation axiom; otherwise
/// ConfigValidation names the first failure.
inline IntervalComplex interval_complex(const IntervalComplexConfig& cfg, const Limits& limits = Limits::from_env()) {
  auto fail = [](const std::string& message) { return Error(ErrorCode::ConfigValidation, message); };
  if (cfg.blocks.empty()) throw fail("interval complex needs at least one block");

  IntervalLayout result;
  std::vector<std::size_t> block_start;
  std::size_t slots = 0;
  for (const auto& block : cfg.blocks) {
    if (block.sides.empty() || block.sides.size() > 3) throw fail("block " + block.name + " must have 1 to 3 axes");
    for (int s : block.sides) {
      if (s < 1) throw fail("block " + block.name + " has a side shorter than 1");
    }
    if (!result.layout.emplace(block.name, std::pair{slots, block.sides}).second) {
      throw fail("duplicate block name " + block.name);
    }
    block_start.push_back(slots);
    slots += detail::block_volume(block.sides);
    if (slots > limits.max_vertices * 8) throw Error(ErrorCode::SizeLimitExceeded, "interval complex too large");
  }

  auto face_slots = [&](const FaceRef& face) {
    auto it = result.layout.find(face.block);
    if (it == result.layout.end()) throw fail("gluing references unknown block " + face.block);
    const auto& [start, sides] = it->second;
    if (face.at.size() != sides.size()) throw fail("gluing face of " + face.block + " has wrong arity");
    std::vector<std::size_t> free_axes;
    for (std::size_t i = 0; i < sides.size(); ++i) {
      if (!face.at[i]) {
        free_axes.push_back(i);
      } else if (*face.at[i] < 0 || *face.at[i] > sides[i]) {
        throw fail("gluing face of " + face.block + " lies outside the block");
      }
    }
    std::vector<int> free_sides;
    for (auto i : free_axes) free_sides.push_back(sides[i]);
    std::vector<std::size_t> out;
    std::size_t count = free_sides.empty() ? 1 : detail::block_volume(free_sides);
    for (std::size_t k = 0; k < count; ++k) {
      auto free_coords = free_sides.empty() ? std::vector<int>{} : detail::unflatten(k, free_sides);
      std::vector<int> coords(sides.size());
      for (std::size_t i = 0, j = 0; i < sides.size(); ++i) coords[i] = face.at[i] ? *face.at[i] : free_coords[j++];
      out.push_back(start + detail::flatten(coords, sides));
    }
    return std::pair{out, free_sides};
  };

  detail::DisjointSets sets(slots);
  for (const auto& g : cfg.gluings) {
    auto [a, a_shape] = face_slots(g.a);
    auto [b, b_shape] = face_slots(g.b);
    if (a_shape != b_shape) throw fail("glued faces of " + g.a.block + " and " + g.b.block + " differ in shape");
    for (std::size_t i = 0; i < a.size(); ++i) sets.unite(a[i], b[i]);
  }

  result.slot_vertex.assign(slots, 0);
  std::map<std::size_t, Vertex> class_id;
  for (std::size_t slot = 0; slot < slots; ++slot) {
    auto root = sets.find(slot);
    auto [it, inserted] = class_id.emplace(root, static_cast<Vertex>(class_id.size()));
    result.slot_vertex[slot] = it->second;
  }
  const std::size_t vertex_count = class_id.size();
  if (vertex_count > limits.max_vertices) {
    throw Error(ErrorCode::SizeLimitExceeded, "interval complex exceeds the vertex cap");
  }

  std::set<std::pair<Vertex, Vertex>> edge_set;
  for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
    const auto& sides = cfg.blocks[b].sides;
    for (std::size_t local = 0; local < detail::block_volume(sides); ++local) {
      auto coords = detail::unflatten(local, sides);
      for (std::size_t axis = 0; axis < sides.size(); ++axis) {
        if (coords[axis] == sides[axis]) continue;
        auto next = coords;
        ++next[axis];
        Vertex u = result.slot_vertex[block_start[b] + local];
        Vertex v = result.slot_vertex[block_start[b] + detail::flatten(next, sides)];
        if (u == v) throw fail("gluing collapses an edge of block " + cfg.blocks[b].name);
        edge_set.emplace(std::min(u, v), std::max(u, v));
      }
    }
  }
  std::vector<Edge> edges;
  for (auto [u, v] : edge_set) edges.push_back({u, v, Rational(1)});

  StructureData data;
  data.total_space = build_graph(vertex_count, std::move(edges), cfg.label, limits);

  std::map<std::string, DomainId> ids;
  for (const auto& decl : cfg.domains) {
    if (decl.length < 0) throw fail("domain " + decl.name + " has negative length");
    if (!ids.emplace(decl.name, static_cast<DomainId>(ids.size())).second) {
      throw fail("duplicate domain name " + decl.name);
    }
    for (const auto& [block, rule] : decl.rules) {
      if (!result.layout.count(block)) throw fail("domain " + decl.name + " has a rule for unknown block " + block);
      if (rule.axis && (*rule.axis < 0 || *rule.axis >= static_cast<int>(result.layout.at(block).second.size()))) {
        throw fail("domain " + decl.name + " reads a missing axis of block " + block);
      }
    }
    std::vector<std::optional<Vertex>> projection(vertex_count);
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
      const auto& block = cfg.blocks[b];
      auto rule_it = decl.rules.find(block.name);
      for (std::size_t local = 0; local < detail::block_volume(block.sides); ++local) {
        int value = decl.default_value;
        if (rule_it != decl.rules.end()) {
          const auto& rule = rule_it->second;
          value = rule.axis ? rule.offset + rule.sign * detail::unflatten(local, block.sides)[*rule.axis] : rule.value;
        }
        if (value < 0 || value > decl.length) {
          throw fail("domain " + decl.name + " maps a vertex of block " + block.name + " outside its interval");
        }
        Vertex v = result.slot_vertex[block_start[b] + local];
        auto coordinate = static_cast<Vertex>(value);
        if (projection[v] && *projection[v] != coordinate) {
          throw fail("domain " + decl.name + " disagrees with itself on a glued vertex of block " + block.name);
        }
        projection[v] = coordinate;
      }
    }
    std::vector<Vertex> table;
    for (auto& c : projection) table.push_back(*c);
    std::vector<Edge> axis;
    for (int i = 0; i < decl.length; ++i) {
      axis.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1), Rational(1)});
    }
    data.domains.push_back(
        {decl.name, build_graph(static_cast<std::size_t>(decl.length) + 1, std::move(axis), "C(" + decl.name + ")", limits),
         std::move(table)});
  }

  auto id_of = [&](const std::string& name) {
    auto it = ids.find(name);
    if (it == ids.end()) throw fail("unknown domain " + name);
    return it->second;
  };
  for (const auto& [child, parent] : cfg.nesting) data.nesting.emplace_back(id_of(child), id_of(parent));
  for (const auto& [a, b] : cfg.orthogonal) data.orthogonal.emplace_back(id_of(a), id_of(b));
  for (const auto& r : cfg.rho) {
    if (r.vertex < 0) throw fail("negative rho vertex");
    data.rho.push_back({id_of(r.of), id_of(r.in), static_cast<Vertex>(r.vertex)});
  }
  for (const auto& c : cfg.complements) data.complements.push_back({id_of(c.v), id_of(c.w), id_of(c.comp)});

  IntervalComplex out{std::move(result), HHSStructure::create(std::move(data))};
  auto violations = validate_relation_axioms(out.structure);
  if (!violations.empty()) {
    throw fail("relation axiom " + std::string(to_string(violations.front().family)) + ": " + violations.front().message);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Auxiliary spaces
// ---------------------------------------------------------------------------

/// (N+1)x(N+1) unit grid: the l1 product of two paths of length N.
inline MetricSpace flat_grid(std::size_t n, const Limits& limits = Limits::from_env()) {
  if (n < 1) throw Error(ErrorCode::ConfigValidation, "flat grid needs N >= 1");
  if ((n + 1) > limits.max_vertices / (n + 1)) {
    throw Error(ErrorCode::SizeLimitExceeded, "flat grid exceeds the vertex cap");
  }
  return l1_product(path_of_length(n, limits), path_of_length(n, limits), limits);
}

/// Uniform random recursive tree on n vertices with shuffled labels.
inline MetricSpace random_tree(std::size_t n, std::uint64_t seed, const Limits& limits = Limits::from_env()) {
  std::mt19937_64 rng(seed);
  std::vector<Vertex> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::shuffle(label.begin(), label.end(), rng);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    edges.push_back({label[i], label[pick(rng)], Rational(1)});
  }
  return build_graph(n, std::move(edges), "random_tree(" + std::to_string(n) + "," + std::to_string(seed) + ")",
                     limits);
}

}  // namespace hhs
