#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hhs/error.hpp"
#include "hhs/metric_space.hpp"

namespace hhs {

using DomainId = std::uint32_t;

/// Square boolean table indexed by domain ids.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  explicit BoolMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}

  std::size_t size() const noexcept { return n_; }
  bool operator()(DomainId a, DomainId b) const { return cells_[index(a, b)] != 0; }
  void set(DomainId a, DomainId b, bool value = true) { cells_[index(a, b)] = value ? 1 : 0; }

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

 private:
  std::size_t index(DomainId a, DomainId b) const { return static_cast<std::size_t>(a) * n_ + b; }
  std::size_t n_ = 0;
  std::vector<char> cells_;
};

/// The combinatorial part of a structure: nesting as declared (strict,
/// child -> parent), orthogonality, and the declared orthogonal complements.
struct RelationTables {
  std::vector<std::string> names;
  BoolMatrix nested;
  BoolMatrix orthogonal;
  /// (V, W) -> domain playing the role of V's orthogonal complement in W.
  std::map<std::pair<DomainId, DomainId>, DomainId> complements;

  std::size_t size() const noexcept { return names.size(); }
};

enum class RelationKind { Equal, Nested, Orthogonal, Transverse };

struct Relation {
  RelationKind kind = RelationKind::Equal;
  /// For Nested: `lesser` is strictly nested in `greater`. Otherwise the
  /// queried pair in argument order.
  DomainId lesser = 0;
  DomainId greater = 0;

  friend bool operator==(const Relation&, const Relation&) = default;
};

constexpr std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::Equal: return "Equal";
    case RelationKind::Nested: return "Nested";
    case RelationKind::Orthogonal: return "Orthogonal";
    case RelationKind::Transverse: return "Transverse";
  }
  return "?";
}

struct DomainData {
  std::string name;
  MetricSpace space;
  /// Coordinate map: vertex x of the total space -> vertex of `space`.
  std::vector<Vertex> projection;

  friend bool operator==(const DomainData&, const DomainData&) = default;
};

struct RhoEntry {
  DomainId of = 0;
  DomainId in = 0;
  Vertex vertex = 0;

  friend bool operator==(const RhoEntry&, const RhoEntry&) = default;
};

struct ComplementEntry {
  DomainId v = 0;
  DomainId w = 0;
  DomainId comp = 0;

  friend bool operator==(const ComplementEntry&, const ComplementEntry&) = default;
};

/// Raw input for HHSStructure::create; also what serializers produce.
struct StructureData {
  MetricSpace total_space;
  std::vector<DomainData> domains;
  /// (child, parent) pairs of the strict nesting order.
  std::vector<std::pair<DomainId, DomainId>> nesting;
  /// Unordered orthogonal pairs.
  std::vector<std::pair<DomainId, DomainId>> orthogonal;
  std::vector<RhoEntry> rho;
  std::vector<ComplementEntry> complements;

  friend bool operator==(const StructureData&, const StructureData&) = default;
};

struct CoordinateVector {
  /// values[U] is the U coordinate.
  std::vector<Vertex> values;

  friend bool operator==(const CoordinateVector&, const CoordinateVector&) = default;
};

class HHSStructure {
 public:
  /// Checks referential integrity and the local relation invariants (no
  /// self-relations, no pair both nested and orthogonal, rho defined exactly
  /// on transverse and strictly nested pairs). Order-theoretic axioms are
  /// left to validate_relation_axioms so they can be reported as data.
  static HHSStructure create(StructureData data) {
    HHSStructure s;
    const std::size_t count = data.domains.size();
    if (count == 0) throw Error(ErrorCode::ConfigValidation, "a structure needs at least one domain");
    const std::size_t nx = data.total_space.size();

    s.tables_.names.reserve(count);
    for (DomainId id = 0; id < count; ++id) {
      const auto& d = data.domains[id];
      if (d.name.empty()) throw Error(ErrorCode::ConfigValidation, "domain " + std::to_string(id) + " has no name");
      if (s.by_name_.count(d.name)) throw Error(ErrorCode::ConfigValidation, "duplicate domain name " + d.name);
      s.by_name_.emplace(d.name, id);
      s.tables_.names.push_back(d.name);
      if (d.projection.size() != nx) {
        throw Error(ErrorCode::DanglingReference, "projection of " + d.name + " has " +
                                                      std::to_string(d.projection.size()) +
                                                      " entries but the total space has " + std::to_string(nx));
      }
      for (Vertex x = 0; x < nx; ++x) {
        if (d.projection[x] >= d.space.size()) {
          throw Error(ErrorCode::DanglingReference, "projection of " + d.name + " sends vertex " +
                                                        std::to_string(x) + " to missing vertex " +
                                                        std::to_string(d.projection[x]));
        }
      }
    }

    auto check_id = [&](DomainId id, const char* where) {
      if (id >= count) {
        throw Error(ErrorCode::DanglingReference, std::string(where) + " references unknown domain id " +
                                                      std::to_string(id));
      }
    };
    auto& names = s.tables_.names;

    s.tables_.nested = BoolMatrix(count);
    for (auto [child, parent] : data.nesting) {
      check_id(child, "nesting");
      check_id(parent, "nesting");
      if (child == parent) throw Error(ErrorCode::RelationConflict, names[child] + " declared nested in itself");
      s.tables_.nested.set(child, parent);
    }
    s.tables_.orthogonal = BoolMatrix(count);
    for (auto [a, b] : data.orthogonal) {
      check_id(a, "orthogonality");
      check_id(b, "orthogonality");
      if (a == b) {
        throw Error(ErrorCode::RelationConflict, names[a] + " declared orthogonal to itself (anti-reflexivity)");
      }
      if (s.tables_.nested(a, b) || s.tables_.nested(b, a)) {
        throw Error(ErrorCode::RelationConflict, names[a] + " and " + names[b] + " are both nested and orthogonal");
      }
      s.tables_.orthogonal.set(a, b);
      s.tables_.orthogonal.set(b, a);
    }

    s.rho_.assign(count * count, std::nullopt);
    for (const auto& r : data.rho) {
      check_id(r.of, "rho");
      check_id(r.in, "rho");
      auto rel = s.relation_of(r.of, r.in);
      bool expected = rel.kind == RelationKind::Transverse ||
                      (rel.kind == RelationKind::Nested && rel.lesser == r.of);
      if (!expected) {
        throw Error(ErrorCode::RelationConflict, "rho of " + names[r.of] + " in " + names[r.in] +
                                                     " given, but the pair is " +
                                                     std::string(to_string(rel.kind)) +
                                                     (rel.kind == RelationKind::Nested ? " the other way" : ""));
      }
      if (r.vertex >= data.domains[r.in].space.size()) {
        throw Error(ErrorCode::DanglingReference, "rho of " + names[r.of] + " in " + names[r.in] +
                                                      " is missing vertex " + std::to_string(r.vertex));
      }
      auto& slot = s.rho_[s.cell(r.of, r.in)];
      if (slot) throw Error(ErrorCode::RelationConflict, "rho of " + names[r.of] + " in " + names[r.in] + " given twice");
      slot = r.vertex;
    }
    for (DomainId u = 0; u < count; ++u) {
      for (DomainId v = 0; v < count; ++v) {
        if (u == v) continue;
        auto rel = s.relation_of(u, v);
        bool required = rel.kind == RelationKind::Transverse || (rel.kind == RelationKind::Nested && rel.lesser == u);
        if (required && !s.rho_[s.cell(u, v)]) {
          throw Error(ErrorCode::MissingRho, "rho of " + names[u] + " in " + names[v] + " is required (" +
                                                 std::string(to_string(rel.kind)) + " pair) but missing");
        }
      }
    }

    for (const auto& c : data.complements) {
      check_id(c.v, "complement");
      check_id(c.w, "complement");
      check_id(c.comp, "complement");
      if (!s.tables_.complements.emplace(std::pair{c.v, c.w}, c.comp).second) {
        throw Error(ErrorCode::RelationConflict, "complement of " + names[c.v] + " in " + names[c.w] + " given twice");
      }
    }

    s.data_ = normalized(std::move(data));
    return s;
  }

  const MetricSpace& total_space() const noexcept { return data_.total_space; }
  std::size_t domain_count() const noexcept { return data_.domains.size(); }
  const std::string& name(DomainId u) const { return data_.domains.at(check(u)).name; }

  DomainId find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) throw Error(ErrorCode::UnknownDomain, "no domain named " + std::string(name));
    return it->second;
  }

  const MetricSpace& domain_space(DomainId u) const { return data_.domains.at(check(u)).space; }
  const std::vector<Vertex>& projection(DomainId u) const { return data_.domains.at(check(u)).projection; }
  Vertex project(DomainId u, Vertex x) const {
    data_.total_space.check_vertex(x);
    return data_.domains.at(check(u)).projection[x];
  }

  const RelationTables& relations() const noexcept { return tables_; }
  const StructureData& data() const noexcept { return data_; }

  Relation relation_of(DomainId u, DomainId v) const {
    check(u);
    check(v);
    if (u == v) return {RelationKind::Equal, u, v};
    if (tables_.nested(u, v)) return {RelationKind::Nested, u, v};
    if (tables_.nested(v, u)) return {RelationKind::Nested, v, u};
    if (tables_.orthogonal(u, v)) return {RelationKind::Orthogonal, u, v};
    return {RelationKind::Transverse, u, v};
  }

  bool strictly_nested(DomainId u, DomainId v) const { return u != v && tables_.nested(check(u), check(v)); }
  bool orthogonal(DomainId u, DomainId v) const { return tables_.orthogonal(check(u), check(v)); }
  bool transverse(DomainId u, DomainId v) const { return relation_of(u, v).kind == RelationKind::Transverse; }

  /// The point of C(v) recording u; defined for u transverse to v or u
  /// strictly nested in v.
  std::optional<Vertex> rho(DomainId u, DomainId v) const {
    check(u);
    check(v);
    return rho_[cell(u, v)];
  }

  std::optional<DomainId> complement(DomainId v, DomainId w) const {
    auto it = tables_.complements.find({check(v), check(w)});
    if (it == tables_.complements.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const HHSStructure& a, const HHSStructure& b) { return a.data_ == b.data_; }

 private:
  HHSStructure() = default;

  DomainId check(DomainId u) const {
    if (u >= tables_.size()) throw Error(ErrorCode::UnknownDomain, "unknown domain id " + std::to_string(u));
    return u;
  }
  std::size_t cell(DomainId u, DomainId v) const { return static_cast<std::size_t>(u) * tables_.size() + v; }

  static StructureData normalized(StructureData data) {
    for (auto& [a, b] : data.orthogonal) {
      if (a > b) std::swap(a, b);
    }
    auto sort_unique = [](auto& items) {
      std::sort(items.begin(), items.end());
      items.erase(std::unique(items.begin(), items.end()), items.end());
    };
    sort_unique(data.nesting);
    sort_unique(data.orthogonal);
    std::sort(data.rho.begin(), data.rho.end(),
              [](const RhoEntry& a, const RhoEntry& b) { return std::pair(a.of, a.in) < std::pair(b.of, b.in); });
    std::sort(data.complements.begin(), data.complements.end(), [](const ComplementEntry& a, const ComplementEntry& b) {
      return std::pair(a.v, a.w) < std::pair(b.v, b.w);
    });
    return data;
  }

  StructureData data_;
  RelationTables tables_;
  std::map<std::string, DomainId> by_name_;
  std::vector<std::optional<Vertex>> rho_;
};

inline HHSStructure new_structure(StructureData data) { return HHSStructure::create(std::move(data)); }

inline Relation relation_of(const HHSStructure& s, DomainId u, DomainId v) { return s.relation_of(u, v); }

inline std::optional<Vertex> rho_point(const HHSStructure& s, DomainId u, DomainId v) { return s.rho(u, v); }

inline CoordinateVector coordinates(const HHSStructure& s, Vertex x) {
  s.total_space().check_vertex(x);
  CoordinateVector result;
  result.values.reserve(s.domain_count());
  for (DomainId u = 0; u < s.domain_count(); ++u) result.values.push_back(s.projection(u)[x]);
  return result;
}

/// Length of the longest strict nesting chain, counted in domains.
inline std::size_t nesting_height(const RelationTables& tables) {
  const std::size_t n = tables.size();
  std::vector<std::size_t> depth(n, 1);
  // Longest path in the declared relation; a cycle would never settle, so
  // relaxation is capped at n rounds.
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (DomainId u = 0; u < n; ++u) {
      for (DomainId v = 0; v < n; ++v) {
        if (u != v && tables.nested(u, v) && depth[v] < depth[u] + 1 && depth[u] + 1 <= n) {
          depth[v] = depth[u] + 1;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return n == 0 ? 0 : *std::max_element(depth.begin(), depth.end());
}

}  // namespace hhs
