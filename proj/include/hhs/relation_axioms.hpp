#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hhs/structure.hpp"

namespace hhs {

enum class AxiomFamily {
  PartialOrder,
  UniqueMaximal,
  OrthogonalAntiReflexive,
  OrthogonalSymmetric,
  NestedOrthogonalExclusive,
  Inheritance,
  Complement,
};

constexpr std::string_view to_string(AxiomFamily family) {
  switch (family) {
    case AxiomFamily::PartialOrder: return "partial_order";
    case AxiomFamily::UniqueMaximal: return "unique_maximal";
    case AxiomFamily::OrthogonalAntiReflexive: return "orthogonal_anti_reflexive";
    case AxiomFamily::OrthogonalSymmetric: return "orthogonal_symmetric";
    case AxiomFamily::NestedOrthogonalExclusive: return "nested_orthogonal_exclusive";
    case AxiomFamily::Inheritance: return "inheritance";
    case AxiomFamily::Complement: return "complement";
  }
  return "?";
}

struct Violation {
  AxiomFamily family;
  /// Domains involved, in the order the message names them.
  std::vector<DomainId> tuple;
  std::string message;
};

/// Exhaustive check of the combinatorial axioms on the declared tables:
/// nesting is a strict partial order with a unique maximal element,
/// orthogonality is anti-reflexive and symmetric and never holds between
/// nested domains, orthogonality is inherited downwards, and every
/// nonempty set {U nested in W, U orthogonal to V} for V nested in W sits
/// under a declared complement strictly nested in W.
inline std::vector<Violation> validate_relation_axioms(const RelationTables& t) {
  std::vector<Violation> out;
  const auto n = static_cast<DomainId>(t.size());
  const auto& name = t.names;
  auto add = [&](AxiomFamily family, std::vector<DomainId> tuple, std::string message) {
    out.push_back({family, std::move(tuple), std::move(message)});
  };

  for (DomainId u = 0; u < n; ++u) {
    if (t.nested(u, u)) add(AxiomFamily::PartialOrder, {u}, "nesting is not irreflexive: " + name[u] + " < " + name[u]);
  }
  for (DomainId u = 0; u < n; ++u) {
    for (DomainId v = u + 1; v < n; ++v) {
      if (t.nested(u, v) && t.nested(v, u)) {
        add(AxiomFamily::PartialOrder, {u, v},
            "nesting is not antisymmetric: " + name[u] + " < " + name[v] + " and " + name[v] + " < " + name[u]);
      }
    }
  }
  for (DomainId u = 0; u < n; ++u) {
    for (DomainId v = 0; v < n; ++v) {
      if (u == v || !t.nested(u, v)) continue;
      for (DomainId w = 0; w < n; ++w) {
        if (w == u || w == v || !t.nested(v, w)) continue;
        if (!t.nested(u, w)) {
          add(AxiomFamily::PartialOrder, {u, v, w},
              "nesting is not transitive: " + name[u] + " < " + name[v] + " < " + name[w] + " but not " + name[u] +
                  " < " + name[w]);
        }
      }
    }
  }

  std::vector<DomainId> maximal;
  for (DomainId u = 0; u < n; ++u) {
    bool has_parent = false;
    for (DomainId v = 0; v < n && !has_parent; ++v) has_parent = v != u && t.nested(u, v);
    if (!has_parent) maximal.push_back(u);
  }
  if (maximal.size() != 1) {
    std::string list;
    for (auto u : maximal) list += (list.empty() ? "" : ", ") + name[u];
    add(AxiomFamily::UniqueMaximal, maximal,
        "no unique maximal element: maximal domains are {" + list + "}");
  }

  for (DomainId u = 0; u < n; ++u) {
    if (t.orthogonal(u, u)) {
      add(AxiomFamily::OrthogonalAntiReflexive, {u}, "orthogonality is not anti-reflexive: " + name[u] + " _|_ " + name[u]);
    }
  }
  for (DomainId u = 0; u < n; ++u) {
    for (DomainId v = 0; v < n; ++v) {
      if (u != v && t.orthogonal(u, v) && !t.orthogonal(v, u)) {
        add(AxiomFamily::OrthogonalSymmetric, {u, v},
            "orthogonality is not symmetric: " + name[u] + " _|_ " + name[v] + " but not " + name[v] + " _|_ " + name[u]);
      }
    }
  }
  for (DomainId u = 0; u < n; ++u) {
    for (DomainId v = u + 1; v < n; ++v) {
      bool orth = t.orthogonal(u, v) || t.orthogonal(v, u);
      if (orth && (t.nested(u, v) || t.nested(v, u))) {
        add(AxiomFamily::NestedOrthogonalExclusive, {u, v},
            name[u] + " and " + name[v] + " are both nesting-comparable and orthogonal");
      }
    }
  }

  // V < W and U _|_ W imply U _|_ V
  for (DomainId v = 0; v < n; ++v) {
    for (DomainId w = 0; w < n; ++w) {
      if (v == w || !t.nested(v, w)) continue;
      for (DomainId u = 0; u < n; ++u) {
        if (t.orthogonal(u, w) && !t.orthogonal(u, v)) {
          add(AxiomFamily::Inheritance, {u, v, w},
              "inheritance fails: " + name[v] + " < " + name[w] + " and " + name[u] + " _|_ " + name[w] + " but not " +
                  name[u] + " _|_ " + name[v]);
        }
      }
    }
  }

  for (const auto& [key, comp] : t.complements) {
    auto [v, w] = key;
    if (v >= n || w >= n || comp >= n) {
      add(AxiomFamily::Complement, {}, "complement entry references an unknown domain");
      continue;
    }
    if (!t.nested(v, w)) {
      add(AxiomFamily::Complement, {v, w, comp},
          "complement of " + name[v] + " in " + name[w] + " declared but " + name[v] + " is not nested in " + name[w]);
    }
    if (!t.nested(comp, w)) {
      add(AxiomFamily::Complement, {v, w, comp},
          "complement " + name[comp] + " of " + name[v] + " in " + name[w] + " is not strictly nested in " + name[w]);
    }
  }
  for (DomainId v = 0; v < n; ++v) {
    for (DomainId w = 0; w < n; ++w) {
      if (v == w || !t.nested(v, w)) continue;
      std::vector<DomainId> needing;
      for (DomainId u = 0; u < n; ++u) {
        if (u != w && t.nested(u, w) && t.orthogonal(u, v)) needing.push_back(u);
      }
      if (needing.empty()) continue;
      auto it = t.complements.find({v, w});
      if (it == t.complements.end()) {
        add(AxiomFamily::Complement, {v, w},
            "no complement of " + name[v] + " in " + name[w] + " although " + name[needing.front()] +
                " is nested in " + name[w] + " and orthogonal to " + name[v]);
        continue;
      }
      DomainId comp = it->second;
      if (comp >= n) continue;
      for (DomainId u : needing) {
        if (u != comp && !t.nested(u, comp)) {
          add(AxiomFamily::Complement, {v, w, comp, u},
              name[u] + " is nested in " + name[w] + " and orthogonal to " + name[v] + " but not nested in the complement " +
                  name[comp]);
        }
      }
    }
  }
  return out;
}

inline std::vector<Violation> validate_relation_axioms(const HHSStructure& s) {
  return validate_relation_axioms(s.relations());
}

}  // namespace hhs
