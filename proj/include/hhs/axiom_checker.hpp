#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "hhs/error.hpp"
#include "hhs/metric_space.hpp"
#include "hhs/rational.hpp"
#include "hhs/relation_axioms.hpp"
#include "hhs/structure.hpp"

namespace hhs {

/// Where a reported constant is attained. What `points` holds is stated by
/// each check.
struct Witness {
  std::vector<DomainId> domains;
  std::vector<Vertex> points;

  bool empty() const noexcept { return domains.empty() && points.empty(); }
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct AxiomEntry {
  /// Exact sweep maximum; empty when the check could not run (see flags).
  std::optional<Rational> constant;
  Witness witness;
  std::vector<std::string> flags;

  friend bool operator==(const AxiomEntry&, const AxiomEntry&) = default;
};

struct LipschitzConstant {
  DomainId domain = 0;
  Rational multiplicative{0};
  Rational additive{0};
  /// points: the edge (x, y) of the total space with the largest stretch.
  Witness witness;

  friend bool operator==(const LipschitzConstant&, const LipschitzConstant&) = default;
};

struct LipschitzResult {
  std::vector<LipschitzConstant> per_domain;
  /// Largest multiplicative constant over all domains (additive part is 0).
  AxiomEntry global;
};

struct ThresholdedEntry {
  Rational threshold{0};
  AxiomEntry entry;

  friend bool operator==(const ThresholdedEntry&, const ThresholdedEntry&) = default;
};

struct RealizationResult {
  AxiomEntry eps;
  AxiomEntry rho_eps;
};

struct CheckConfig {
  std::vector<Rational> bgi_thresholds{Rational(1), Rational(2), Rational(3)};
  std::size_t family_cap = 3;
  std::size_t tuple_budget = 2'000'000;
  std::vector<Rational> radii{Rational(0), Rational(1), Rational(2), Rational(4)};
};

struct AxiomReport {
  std::vector<LipschitzConstant> lipschitz;
  AxiomEntry lipschitz_global;
  AxiomEntry consistency;
  /// Bounded geodesic image bound B for each threshold E.
  std::vector<ThresholdedEntry> bgi;
  AxiomEntry realization;
  AxiomEntry realization_rho;
  /// Uniqueness profile theta(r) for each radius r.
  std::vector<ThresholdedEntry> uniqueness;
  AxiomEntry rho_coherence;
  AxiomEntry orthogonal_rho_agreement;

  const AxiomEntry* bgi_at(const Rational& threshold) const { return find(bgi, threshold); }
  const AxiomEntry* theta_at(const Rational& radius) const { return find(uniqueness, radius); }

 private:
  static const AxiomEntry* find(const std::vector<ThresholdedEntry>& levels, const Rational& key) {
    for (const auto& level : levels) {
      if (level.threshold == key) return &level.entry;
    }
    return nullptr;
  }
};

namespace detail {

inline Rational coordinate_distance(const HHSStructure& s, DomainId u, Vertex a, Vertex b) {
  return s.domain_space(u).distance(a, b);
}

/// Shortest-path distances from `source` inside the subgraph induced on
/// `allowed` vertices, scaled like the parent space; -1 where unreachable.
inline std::vector<std::int64_t> restricted_distances(const MetricSpace& space, const std::vector<char>& allowed,
                                                      Vertex source) {
  std::vector<std::int64_t> dist(space.size(), -1);
  if (!allowed[source]) return dist;
  using Item = std::pair<std::int64_t, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0;
  heap.emplace(0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[u]) continue;
    for (const Arc& arc : space.neighbors(u)) {
      if (!allowed[arc.to]) continue;
      auto candidate = d + arc.scaled_weight;
      if (dist[arc.to] < 0 || candidate < dist[arc.to]) {
        dist[arc.to] = candidate;
        heap.emplace(candidate, arc.to);
      }
    }
  }
  return dist;
}

inline AxiomEntry vacuous_entry() { return AxiomEntry{Rational(0), {}, {"vacuous"}}; }

}  // namespace detail

/// Edge-wise stretch of every coordinate map. On a geodesic graph the
/// largest edge stretch bounds the stretch over all pairs, so C = 0.
inline LipschitzResult check_coarse_lipschitz(const HHSStructure& s) {
  LipschitzResult result;
  result.global = AxiomEntry{Rational(0), {}, {}};
  const auto& edges = s.total_space().edges();
  for (DomainId u = 0; u < s.domain_count(); ++u) {
    const auto& proj = s.projection(u);
    LipschitzConstant constant{u, Rational(0), Rational(0), {{u}, {}}};
    for (const auto& e : edges) {
      Rational stretch = detail::coordinate_distance(s, u, proj[e.u], proj[e.v]) / e.weight;
      if (constant.witness.points.empty() || stretch > constant.multiplicative) {
        constant.multiplicative = stretch;
        constant.witness.points = {e.u, e.v};
      }
    }
    if (constant.multiplicative > *result.global.constant ||
        (result.global.witness.empty() && !constant.witness.points.empty())) {
      result.global.constant = constant.multiplicative;
      result.global.witness = constant.witness;
    }
    result.per_domain.push_back(std::move(constant));
  }
  return result;
}

/// kappa = max over transverse pairs {U, V} and x of
/// min(d_U(x_U, rho^V_U), d_V(x_V, rho^U_V)).
/// Witness: domains (U, V), points (x).
inline AxiomEntry check_transverse_consistency(const HHSStructure& s) {
  std::optional<AxiomEntry> best;
  const auto n = static_cast<Vertex>(s.total_space().size());
  for (DomainId u = 0; u < s.domain_count(); ++u) {
    for (DomainId v = u + 1; v < s.domain_count(); ++v) {
      if (!s.transverse(u, v)) continue;
      const Vertex rho_vu = *s.rho(v, u);
      const Vertex rho_uv = *s.rho(u, v);
      const auto& space_u = s.domain_space(u);
      const auto& space_v = s.domain_space(v);
      const auto& proj_u = s.projection(u);
      const auto& proj_v = s.projection(v);
      for (Vertex x = 0; x < n; ++x) {
        Rational value = std::min(space_u.distance(proj_u[x], rho_vu), space_v.distance(proj_v[x], rho_uv));
        if (!best || value > *best->constant) best = AxiomEntry{value, {{u, v}, {x}}, {}};
      }
    }
  }
  return best ? *best : detail::vacuous_entry();
}

/// For every U strictly nested in V and every pair x, y whose V coordinates
/// are joined by at least one geodesic of C(V) staying at distance >= E from
/// rho^U_V, records d_U(x_U, y_U); returns the maximum. Existence of such a
/// geodesic is decided exactly: it exists iff the distance inside the
/// subgraph of vertices at distance >= E from rho equals the distance in C(V).
/// Witness: domains (U, V), points (x, y).
inline AxiomEntry check_bounded_geodesic_image(const HHSStructure& s, const Rational& threshold) {
  if (threshold < 0) throw Error(ErrorCode::ConfigValidation, "geodesic image threshold must be nonnegative");
  std::optional<AxiomEntry> best;
  const auto n = static_cast<Vertex>(s.total_space().size());
  for (DomainId u = 0; u < s.domain_count(); ++u) {
    for (DomainId v = 0; v < s.domain_count(); ++v) {
      if (!s.strictly_nested(u, v)) continue;
      const auto& space_v = s.domain_space(v);
      const auto& space_u = s.domain_space(u);
      const Vertex rho = *s.rho(u, v);
      const std::size_t m = space_v.size();
      std::vector<char> allowed(m, 0);
      for (Vertex q = 0; q < m; ++q) allowed[q] = space_v.distance(q, rho) >= threshold ? 1 : 0;
      std::vector<char> avoidable(m * m, 0);
      for (Vertex a = 0; a < m; ++a) {
        if (!allowed[a]) continue;
        auto inside = detail::restricted_distances(space_v, allowed, a);
        for (Vertex b = 0; b < m; ++b) avoidable[a * m + b] = inside[b] == space_v.scaled_distance(a, b) ? 1 : 0;
      }
      const auto& proj_u = s.projection(u);
      const auto& proj_v = s.projection(v);
      for (Vertex x = 0; x < n; ++x) {
        for (Vertex y = x; y < n; ++y) {
          if (!avoidable[static_cast<std::size_t>(proj_v[x]) * m + proj_v[y]]) continue;
          Rational value = space_u.distance(proj_u[x], proj_u[y]);
          if (!best || value > *best->constant) best = AxiomEntry{value, {{u, v}, {x, y}}, {}};
        }
      }
    }
  }
  return best ? *best : detail::vacuous_entry();
}

inline std::vector<ThresholdedEntry> bounded_geodesic_image_profile(const HHSStructure& s,
                                                                    const std::vector<Rational>& thresholds) {
  std::vector<ThresholdedEntry> out;
  for (const auto& e : thresholds) out.push_back({e, check_bounded_geodesic_image(s, e)});
  return out;
}

/// Pairwise-orthogonal families of size 1..cap, each listed with increasing
/// ids, families in lexicographic order.
inline std::vector<std::vector<DomainId>> orthogonal_families(const HHSStructure& s, std::size_t cap) {
  std::vector<std::vector<DomainId>> families;
  std::vector<DomainId> current;
  std::function<void(DomainId)> grow = [&](DomainId start) {
    for (DomainId u = start; u < s.domain_count(); ++u) {
      bool fits = std::all_of(current.begin(), current.end(), [&](DomainId w) { return s.orthogonal(w, u); });
      if (!fits) continue;
      current.push_back(u);
      families.push_back(current);
      if (current.size() < cap) grow(u + 1);
      current.pop_back();
    }
  };
  if (cap > 0) grow(0);
  return families;
}

/// Partial realization. For each pairwise-orthogonal family {V_j} and each
/// target tuple (p_j), the realizing point is the x minimizing
/// max_j d(x_{V_j}, p_j); ties are broken by the smallest rho defect
/// max d_W(x_W, rho^{V_j}_W) over W where that rho is defined, then by id.
/// eps is the largest minimum over all tuples, rho_eps the largest rho
/// defect of the chosen points.
/// Witness: domains = family, points = (x, p_1, ..., p_k).
inline RealizationResult check_partial_realization(const HHSStructure& s, std::size_t family_cap,
                                                   std::size_t tuple_budget = 2'000'000) {
  auto families = orthogonal_families(s, family_cap);
  std::size_t total = 0;
  for (const auto& family : families) {
    std::size_t tuples = 1;
    for (DomainId v : family) {
      auto size = s.domain_space(v).size();
      tuples = tuples > tuple_budget / size ? tuple_budget + 1 : tuples * size;
    }
    total += tuples;
    if (total > tuple_budget) {
      throw Error(ErrorCode::CombinatorialBlowup,
                  "partial realization needs more than " + std::to_string(tuple_budget) + " target tuples");
    }
  }

  const auto n = static_cast<Vertex>(s.total_space().size());
  std::optional<AxiomEntry> eps;
  std::optional<AxiomEntry> rho_eps;
  for (const auto& family : families) {
    struct Target {
      DomainId w;
      Vertex rho;
    };
    std::vector<Target> targets;
    for (DomainId v : family) {
      for (DomainId w = 0; w < s.domain_count(); ++w) {
        if (w == v) continue;
        if (auto r = s.rho(v, w)) targets.push_back({w, *r});
      }
    }
    std::vector<Rational> rho_defect(n, Rational(0));
    for (Vertex x = 0; x < n; ++x) {
      for (const auto& t : targets) {
        rho_defect[x] = std::max(rho_defect[x], s.domain_space(t.w).distance(s.projection(t.w)[x], t.rho));
      }
    }

    std::vector<Vertex> tuple(family.size(), 0);
    while (true) {
      std::optional<Vertex> chosen;
      Rational chosen_eps;
      for (Vertex x = 0; x < n; ++x) {
        Rational e(0);
        for (std::size_t j = 0; j < family.size(); ++j) {
          e = std::max(e, s.domain_space(family[j]).distance(s.projection(family[j])[x], tuple[j]));
        }
        if (!chosen || e < chosen_eps || (e == chosen_eps && rho_defect[x] < rho_defect[*chosen])) {
          chosen = x;
          chosen_eps = e;
        }
      }
      Witness witness{family, {*chosen}};
      witness.points.insert(witness.points.end(), tuple.begin(), tuple.end());
      if (!eps || chosen_eps > *eps->constant) eps = AxiomEntry{chosen_eps, witness, {}};
      if (!rho_eps || rho_defect[*chosen] > *rho_eps->constant) {
        rho_eps = AxiomEntry{rho_defect[*chosen], witness, {}};
      }

      std::size_t j = 0;
      for (; j < family.size(); ++j) {
        if (++tuple[j] < s.domain_space(family[j]).size()) break;
        tuple[j] = 0;
      }
      if (j == family.size()) break;
    }
  }
  if (!eps) return {detail::vacuous_entry(), detail::vacuous_entry()};
  return {*eps, *rho_eps};
}

/// theta(r) = max d_X(x, y) over pairs whose coordinates all differ by at
/// most r. Witness: points (x, y); empty when only x = y qualifies.
inline std::vector<ThresholdedEntry> check_uniqueness(const HHSStructure& s, const std::vector<Rational>& radii) {
  if (radii.empty()) throw Error(ErrorCode::ConfigValidation, "uniqueness check needs at least one radius");
  for (const auto& r : radii) {
    if (r < 0) throw Error(ErrorCode::ConfigValidation, "uniqueness radius must be nonnegative");
  }
  std::vector<ThresholdedEntry> out;
  for (const auto& r : radii) out.push_back({r, AxiomEntry{Rational(0), {}, {}}});
  const auto& X = s.total_space();
  const auto n = static_cast<Vertex>(X.size());
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y = x + 1; y < n; ++y) {
      Rational gap(0);
      for (DomainId u = 0; u < s.domain_count(); ++u) {
        const auto& proj = s.projection(u);
        gap = std::max(gap, s.domain_space(u).distance(proj[x], proj[y]));
      }
      Rational d = X.distance(x, y);
      for (auto& level : out) {
        if (gap <= level.threshold && d > *level.entry.constant) {
          level.entry.constant = d;
          level.entry.witness = {{}, {x, y}};
        }
      }
    }
  }
  return out;
}

/// max d_W(rho^U_W, rho^V_W) over U strictly nested in V and W with both
/// points defined. Witness: domains (U, V, W), points (rho^U_W, rho^V_W).
inline AxiomEntry check_rho_coherence(const HHSStructure& s) {
  std::optional<AxiomEntry> best;
  for (DomainId u = 0; u < s.domain_count(); ++u) {
    for (DomainId v = 0; v < s.domain_count(); ++v) {
      if (!s.strictly_nested(u, v)) continue;
      for (DomainId w = 0; w < s.domain_count(); ++w) {
        if (w == u || w == v) continue;
        auto ru = s.rho(u, w);
        auto rv = s.rho(v, w);
        if (!ru || !rv) continue;
        Rational value = s.domain_space(w).distance(*ru, *rv);
        if (!best || value > *best->constant) best = AxiomEntry{value, {{u, v, w}, {*ru, *rv}}, {}};
      }
    }
  }
  return best ? *best : detail::vacuous_entry();
}

/// Same sweep as check_rho_coherence but over orthogonal pairs U, V: the
/// two-names-for-one-point convention of product regions.
inline AxiomEntry check_orthogonal_rho_agreement(const HHSStructure& s) {
  std::optional<AxiomEntry> best;
  for (DomainId u = 0; u < s.domain_count(); ++u) {
    for (DomainId v = u + 1; v < s.domain_count(); ++v) {
      if (!s.orthogonal(u, v)) continue;
      for (DomainId w = 0; w < s.domain_count(); ++w) {
        if (w == u || w == v) continue;
        auto ru = s.rho(u, w);
        auto rv = s.rho(v, w);
        if (!ru || !rv) continue;
        Rational value = s.domain_space(w).distance(*ru, *rv);
        if (!best || value > *best->constant) best = AxiomEntry{value, {{u, v, w}, {*ru, *rv}}, {}};
      }
    }
  }
  return best ? *best : detail::vacuous_entry();
}

namespace detail {

template <class Fn>
AxiomEntry guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return AxiomEntry{std::nullopt, {}, {std::string(to_string(e.code()))}};
  }
}

}  // namespace detail

/// Runs every metric check. Refuses (ValidationFirst) when the relation
/// axioms fail; individual check failures become flagged entries.
inline AxiomReport full_report(const HHSStructure& s, const CheckConfig& config = {}) {
  auto violations = validate_relation_axioms(s);
  if (!violations.empty()) {
    throw Error(ErrorCode::ValidationFirst, std::to_string(violations.size()) +
                                                " relation axiom violation(s), first: " + violations.front().message);
  }
  AxiomReport report;
  auto lipschitz = check_coarse_lipschitz(s);
  report.lipschitz = std::move(lipschitz.per_domain);
  report.lipschitz_global = std::move(lipschitz.global);
  report.consistency = detail::guarded([&] { return check_transverse_consistency(s); });
  for (const auto& e : config.bgi_thresholds) {
    report.bgi.push_back({e, detail::guarded([&] { return check_bounded_geodesic_image(s, e); })});
  }
  try {
    auto realization = check_partial_realization(s, config.family_cap, config.tuple_budget);
    report.realization = std::move(realization.eps);
    report.realization_rho = std::move(realization.rho_eps);
  } catch (const Error& e) {
    report.realization = AxiomEntry{std::nullopt, {}, {std::string(to_string(e.code()))}};
    report.realization_rho = report.realization;
  }
  try {
    report.uniqueness = check_uniqueness(s, config.radii);
  } catch (const Error& e) {
    report.uniqueness.clear();
    for (const auto& r : config.radii) {
      report.uniqueness.push_back({r, AxiomEntry{std::nullopt, {}, {std::string(to_string(e.code()))}}});
    }
  }
  report.rho_coherence = detail::guarded([&] { return check_rho_coherence(s); });
  report.orthogonal_rho_agreement = detail::guarded([&] { return check_orthogonal_rho_agreement(s); });
  return report;
}

}  // namespace hhs
