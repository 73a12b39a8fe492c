#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hhs/axiom_checker.hpp"
#include "hhs/distance_formula.hpp"
#include "hhs/error.hpp"
#include "hhs/generators.hpp"
#include "hhs/hyperbolicity.hpp"
#include "hhs/metric_space.hpp"
#include "hhs/relation_axioms.hpp"
#include "hhs/structure.hpp"

namespace hhs::io {

using Json = nlohmann::json;

/// Two-space indented, keys sorted (nlohmann's default object is ordered by
/// key), trailing newline. Output is byte-stable for equal inputs.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << text;
}

// Integers stay JSON integers; other rationals become "p/q" strings.
inline Json rational_to_json(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return to_string(r);
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(ErrorCode::ParseError, "expected an integer or a \"p/q\" string, got " + j.dump());
}

/// Report form of a constant: integers as integers, otherwise the nearest
/// double (the exact value is given alongside).
inline Json constant_to_json(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return to_double(r);
}

namespace detail {

template <class Fn>
auto parsing(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, what + ": " + e.what());
  }
}

inline const Json& require(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::ParseError, what + " is missing \"" + key + "\"");
  }
  return j.at(key);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// spaces
// ---------------------------------------------------------------------------

inline Json space_to_json(const MetricSpace& space) {
  Json edges = Json::array();
  for (const auto& e : space.edges()) edges.push_back(Json::array({e.u, e.v, rational_to_json(e.weight)}));
  return Json{{"label", space.label()}, {"n", space.size()}, {"edges", edges}};
}

inline MetricSpace space_from_json(const Json& j, const Limits& limits = Limits::from_env()) {
  return detail::parsing("space", [&] {
    auto n = detail::require(j, "n", "space").get<std::int64_t>();
    if (n < 1) throw Error(ErrorCode::ParseError, "space needs n >= 1");
    std::vector<Edge> edges;
    if (j.contains("edges")) {
      for (const auto& item : j.at("edges")) {
        if (!item.is_array() || item.size() < 2 || item.size() > 3) {
          throw Error(ErrorCode::ParseError, "edge must be [u, v] or [u, v, w], got " + item.dump());
        }
        auto u = item[0].get<std::int64_t>();
        auto v = item[1].get<std::int64_t>();
        if (u < 0 || v < 0) throw Error(ErrorCode::InvalidEdge, "negative endpoint in " + item.dump());
        Rational w = item.size() == 3 ? rational_from_json(item[2]) : Rational(1);
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
      }
    }
    std::string label = j.contains("label") ? j.at("label").get<std::string>() : std::string{};
    return build_graph(static_cast<std::size_t>(n), std::move(edges), std::move(label), limits);
  });
}

// ---------------------------------------------------------------------------
// structures
// ---------------------------------------------------------------------------

inline Json structure_to_json(const HHSStructure& s) {
  const auto& data = s.data();
  const auto& names = s.relations().names;
  Json domains = Json::array();
  for (const auto& d : data.domains) {
    domains.push_back(Json{{"name", d.name}, {"space", space_to_json(d.space)}, {"projection", d.projection}});
  }
  Json nesting = Json::array();
  for (auto [child, parent] : data.nesting) nesting.push_back(Json::array({names[child], names[parent]}));
  Json orthogonal = Json::array();
  for (auto [a, b] : data.orthogonal) orthogonal.push_back(Json::array({names[a], names[b]}));
  Json rho = Json::array();
  for (const auto& r : data.rho) rho.push_back(Json{{"of", names[r.of]}, {"in", names[r.in]}, {"vertex", r.vertex}});
  Json complements = Json::array();
  for (const auto& c : data.complements) {
    complements.push_back(Json{{"v", names[c.v]}, {"w", names[c.w]}, {"comp", names[c.comp]}});
  }
  return Json{{"total_space", space_to_json(data.total_space)},
              {"domains", domains},
              {"nesting", nesting},
              {"orthogonal", orthogonal},
              {"rho", rho},
              {"complements", complements}};
}

inline MetricSpace space_or_file(const Json& j, const std::filesystem::path& base_dir, const Limits& limits) {
  if (j.is_string()) return space_from_json(read_json_file(base_dir / j.get<std::string>()), limits);
  return space_from_json(j, limits);
}

inline HHSStructure structure_from_json(const Json& j, const std::filesystem::path& base_dir = {},
                                        const Limits& limits = Limits::from_env()) {
  auto data = detail::parsing("structure", [&] {
    StructureData data;
    data.total_space = space_or_file(detail::require(j, "total_space", "structure"), base_dir, limits);
    std::map<std::string, DomainId> ids;
    for (const auto& d : detail::require(j, "domains", "structure")) {
      DomainData domain;
      domain.name = detail::require(d, "name", "domain").get<std::string>();
      domain.space = space_or_file(detail::require(d, "space", "domain " + domain.name), base_dir, limits);
      for (const auto& c : detail::require(d, "projection", "domain " + domain.name)) {
        auto value = c.get<std::int64_t>();
        if (value < 0) throw Error(ErrorCode::DanglingReference, "negative projection entry in " + domain.name);
        domain.projection.push_back(static_cast<Vertex>(value));
      }
      ids.emplace(domain.name, static_cast<DomainId>(data.domains.size()));
      data.domains.push_back(std::move(domain));
    }
    auto id = [&](const Json& name) {
      auto it = ids.find(name.get<std::string>());
      if (it == ids.end()) throw Error(ErrorCode::DanglingReference, "unknown domain " + name.dump());
      return it->second;
    };
    auto pairs = [&](const char* key, auto& out) {
      if (!j.contains(key)) return;
      for (const auto& p : j.at(key)) {
        if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::ParseError, std::string(key) + " entries are pairs");
        out.emplace_back(id(p[0]), id(p[1]));
      }
    };
    pairs("nesting", data.nesting);
    pairs("orthogonal", data.orthogonal);
    if (j.contains("rho")) {
      for (const auto& r : j.at("rho")) {
        auto vertex = detail::require(r, "vertex", "rho").get<std::int64_t>();
        if (vertex < 0) throw Error(ErrorCode::DanglingReference, "negative rho vertex");
        data.rho.push_back({id(detail::require(r, "of", "rho")), id(detail::require(r, "in", "rho")),
                            static_cast<Vertex>(vertex)});
      }
    }
    if (j.contains("complements")) {
      for (const auto& c : j.at("complements")) {
        data.complements.push_back({id(detail::require(c, "v", "complement")), id(detail::require(c, "w", "complement")),
                                    id(detail::require(c, "comp", "complement"))});
      }
    }
    return data;
  });
  return HHSStructure::create(std::move(data));
}

// ---------------------------------------------------------------------------
// generator configs
// ---------------------------------------------------------------------------

inline TreeOfFlatsConfig tree_config_from_json(const Json& j) {
  return detail::parsing("tree-of-flats config", [&] {
    TreeOfFlatsConfig cfg;
    cfg.radius = detail::require(j, "N", "tree-of-flats config").get<int>();
    cfg.depth = detail::require(j, "D", "tree-of-flats config").get<int>();
    if (j.contains("spawn_points")) {
      cfg.spawn_points.clear();
      for (const auto& p : j.at("spawn_points")) cfg.spawn_points.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    }
    return cfg;
  });
}

inline Json tree_config_to_json(const TreeOfFlatsConfig& cfg) {
  Json spawn = Json::array();
  for (auto [x, y] : cfg.spawn_points) spawn.push_back(Json::array({x, y}));
  return Json{{"generator", "tree-of-flats"}, {"N", cfg.radius}, {"D", cfg.depth}, {"spawn_points", spawn}};
}

inline IntervalComplexConfig interval_config_from_json(const Json& j) {
  return detail::parsing("interval-complex config", [&] {
    IntervalComplexConfig cfg;
    if (j.contains("label")) cfg.label = j.at("label").get<std::string>();
    if (j.contains("note")) cfg.note = j.at("note").get<std::string>();
    for (const auto& b : detail::require(j, "blocks", "interval-complex config")) {
      cfg.blocks.push_back({detail::require(b, "name", "block").get<std::string>(),
                            detail::require(b, "sides", "block").get<std::vector<int>>()});
    }
    auto face = [](const Json& f) {
      FaceRef ref;
      ref.block = detail::require(f, "block", "gluing face").get<std::string>();
      for (const auto& c : detail::require(f, "at", "gluing face")) {
        ref.at.push_back(c.is_null() ? std::optional<int>{} : std::optional<int>{c.get<int>()});
      }
      return ref;
    };
    if (j.contains("gluings")) {
      for (const auto& g : j.at("gluings")) {
        cfg.gluings.push_back({face(detail::require(g, "a", "gluing")), face(detail::require(g, "b", "gluing"))});
      }
    }
    for (const auto& d : detail::require(j, "domains", "interval-complex config")) {
      DomainDecl decl;
      decl.name = detail::require(d, "name", "domain").get<std::string>();
      decl.length = detail::require(d, "length", "domain " + decl.name).get<int>();
      if (d.contains("default")) decl.default_value = d.at("default").get<int>();
      if (d.contains("rules")) {
        for (const auto& [block, r] : d.at("rules").items()) {
          ProjectionRule rule;
          if (r.contains("axis")) rule.axis = r.at("axis").get<int>();
          if (r.contains("offset")) rule.offset = r.at("offset").get<int>();
          if (r.contains("sign")) rule.sign = r.at("sign").get<int>();
          if (r.contains("value")) rule.value = r.at("value").get<int>();
          if (rule.sign != 1 && rule.sign != -1) throw Error(ErrorCode::ParseError, "rule sign must be 1 or -1");
          decl.rules.emplace(block, rule);
        }
      }
      cfg.domains.push_back(std::move(decl));
    }
    auto pairs = [&](const char* key, auto& out) {
      if (!j.contains(key)) return;
      for (const auto& p : j.at(key)) out.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    };
    pairs("nesting", cfg.nesting);
    pairs("orthogonal", cfg.orthogonal);
    if (j.contains("rho")) {
      for (const auto& r : j.at("rho")) {
        cfg.rho.push_back({r.at("of").get<std::string>(), r.at("in").get<std::string>(), r.at("vertex").get<int>()});
      }
    }
    if (j.contains("complements")) {
      for (const auto& c : j.at("complements")) {
        cfg.complements.push_back(
            {c.at("v").get<std::string>(), c.at("w").get<std::string>(), c.at("comp").get<std::string>()});
      }
    }
    return cfg;
  });
}

/// Accepts a structure document (has "total_space") or a generator config
/// (has "generator": "tree-of-flats" | "interval-complex").
inline HHSStructure structure_from_document(const Json& j, const std::filesystem::path& base_dir = {},
                                            const Limits& limits = Limits::from_env()) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "expected a JSON object");
  if (j.contains("generator")) {
    auto generator = detail::parsing("config", [&] { return j.at("generator").get<std::string>(); });
    if (generator == "tree-of-flats") return tree_of_flats(tree_config_from_json(j), limits).structure;
    if (generator == "interval-complex") return interval_complex(interval_config_from_json(j), limits).structure;
    throw Error(ErrorCode::ParseError, "unknown generator " + generator);
  }
  return structure_from_json(j, base_dir, limits);
}

inline HHSStructure load_structure(const std::filesystem::path& path, const Limits& limits = Limits::from_env()) {
  return structure_from_document(read_json_file(path), path.parent_path(), limits);
}

/// A space document, or the total space of any structure document.
inline MetricSpace load_space(const std::filesystem::path& path, const Limits& limits = Limits::from_env()) {
  auto j = read_json_file(path);
  if (j.is_object() && (j.contains("generator") || j.contains("total_space"))) {
    return structure_from_document(j, path.parent_path(), limits).total_space();
  }
  return space_from_json(j, limits);
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

inline Json witness_to_json(const HHSStructure& s, const Witness& w) {
  Json out = Json::array();
  for (auto d : w.domains) out.push_back(s.name(d));
  for (auto p : w.points) out.push_back(p);
  return out;
}

inline Json entry_to_json(const HHSStructure& s, const AxiomEntry& e) {
  Json j{{"witness", witness_to_json(s, e.witness)}, {"flags", e.flags}};
  j["constant"] = e.constant ? constant_to_json(*e.constant) : Json(nullptr);
  if (e.constant && e.constant->denominator() != 1) j["exact"] = to_string(*e.constant);
  return j;
}

inline Json profile_to_json(const HHSStructure& s, const std::vector<ThresholdedEntry>& levels, const char* key) {
  Json out = Json::array();
  for (const auto& level : levels) {
    auto j = entry_to_json(s, level.entry);
    j[key] = rational_to_json(level.threshold);
    out.push_back(j);
  }
  return out;
}

inline Json violations_to_json(const std::vector<Violation>& violations, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (const auto& v : violations) {
    Json tuple = Json::array();
    for (auto d : v.tuple) tuple.push_back(d < names.size() ? names[d] : std::to_string(d));
    out.push_back(Json{{"axiom", std::string(to_string(v.family))}, {"tuple", tuple}, {"message", v.message}});
  }
  return out;
}

inline Json report_to_json(const HHSStructure& s, const AxiomReport& r) {
  Json per_domain = Json::array();
  for (const auto& l : r.lipschitz) {
    per_domain.push_back(Json{{"domain", s.name(l.domain)},
                              {"K", constant_to_json(l.multiplicative)},
                              {"C", constant_to_json(l.additive)},
                              {"witness", witness_to_json(s, l.witness)}});
  }
  auto lipschitz = entry_to_json(s, r.lipschitz_global);
  lipschitz["per_domain"] = per_domain;

  auto headline = [&](const std::vector<ThresholdedEntry>& levels, const char* key) {
    Json j = levels.empty() ? Json{{"constant", nullptr}, {"witness", Json::array()}, {"flags", {"no_levels"}}}
                            : entry_to_json(s, levels.front().entry);
    if (!levels.empty()) j[key] = rational_to_json(levels.front().threshold);
    j["profile"] = profile_to_json(s, levels, key);
    return j;
  };

  return Json{{"relation_violations", Json::array()},
              {"lipschitz", lipschitz},
              {"transverse_consistency", entry_to_json(s, r.consistency)},
              {"bounded_geodesic_image", headline(r.bgi, "E")},
              {"partial_realization", entry_to_json(s, r.realization)},
              {"partial_realization_rho", entry_to_json(s, r.realization_rho)},
              {"uniqueness", headline(r.uniqueness, "r")},
              {"rho_coherence", entry_to_json(s, r.rho_coherence)},
              {"orthogonal_rho_agreement", entry_to_json(s, r.orthogonal_rho_agreement)}};
}

inline Json qifit_to_json(const QIFit& fit) {
  auto exact = [](const Rational& r) { return to_string(r); };
  return Json{{"K", constant_to_json(fit.multiplicative)},
              {"C", constant_to_json(fit.additive)},
              {"threshold_s", constant_to_json(fit.threshold)},
              {"max_lower_violation", constant_to_json(fit.max_lower_violation)},
              {"max_upper_violation", constant_to_json(fit.max_upper_violation)},
              {"pairs", fit.pairs},
              {"exact", {{"K", exact(fit.multiplicative)}, {"C", exact(fit.additive)}}},
              {"flags", Json::array()}};
}

inline Json delta_to_json(const DeltaReport& d) {
  return Json{{"four_point_delta", constant_to_json(d.four_point.delta)},
              {"four_point_exact", to_string(d.four_point.delta)},
              {"witness_quadruple", d.four_point.witness},
              {"thin_triangle_delta_canonical", constant_to_json(d.thin_triangle.delta)},
              {"thin_triangle_exact", to_string(d.thin_triangle.delta)},
              {"witness_triangle", d.thin_triangle.witness}};
}

// ---------------------------------------------------------------------------
// visual exports
// ---------------------------------------------------------------------------

inline std::string to_dot(const MetricSpace& space, const std::vector<Vertex>& highlight = {}) {
  std::ostringstream out;
  out << "graph \"" << (space.label().empty() ? "space" : space.label()) << "\" {\n";
  out << "  node [shape=circle, fontsize=9];\n";
  std::vector<char> marked(space.size(), 0);
  for (Vertex v : highlight) {
    if (v < space.size()) marked[v] = 1;
  }
  for (Vertex v = 0; v < space.size(); ++v) {
    out << "  " << v;
    if (marked[v]) out << " [style=filled, fillcolor=orange]";
    out << ";\n";
  }
  for (const auto& e : space.edges()) {
    out << "  " << e.u << " -- " << e.v;
    if (e.weight != Rational(1)) out << " [label=\"" << to_string(e.weight) << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

/// Scatter of (x_U, x_V) over all x, with rho^V_U and rho^U_V drawn as
/// guide lines when defined: the transverse cross picture.
inline std::string coordinate_scatter_svg(const HHSStructure& s, DomainId u, DomainId v) {
  const double cell = 24.0;
  const double margin = 40.0;
  const auto nu = s.domain_space(u).size();
  const auto nv = s.domain_space(v).size();
  const double width = margin * 2 + cell * static_cast<double>(nu);
  const double height = margin * 2 + cell * static_cast<double>(nv);
  auto px = [&](Vertex c) { return margin + cell * (static_cast<double>(c) + 0.5); };
  auto py = [&](Vertex c) { return height - margin - cell * (static_cast<double>(c) + 0.5); };

  std::map<std::pair<Vertex, Vertex>, int> counts;
  for (Vertex x = 0; x < s.total_space().size(); ++x) ++counts[{s.project(u, x), s.project(v, x)}];

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "  <text x=\"" << width / 2 << "\" y=\"" << height - 8 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << s.name(u) << "</text>\n";
  out << "  <text x=\"12\" y=\"" << height / 2 << "\" font-size=\"12\">" << s.name(v) << "</text>\n";
  if (auto r = s.rho(v, u)) {
    out << "  <line x1=\"" << px(*r) << "\" y1=\"" << margin << "\" x2=\"" << px(*r) << "\" y2=\"" << height - margin
        << "\" stroke=\"gray\" stroke-dasharray=\"4\"/>\n";
  }
  if (auto r = s.rho(u, v)) {
    out << "  <line x1=\"" << margin << "\" y1=\"" << py(*r) << "\" x2=\"" << width - margin << "\" y2=\"" << py(*r)
        << "\" stroke=\"gray\" stroke-dasharray=\"4\"/>\n";
  }
  for (const auto& [point, count] : counts) {
    out << "  <circle cx=\"" << px(point.first) << "\" cy=\"" << py(point.second) << "\" r=\""
        << (3.0 + std::min(count, 9)) << "\" fill=\"steelblue\" fill-opacity=\"0.7\"><title>" << count
        << " point(s)</title></circle>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace hhs::io
