#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hhs/axiom_checker.hpp"
#include "hhs/distance_formula.hpp"
#include "hhs/error.hpp"
#include "hhs/generators.hpp"
#include "hhs/hyperbolicity.hpp"
#include "hhs/io.hpp"
#include "hhs/limits.hpp"
#include "hhs/relation_axioms.hpp"

namespace hhs::cli {

enum class Command { Build, Check, Distfit, Delta, Classify, Hull, Export };
enum class Format { Json, Csv, Dot, SvgPlot };

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitError = 2;

struct RunConfig {
  Command command = Command::Check;
  std::filesystem::path input;
  /// Empty means standard output.
  std::filesystem::path output;
  /// distfit: where the fit goes; empty means after the CSV on `output`.
  std::filesystem::path fit_output;
  /// hull: optional DOT rendering with the hull highlighted.
  std::filesystem::path dot_output;
  Format format = Format::Json;

  std::size_t delta_cap = Limits{}.delta_vertices;
  std::size_t pair_budget = CheckConfig{}.tuple_budget;
  std::size_t geodesic_cap = 4096;
  std::size_t family_cap = CheckConfig{}.family_cap;
  Rational threshold_s{0};
  Rational slack{0};

  // build
  std::string example = "tree-of-flats";
  int radius = 1;
  int depth = 0;
  std::size_t size = 4;
  std::uint64_t seed = 1;

  // hull
  Vertex x = 0;
  Vertex y = 0;
  // export svg-plot
  std::string plot_u;
  std::string plot_v;

  void validate() const {
    if (delta_cap == 0 || pair_budget == 0 || geodesic_cap == 0 || family_cap == 0) {
      throw Error(ErrorCode::ConfigValidation, "caps must be positive");
    }
    if (threshold_s < 0) throw Error(ErrorCode::ConfigValidation, "threshold_s must be nonnegative");
    if (slack < 0) throw Error(ErrorCode::ConfigValidation, "slack must be nonnegative");
    if (command != Command::Build && input.empty()) throw Error(ErrorCode::ConfigValidation, "an input file is required");
  }

  Limits limits() const {
    Limits l = Limits::from_env();
    l.delta_vertices = delta_cap;
    return l;
  }
};

/// Maps an error to the exit code contract.
inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::RelationConflict:
    case ErrorCode::MissingRho:
    case ErrorCode::DanglingReference:
    case ErrorCode::ConfigValidation:
    case ErrorCode::ValidationFirst:
      return kExitValidation;
    default:
      return kExitError;
  }
}

namespace detail {

inline void emit(const std::filesystem::path& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_text_file(path, text);
  }
}

}  // namespace detail

inline int cmd_build(const RunConfig& cfg, std::ostream& out) {
  const auto limits = cfg.limits();
  io::Json doc;
  if (!cfg.input.empty()) {
    doc = io::structure_to_json(io::load_structure(cfg.input, limits));
  } else if (cfg.example == "tree-of-flats") {
    TreeOfFlatsConfig tree;
    tree.radius = cfg.radius;
    tree.depth = cfg.depth;
    doc = io::structure_to_json(tree_of_flats(tree, limits).structure);
  } else if (cfg.example == "flat-grid") {
    doc = io::space_to_json(flat_grid(cfg.size, limits));
  } else if (cfg.example == "random-tree") {
    doc = io::space_to_json(random_tree(cfg.size, cfg.seed, limits));
  } else {
    throw Error(ErrorCode::ParseError, "unknown example " + cfg.example);
  }
  detail::emit(cfg.output, io::dump(doc), out);
  return kExitOk;
}

/// Writes the report in every case. Exit 1 when the structure cannot be
/// built or the relation axioms fail.
inline int cmd_check(const RunConfig& cfg, std::ostream& out) {
  io::Json report;
  int code = kExitOk;
  try {
    auto s = io::load_structure(cfg.input, cfg.limits());
    auto violations = validate_relation_axioms(s);
    if (violations.empty()) {
      CheckConfig check;
      check.family_cap = cfg.family_cap;
      check.tuple_budget = cfg.pair_budget;
      report = io::report_to_json(s, full_report(s, check));
    } else {
      report = io::Json{{"relation_violations", io::violations_to_json(violations, s.relations().names)}};
      code = kExitValidation;
    }
  } catch (const Error& e) {
    code = exit_code_for(e.code());
    if (code != kExitValidation) throw;
    report = io::Json{{"relation_violations",
                       io::Json::array({io::Json{{"axiom", std::string(to_string(e.code()))},
                                                 {"tuple", io::Json::array()},
                                                 {"message", e.what()}}})}};
  }
  detail::emit(cfg.output, io::dump(report), out);
  return code;
}

/// CSV rows x,y,d_X,sum,thresholded_sum (exact values) and the fitted
/// constants. Pair sets larger than pair_budget are sampled.
inline int cmd_distfit(const RunConfig& cfg, std::ostream& out) {
  auto s = io::load_structure(cfg.input, cfg.limits());
  auto pairs = sample_vertex_pairs(s.total_space(), cfg.pair_budget, cfg.seed);
  std::ostringstream csv;
  csv << "x,y,d_X,sum,thresholded_sum\n";
  for (auto [x, y] : pairs) {
    csv << x << ',' << y << ',' << to_string(s.total_space().distance(x, y)) << ',' << to_string(df_sum(s, x, y))
        << ',' << to_string(df_thresholded(s, x, y, cfg.threshold_s)) << '\n';
  }
  io::Json fit;
  try {
    fit = io::qifit_to_json(fit_qi_constants(s, pairs, cfg.threshold_s));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegeneratePairs) throw;
    fit = io::Json{{"K", nullptr},
                   {"C", nullptr},
                   {"threshold_s", io::constant_to_json(cfg.threshold_s)},
                   {"pairs", pairs.size()},
                   {"flags", {std::string(to_string(e.code()))}},
                   {"message", e.what()}};
  }
  if (cfg.fit_output.empty()) {
    detail::emit(cfg.output, csv.str() + io::dump(fit), out);
  } else {
    detail::emit(cfg.output, csv.str(), out);
    io::write_text_file(cfg.fit_output, io::dump(fit));
  }
  return kExitOk;
}

inline int cmd_delta(const RunConfig& cfg, std::ostream& out) {
  const auto limits = cfg.limits();
  auto space = io::load_space(cfg.input, limits);
  auto j = io::delta_to_json(delta_report(space, limits));
  j["n"] = space.size();
  detail::emit(cfg.output, io::dump(j), out);
  return kExitOk;
}

struct PairRow {
  DomainId u = 0;
  DomainId v = 0;
  RelationKind kind = RelationKind::Transverse;
  std::optional<Vertex> rho_u_in_v;
  std::optional<Vertex> rho_v_in_u;
};

/// Every unordered pair u < v, ordered by (u, v).
inline std::vector<PairRow> classify(const HHSStructure& s) {
  std::vector<PairRow> rows;
  for (DomainId u = 0; u < s.domain_count(); ++u) {
    for (DomainId v = u + 1; v < s.domain_count(); ++v) {
      rows.push_back({u, v, s.relation_of(u, v).kind, s.rho(u, v), s.rho(v, u)});
    }
  }
  return rows;
}

inline std::string describe(const HHSStructure& s, const PairRow& row) {
  switch (row.kind) {
    case RelationKind::Nested: {
      auto rel = s.relation_of(row.u, row.v);
      return s.name(rel.lesser) + " nested in " + s.name(rel.greater);
    }
    case RelationKind::Orthogonal: return s.name(row.u) + " orthogonal to " + s.name(row.v);
    case RelationKind::Transverse: return s.name(row.u) + " transverse to " + s.name(row.v);
    case RelationKind::Equal: return s.name(row.u);
  }
  return {};
}

inline int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  auto s = io::load_structure(cfg.input, cfg.limits());
  auto rows = classify(s);
  auto rho_text = [](const std::optional<Vertex>& r) { return r ? std::to_string(*r) : std::string("-"); };
  std::ostringstream text;
  if (cfg.format == Format::Json) {
    io::Json table = io::Json::array();
    for (const auto& row : rows) {
      auto rel = s.relation_of(row.u, row.v);
      io::Json j{{"u", s.name(row.u)},
                 {"v", s.name(row.v)},
                 {"relation", std::string(to_string(row.kind))},
                 {"rho_u_in_v", row.rho_u_in_v ? io::Json(*row.rho_u_in_v) : io::Json(nullptr)},
                 {"rho_v_in_u", row.rho_v_in_u ? io::Json(*row.rho_v_in_u) : io::Json(nullptr)}};
      if (row.kind == RelationKind::Nested) j["nested_in"] = s.name(rel.greater);
      table.push_back(j);
    }
    text << io::dump(io::Json{{"domains", s.relations().names}, {"pairs", table}});
  } else {
    text << "u,v,relation,rho_u_in_v,rho_v_in_u,description\n";
    for (const auto& row : rows) {
      text << s.name(row.u) << ',' << s.name(row.v) << ',' << std::string(to_string(row.kind)) << ','
           << rho_text(row.rho_u_in_v) << ',' << rho_text(row.rho_v_in_u) << ',' << describe(s, row) << '\n';
    }
  }
  detail::emit(cfg.output, text.str(), out);
  return kExitOk;
}

inline int cmd_hull(const RunConfig& cfg, std::ostream& out) {
  auto s = io::load_structure(cfg.input, cfg.limits());
  auto hull = coarse_hull(s, cfg.x, cfg.y, cfg.slack);
  io::Json j{{"x", cfg.x}, {"y", cfg.y}, {"slack", io::rational_to_json(cfg.slack)}, {"vertices", hull},
             {"size", hull.size()}};
  detail::emit(cfg.output, io::dump(j), out);
  if (!cfg.dot_output.empty()) io::write_text_file(cfg.dot_output, io::to_dot(s.total_space(), hull));
  return kExitOk;
}

/// One row per vertex with its coordinate in every domain.
inline std::string coordinates_csv(const HHSStructure& s) {
  std::ostringstream csv;
  csv << "x";
  for (DomainId u = 0; u < s.domain_count(); ++u) csv << ',' << s.name(u);
  csv << '\n';
  for (Vertex x = 0; x < s.total_space().size(); ++x) {
    csv << x;
    for (DomainId u = 0; u < s.domain_count(); ++u) csv << ',' << s.project(u, x);
    csv << '\n';
  }
  return csv.str();
}

inline int cmd_export(const RunConfig& cfg, std::ostream& out) {
  auto s = io::load_structure(cfg.input, cfg.limits());
  std::string text;
  switch (cfg.format) {
    case Format::Json: text = io::dump(io::structure_to_json(s)); break;
    case Format::Csv: text = coordinates_csv(s); break;
    case Format::Dot: text = io::to_dot(s.total_space()); break;
    case Format::SvgPlot: {
      if (s.domain_count() < 2 && (cfg.plot_u.empty() || cfg.plot_v.empty())) {
        throw Error(ErrorCode::ConfigValidation, "svg-plot needs two domains");
      }
      DomainId u = cfg.plot_u.empty() ? 0 : s.find(cfg.plot_u);
      DomainId v = cfg.plot_v.empty() ? 1 : s.find(cfg.plot_v);
      text = io::coordinate_scatter_svg(s, u, v);
      break;
    }
  }
  detail::emit(cfg.output, text, out);
  return kExitOk;
}

/// Dispatches and applies the exit code contract: 0 success, 1 validation
/// failure, 2 parse or other error.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    cfg.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  try {
    switch (cfg.command) {
      case Command::Build: return cmd_build(cfg, out);
      case Command::Check: return cmd_check(cfg, out);
      case Command::Distfit: return cmd_distfit(cfg, out);
      case Command::Delta: return cmd_delta(cfg, out);
      case Command::Classify: return cmd_classify(cfg, out);
      case Command::Hull: return cmd_hull(cfg, out);
      case Command::Export: return cmd_export(cfg, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace hhs::cli
