#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "hhs/commands.hpp"

namespace {

using hhs::cli::Command;
using hhs::cli::Format;
using hhs::cli::RunConfig;

void add_caps(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--delta-cap", cfg.delta_cap, "largest space swept for delta");
  sub->add_option("--pair-budget", cfg.pair_budget, "pair sample size / realization tuple budget");
  sub->add_option("--geodesic-cap", cfg.geodesic_cap, "geodesics listed per pair");
  sub->add_option("--family-cap", cfg.family_cap, "largest orthogonal family checked");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchically hyperbolic structures on finite graphs"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string threshold = "0";
  std::string slack = "0";
  const std::map<std::string, Format> formats{
      {"json", Format::Json}, {"csv", Format::Csv}, {"dot", Format::Dot}, {"svg-plot", Format::SvgPlot}};

  auto* build = app.add_subcommand("build", "generate an example and write its JSON");
  build->add_option("--example", cfg.example, "tree-of-flats | flat-grid | random-tree")
      ->check(CLI::IsMember({"tree-of-flats", "flat-grid", "random-tree"}));
  build->add_option("--config", cfg.input, "generator config or structure file instead of --example");
  build->add_option("--N", cfg.radius, "flat radius");
  build->add_option("--D", cfg.depth, "tree depth");
  build->add_option("--size", cfg.size, "grid side or tree vertex count");
  build->add_option("--seed", cfg.seed, "random tree seed");
  build->add_option("--out", cfg.output, "output path (default stdout)");

  auto* check = app.add_subcommand("check", "validate relations and compute every axiom constant");
  auto* distfit = app.add_subcommand("distfit", "compare d_X with the distance formula sum");
  auto* delta = app.add_subcommand("delta", "four-point and thin-triangle delta");
  auto* classify = app.add_subcommand("classify", "relation table of all domain pairs");
  auto* hull = app.add_subcommand("hull", "coarse hull of two vertices");
  auto* exporter = app.add_subcommand("export", "re-emit a structure as json, csv, dot or svg-plot");

  for (auto* sub : {check, distfit, delta, classify, hull, exporter}) {
    sub->add_option("input", cfg.input, "structure, config or space file")->required();
    sub->add_option("--out", cfg.output, "output path (default stdout)");
    add_caps(sub, cfg);
  }
  distfit->add_option("--threshold", threshold, "threshold s (integer or p/q)");
  distfit->add_option("--fit-out", cfg.fit_output, "write the fit JSON here instead of after the CSV");
  distfit->add_option("--seed", cfg.seed, "pair sampling seed");
  hull->add_option("--x", cfg.x)->required();
  hull->add_option("--y", cfg.y)->required();
  hull->add_option("--slack", slack, "slack (integer or p/q)");
  hull->add_option("--dot", cfg.dot_output, "DOT file with the hull highlighted");
  classify->add_option("--format", cfg.format, "json | csv")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"json", Format::Json}, {"csv", Format::Csv}}));
  exporter->add_option("--format", cfg.format, "json | csv | dot | svg-plot")->transform(CLI::CheckedTransformer(formats));
  exporter->add_option("--u", cfg.plot_u, "svg-plot horizontal domain");
  exporter->add_option("--v", cfg.plot_v, "svg-plot vertical domain");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : hhs::cli::kExitError;
  }

  const std::map<CLI::App*, Command> commands{{build, Command::Build},       {check, Command::Check},
                                              {distfit, Command::Distfit},   {delta, Command::Delta},
                                              {classify, Command::Classify}, {hull, Command::Hull},
                                              {exporter, Command::Export}};
  for (auto* sub : app.get_subcommands()) cfg.command = commands.at(sub);
  try {
    cfg.threshold_s = hhs::parse_rational(threshold);
    cfg.slack = hhs::parse_rational(slack);
  } catch (const hhs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hhs::cli::kExitError;
  }
  return hhs::cli::run(cfg);
}
