// scover: scenario-coverage analysis for trajectory recordings.
//
// Subcommands:
//   validate   check a GSN argument document for structural violations
//   detect     segment envelopes and detect base scenarios, report gaps
//   saturate   discovery curves, coverage estimates, and saturation fits
//   evaluate   full pipeline: verdicts, status propagation, report
//
// Exit codes: 0 success (detect: gap-free; evaluate: top goal supported),
// 1 validate found violations, 2 tool/input error, 3 detect found gaps,
// 4 evaluate ended undermined, 5 evaluate ended undetermined.

#include "CLI11.hpp"

#include "scover/config.hpp"
#include "scover/coverage.hpp"
#include "scover/detect.hpp"
#include "scover/envelope.hpp"
#include "scover/gsn.hpp"
#include "scover/pipeline.hpp"
#include "scover/rules.hpp"
#include "scover/trajectory.hpp"
#include "scover/version.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace scover;

struct Override {
  std::string key;
  std::string value;
};

// Every config key doubles as a flag; flags are applied after the config
// file, so they win.
const std::vector<std::string>& flag_keys() {
  static const std::vector<std::string> keys = {
      "graph",       "tracks",     "tracks-meta",      "recording-meta",
      "regions",     "rules",      "bindings",         "columns",
      "out",         "seed",       "min-duration",     "bridge-gap",
      "relevance-radius", "repetitions", "threads",    "timestamp",
      "sizes",       "bin-width",  "classes",          "ego-classes"};
  return keys;
}

void add_config_flags(CLI::App* cmd, std::string& config_path, std::vector<Override>& overrides) {
  cmd->add_option("--config", config_path, "run configuration file (key: value lines)");
  for (const auto& key : flag_keys()) {
    cmd->add_option_function<std::vector<std::string>>(
           "--" + key,
           [&overrides, key](const std::vector<std::string>& values) {
             for (const auto& v : values) overrides.push_back(Override{key, v});
           },
           "override config key '" + key + "'")
        ->take_all();
  }
}

RunConfig resolve_config(const std::string& config_path, const std::vector<Override>& overrides) {
  RunConfig config;
  if (!config_path.empty()) config = parse_run_config(read_text_file(config_path));
  for (const auto& o : overrides) {
    try {
      apply_config_entry(config, o.key, o.value);
    } catch (const ParseError& e) {
      throw Error("flag --" + o.key + ": " + e.what());
    }
  }
  validate_run_config(config);
  return config;
}

void require_path(const std::string& value, const std::string& key) {
  if (value.empty()) throw Error("missing required input '" + key + "' (config key or flag)");
}

LoadOptions load_options(const RunConfig& config) {
  LoadOptions opt;
  if (!config.classes.empty()) opt.class_whitelist = config.classes;
  if (!config.columns_path.empty())
    opt.column_map = parse_column_map(read_text_file(config.columns_path));
  return opt;
}

Dataset load_configured_dataset(const RunConfig& config) {
  require_path(config.tracks_path, "tracks");
  require_path(config.tracks_meta_path, "tracks-meta");
  require_path(config.recording_meta_path, "recording-meta");
  return load_dataset(config.tracks_path, config.tracks_meta_path, config.recording_meta_path,
                      load_options(config));
}

std::vector<MapRegion> load_configured_regions(const RunConfig& config) {
  require_path(config.regions_path, "regions");
  return parse_regions(read_text_file(config.regions_path));
}

RuleSet load_configured_rules(const RunConfig& config) {
  if (config.rules_path.empty()) return compile_rules(default_rule_document());
  return compile_rules(read_text_file(config.rules_path));
}

void write_output(const RunConfig& config, const std::string& name, const std::string& content) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  write_text_file((fs::path(config.out_dir) / name).string(), content);
}

std::string render_detect_summary(const Dataset& dataset, const AnalysisResults& r) {
  std::string out;
  out += "detection summary\n";
  out += "=================\n";
  out += "recording: " + dataset.meta.recording_id +
         "  tracks: " + std::to_string(dataset.tracks.size()) +
         "  points: " + std::to_string(r.dataset_points) + "\n";
  out += "ego tracks: " + std::to_string(r.ego_ids.size()) + "\n";
  out += "envelopes: " + std::to_string(r.envelopes.size()) +
         " (truncated: " + std::to_string(r.truncated_envelopes) + ")\n";
  out += "instances: " + std::to_string(r.summary.total) +
         " (short retained: " + std::to_string(r.summary.short_retained) + ")\n";
  for (const auto& [type, count] : r.summary.counts_per_type)
    out += "  " + type + ": " + std::to_string(count) + "\n";
  out += "gaps: " + std::to_string(r.gaps.size()) + "\n";
  out += "uncovered points: " + std::to_string(r.uncovered.size()) + "\n";
  if (!r.lint_findings.empty()) {
    out += "lint findings:\n";
    for (const auto& f : r.lint_findings) out += "  " + f + "\n";
  }
  return out;
}

void write_detect_outputs(const RunConfig& config, const Dataset& dataset,
                          const AnalysisResults& r) {
  write_output(config, "envelopes.csv", export_envelopes_csv(r.envelopes));
  write_output(config, "instances.csv", export_instances_csv(r.instances));
  write_output(config, "gaps.csv", export_gaps_csv(r.gaps));
  write_output(config, "summary.txt", render_detect_summary(dataset, r));
}

void write_saturation_outputs(const RunConfig& config, const AnalysisResults& r) {
  auto curve_or_empty = [](const std::optional<SaturationCurve>& c) {
    return c ? export_curve_csv(*c) : CsvWriter({"n", "mean_distinct", "stddev"}).render();
  };
  auto cov_or_empty = [](const std::optional<CoverageEstimate>& e) {
    return e ? export_coverage_csv(*e)
             : CsvWriter({"estimate", "method", "singletons", "total"}).render();
  };
  auto fit_or_empty = [](const std::optional<SaturationFit>& f) {
    return f ? export_fit_csv(*f) : CsvWriter({"k_hat", "tau_hat", "rmse"}).render();
  };

  write_output(config, "types_curve.csv", curve_or_empty(r.type_curve));
  write_output(config, "types_coverage.csv", cov_or_empty(r.type_coverage));
  write_output(config, "types_fit.csv", fit_or_empty(r.type_fit));

  const std::string param = "object_start_speed";
  auto curve_it = r.parameter_curves.find(param);
  auto cov_it = r.parameter_coverage.find(param);
  auto fit_it = r.parameter_fits.find(param);
  write_output(config, param + "_curve.csv",
               curve_or_empty(curve_it != r.parameter_curves.end()
                                  ? std::optional<SaturationCurve>(curve_it->second)
                                  : std::nullopt));
  write_output(config, param + "_coverage.csv",
               cov_or_empty(cov_it != r.parameter_coverage.end()
                                ? std::optional<CoverageEstimate>(cov_it->second)
                                : std::nullopt));
  write_output(config, param + "_fit.csv",
               fit_or_empty(fit_it != r.parameter_fits.end()
                                ? std::optional<SaturationFit>(fit_it->second)
                                : std::nullopt));
}

int cmd_validate(const std::string& graph_path) {
  std::string text = read_text_file(graph_path);
  gsn::ArgumentGraph graph = gsn::parse_graph(text);
  auto violations = gsn::validate_structure(graph);
  for (const auto& v : violations)
    std::cout << v.rule << " " << v.node_id << ": " << v.message << "\n";
  if (!violations.empty()) return 1;
  std::cout << "valid: " << graph.nodes().size() << " nodes, " << graph.edges().size()
            << " edges\n";
  return 0;
}

int cmd_detect(const RunConfig& config) {
  Dataset dataset = load_configured_dataset(config);
  auto regions = load_configured_regions(config);
  RuleSet rules = load_configured_rules(config);
  AnalysisResults r = run_analysis(dataset, regions, rules, config, /*with_saturation=*/false);
  write_detect_outputs(config, dataset, r);
  return r.gaps.empty() ? 0 : 3;
}

int cmd_saturate(const RunConfig& config) {
  Dataset dataset = load_configured_dataset(config);
  auto regions = load_configured_regions(config);
  RuleSet rules = load_configured_rules(config);
  AnalysisResults r = run_analysis(dataset, regions, rules, config);
  write_detect_outputs(config, dataset, r);
  write_saturation_outputs(config, r);
  return 0;
}

int cmd_evaluate(const RunConfig& config) {
  require_path(config.graph_path, "graph");
  require_path(config.bindings_path, "bindings");
  gsn::ArgumentGraph graph = gsn::parse_graph(read_text_file(config.graph_path));
  Dataset dataset = load_configured_dataset(config);
  auto regions = load_configured_regions(config);
  RuleSet rules = load_configured_rules(config);
  auto bindings = parse_bindings(read_text_file(config.bindings_path), graph);

  PipelineRun run = run_pipeline(graph, dataset, regions, rules, bindings, config);

  write_detect_outputs(config, dataset, run.results);
  write_saturation_outputs(config, run.results);
  write_output(config, "report.txt", run.report);
  write_output(config, "graph.gsn", gsn::export_graph(run.graph, gsn::ExportMode::Document));

  switch (overall_status(run.graph)) {
    case gsn::NodeStatus::Supported: return 0;
    case gsn::NodeStatus::Undermined: return 4;
    default: return 5;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenario-coverage analysis for trajectory recordings"};
  app.set_version_flag("--version", scover::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::vector<Override> overrides;
  std::string validate_graph;

  CLI::App* validate = app.add_subcommand("validate", "check a GSN document structurally");
  validate->add_option("graph", validate_graph, "GSN document path");
  validate->add_option("--config", config_path, "run configuration file");

  CLI::App* detect_cmd = app.add_subcommand("detect", "detect base scenarios and report gaps");
  add_config_flags(detect_cmd, config_path, overrides);
  CLI::App* saturate_cmd = app.add_subcommand("saturate", "saturation curves and coverage");
  add_config_flags(saturate_cmd, config_path, overrides);
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "full evidence pipeline");
  add_config_flags(evaluate_cmd, config_path, overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) {
      scover::RunConfig config = resolve_config(config_path, overrides);
      std::string path = !validate_graph.empty() ? validate_graph : config.graph_path;
      require_path(path, "graph");
      return cmd_validate(path);
    }
    scover::RunConfig config = resolve_config(config_path, overrides);
    if (detect_cmd->parsed()) return cmd_detect(config);
    if (saturate_cmd->parsed()) return cmd_saturate(config);
    if (evaluate_cmd->parsed()) return cmd_evaluate(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
