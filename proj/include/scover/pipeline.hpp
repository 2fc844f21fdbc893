#pragma once

// End-to-end evidence pipeline: segment the recording into envelopes,
// detect base scenarios, measure saturation, evaluate the evidence
// bindings, attach verdicts to the argument graph, and render the
// completeness report. Given the same inputs and seed the report and every
// export are byte-identical, regardless of thread count.

#include "scover/config.hpp"
#include "scover/coverage.hpp"
#include "scover/detect.hpp"
#include "scover/envelope.hpp"
#include "scover/gsn.hpp"
#include "scover/parallel.hpp"
#include "scover/rules.hpp"
#include "scover/trajectory.hpp"
#include "scover/version.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace scover {

// -----------------------------
// evidence bindings
// -----------------------------

enum class CheckKind { GapFree, SpatialCoverage, RuleTotality, SaturationThreshold, Manual };

struct EvidenceBinding {
  std::string evidence_id;
  CheckKind kind = CheckKind::GapFree;
  std::string target;     // SaturationThreshold: "types" or "parameter:<name>"
  double threshold = 0.0; // SaturationThreshold, in [0, 1]
  gsn::VerdictOutcome manual_outcome = gsn::VerdictOutcome::Inconclusive;
  std::string justification; // Manual; mandatory

  // the space-free token recorded as the verdict source
  std::string source_token() const {
    switch (kind) {
      case CheckKind::GapFree: return "gap-free";
      case CheckKind::SpatialCoverage: return "spatial-coverage";
      case CheckKind::RuleTotality: return "rule-totality";
      case CheckKind::SaturationThreshold:
        return "saturation-threshold(" + target + "," + fmt_double(threshold) + ")";
      case CheckKind::Manual: return "manual";
    }
    return "?";
  }
};

// Binding file: `bind <evidence_id> <check>[(<args>)]` lines.
inline std::vector<EvidenceBinding> parse_bindings(std::string_view document,
                                                   const gsn::ArgumentGraph& graph) {
  std::vector<EvidenceBinding> out;
  for (const auto& ln : scan_lines(document)) {
    auto tokens = split_ws(ln.text);
    if (tokens[0] != "bind" || tokens.size() < 3)
      throw ParseError("expected 'bind <evidence_id> <check>'", ln.number);

    EvidenceBinding b;
    b.evidence_id = std::string(tokens[1]);
    const gsn::ArgumentNode* node = graph.find(b.evidence_id);
    if (!node)
      throw ParseError("unknown evidence node: " + b.evidence_id, ln.number);
    if (node->kind != gsn::NodeKind::Evidence)
      throw ParseError("node '" + b.evidence_id + "' is not an evidence node", ln.number);

    // everything after the evidence id is the check expression
    const char* rest_begin = tokens[1].data() + tokens[1].size();
    const char* line_end = ln.text.data() + ln.text.size();
    std::string_view expr = trim(std::string_view(rest_begin, static_cast<size_t>(line_end - rest_begin)));

    std::string_view name = expr;
    std::string_view args;
    if (auto open = expr.find('('); open != std::string_view::npos) {
      if (expr.back() != ')')
        throw ParseError("unbalanced parentheses in check expression", ln.number);
      name = trim(expr.substr(0, open));
      args = trim(expr.substr(open + 1, expr.size() - open - 2));
    }

    if (name == "gap-free" || name == "spatial-coverage" || name == "rule-totality") {
      if (!args.empty())
        throw ParseError(std::string(name) + " takes no arguments", ln.number);
      b.kind = name == "gap-free"           ? CheckKind::GapFree
               : name == "spatial-coverage" ? CheckKind::SpatialCoverage
                                            : CheckKind::RuleTotality;
    } else if (name == "saturation-threshold") {
      b.kind = CheckKind::SaturationThreshold;
      auto parts = split_char(args, ',');
      if (parts.size() != 2)
        throw ParseError("saturation-threshold expects (target, threshold)", ln.number);
      b.target = std::string(trim(parts[0]));
      bool ok = b.target == "types" ||
                (b.target.rfind("parameter:", 0) == 0 && b.target.size() > 10);
      if (!ok)
        throw ParseError("saturation-threshold target must be 'types' or 'parameter:<name>'",
                         ln.number);
      if (!parse_double(trim(parts[1]), b.threshold) || b.threshold < 0.0 || b.threshold > 1.0)
        throw ParseError("saturation-threshold threshold must lie in [0, 1]", ln.number);
    } else if (name == "manual") {
      b.kind = CheckKind::Manual;
      auto comma = args.find(',');
      if (comma == std::string_view::npos)
        throw ParseError("manual expects (outcome, justification)", ln.number);
      if (!gsn::outcome_from_token(trim(args.substr(0, comma)), b.manual_outcome))
        throw ParseError("unknown manual outcome: " + std::string(trim(args.substr(0, comma))),
                         ln.number);
      b.justification = std::string(trim(args.substr(comma + 1)));
      if (b.justification.empty())
        throw ParseError("manual verdicts require a justification", ln.number);
    } else {
      throw ParseError("unknown check: " + std::string(name), ln.number);
    }
    out.push_back(std::move(b));
  }
  return out;
}

// -----------------------------
// analysis results bundle
// -----------------------------

struct AnalysisResults {
  std::vector<std::string> ego_ids;
  std::vector<EnvelopingScenario> envelopes;
  long truncated_envelopes = 0;
  std::vector<BaseScenarioInstance> instances;
  std::vector<ClassificationGap> gaps;
  std::vector<UncoveredSample> uncovered;
  DetectionSummary summary;
  std::vector<std::string> lint_findings;
  long dataset_points = 0;

  std::optional<SaturationCurve> type_curve;
  std::optional<CoverageEstimate> type_coverage;
  std::optional<SaturationFit> type_fit;
  std::map<std::string, SaturationCurve> parameter_curves;
  std::map<std::string, CoverageEstimate> parameter_coverage;
  std::map<std::string, SaturationFit> parameter_fits;
};

namespace detail {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(std::string(name) + ": " + e.what());
  }
}

} // namespace detail

// Ego tracks: every whitelisted track whose class is an ego class. The
// recording has no designated ego, so each qualifying road user is analyzed
// as ego in turn.
inline std::vector<std::string> select_ego_ids(const Dataset& dataset,
                                               const std::set<std::string>& ego_classes) {
  std::vector<std::string> out;
  for (const auto& [id, traj] : dataset.tracks)
    if (ego_classes.count(traj.object_class)) out.push_back(id);
  return out;
}

// segment -> detect -> gaps -> summarize -> saturation, parallel where the
// owning modules allow it, merged deterministically. with_saturation=false
// skips the subsampling stage (detection-only runs).
inline AnalysisResults run_analysis(const Dataset& dataset, const std::vector<MapRegion>& regions,
                                    const RuleSet& rules, const RunConfig& config,
                                    bool with_saturation = true) {
  AnalysisResults r;
  for (const auto& [id, traj] : dataset.tracks)
    r.dataset_points += static_cast<long>(traj.points.size());

  r.ego_ids = select_ego_ids(dataset, config.effective_ego_classes());

  r.envelopes = detail::stage("segment", [&] { return segment(dataset, regions, r.ego_ids); });
  for (const auto& e : r.envelopes)
    if (envelope_truncated(dataset, e)) ++r.truncated_envelopes;

  r.uncovered =
      detail::stage("spatial-coverage", [&] { return check_spatial_coverage(dataset, regions); });

  detail::stage("detect", [&] {
    std::vector<std::vector<BaseScenarioInstance>> inst_per(r.envelopes.size());
    std::vector<std::vector<ClassificationGap>> gaps_per(r.envelopes.size());
    parallel_for(r.envelopes.size(), config.threads, [&](size_t i) {
      inst_per[i] = detect(r.envelopes[i], dataset, rules, config.min_duration, config.bridge_gap);
      gaps_per[i] = find_gaps(r.envelopes[i], inst_per[i], config.relevance_radius, dataset);
    });
    for (auto& v : inst_per) r.instances.insert(r.instances.end(), v.begin(), v.end());
    for (auto& v : gaps_per) r.gaps.insert(r.gaps.end(), v.begin(), v.end());
    std::sort(r.instances.begin(), r.instances.end(),
              [](const BaseScenarioInstance& a, const BaseScenarioInstance& b) {
                return std::tie(a.envelope_id, a.start_frame, a.type_name, a.object_id) <
                       std::tie(b.envelope_id, b.start_frame, b.type_name, b.object_id);
              });
    std::sort(r.gaps.begin(), r.gaps.end(), [](const ClassificationGap& a, const ClassificationGap& b) {
      return std::tie(a.envelope_id, a.start_frame) < std::tie(b.envelope_id, b.start_frame);
    });
    return 0;
  });

  r.summary = detail::stage("summarize", [&] { return summarize(r.instances, dataset); });
  r.lint_findings = lint_rules(rules);

  detail::stage("saturation", [&] {
    const long n = static_cast<long>(r.instances.size());
    if (!with_saturation || n == 0) return 0;

    std::vector<std::string> labels;
    labels.reserve(r.instances.size());
    for (const auto& inst : r.instances) labels.push_back(inst.type_name);

    std::vector<long> sizes = config.sizes.empty() ? default_size_grid(n) : config.sizes;
    r.type_curve = discovery_curve(labels, sizes, config.repetitions, config.seed, config.threads);
    r.type_coverage = good_turing_coverage(labels);
    if (r.type_curve->sample_sizes.size() >= 3) r.type_fit = fit_saturation(*r.type_curve);

    const std::string param = "object_start_speed";
    r.parameter_curves[param] =
        parameter_saturation(r.summary.object_start_speeds, config.bin_width_for(param), sizes,
                             config.repetitions, config.seed, config.threads);
    {
      std::vector<std::string> bin_labels;
      for (double v : r.summary.object_start_speeds)
        bin_labels.push_back(std::to_string(
            static_cast<long long>(std::floor(v / config.bin_width_for(param)))));
      r.parameter_coverage[param] = good_turing_coverage(bin_labels);
    }
    if (r.parameter_curves[param].sample_sizes.size() >= 3)
      r.parameter_fits[param] = fit_saturation(r.parameter_curves[param]);
    return 0;
  });

  return r;
}

// -----------------------------
// verdict evaluation
// -----------------------------

inline gsn::EvidenceVerdict evaluate_binding(const EvidenceBinding& binding,
                                             const AnalysisResults& results,
                                             std::int64_t timestamp) {
  using gsn::VerdictOutcome;
  gsn::EvidenceVerdict v;
  v.source = binding.source_token();
  v.timestamp = timestamp;

  switch (binding.kind) {
    case CheckKind::GapFree: {
      if (results.envelopes.empty()) {
        v.outcome = VerdictOutcome::Inconclusive;
        v.detail = "no envelopes segmented";
      } else if (results.gaps.empty()) {
        v.outcome = VerdictOutcome::Refuting;
        v.detail = "0 gaps across " + std::to_string(results.envelopes.size()) + " envelopes";
      } else {
        v.outcome = VerdictOutcome::Confirming;
        v.detail = std::to_string(results.gaps.size()) + " gaps across " +
                   std::to_string(results.envelopes.size()) + " envelopes";
      }
      break;
    }
    case CheckKind::SpatialCoverage: {
      if (results.dataset_points == 0) {
        v.outcome = VerdictOutcome::Inconclusive;
        v.detail = "dataset has no points";
      } else if (results.uncovered.empty()) {
        v.outcome = VerdictOutcome::Refuting;
        v.detail = "0 of " + std::to_string(results.dataset_points) + " points uncovered";
      } else {
        v.outcome = VerdictOutcome::Confirming;
        v.detail = std::to_string(results.uncovered.size()) + " of " +
                   std::to_string(results.dataset_points) + " points uncovered";
      }
      break;
    }
    case CheckKind::RuleTotality: {
      if (results.lint_findings.empty()) {
        v.outcome = VerdictOutcome::Refuting;
        v.detail = "rules compiled; exclusivity lint clean";
      } else {
        v.outcome = VerdictOutcome::Confirming;
        v.detail = std::to_string(results.lint_findings.size()) +
                   " lint finding(s): " + results.lint_findings.front();
      }
      break;
    }
    case CheckKind::SaturationThreshold: {
      const CoverageEstimate* est = nullptr;
      long n = 0;
      if (binding.target == "types") {
        n = static_cast<long>(results.instances.size());
        if (results.type_coverage) est = &*results.type_coverage;
      } else {
        std::string param = binding.target.substr(10);
        auto it = results.parameter_coverage.find(param);
        n = static_cast<long>(results.summary.object_start_speeds.size());
        if (it != results.parameter_coverage.end()) est = &it->second;
        else if (n >= 30)
          throw Error("missing result artifact for binding target '" + binding.target + "'");
      }
      if (n < 30) {
        v.outcome = VerdictOutcome::Inconclusive;
        v.detail = "N=" + std::to_string(n) + " below minimum 30";
      } else {
        v.outcome = est->estimate >= binding.threshold ? VerdictOutcome::Refuting
                                                       : VerdictOutcome::Confirming;
        v.detail = "estimate " + fmt_double(est->estimate) +
                   (est->estimate >= binding.threshold ? " >= " : " < ") + "threshold " +
                   fmt_double(binding.threshold) + " (N=" + std::to_string(n) + ")";
      }
      break;
    }
    case CheckKind::Manual: {
      v.outcome = binding.manual_outcome;
      v.detail = binding.justification;
      break;
    }
  }
  return v;
}

// -----------------------------
// report
// -----------------------------

inline std::string render_report(const gsn::ArgumentGraph& graph, const Dataset& dataset,
                                 const AnalysisResults& r,
                                 const std::vector<EvidenceBinding>& bindings,
                                 const std::vector<gsn::EvidenceVerdict>& verdicts,
                                 const RunConfig& config, const std::string& fingerprint) {
  std::string out;
  out += "completeness report\n";
  out += "===================\n\n";
  out += "tool: scover " + std::string(kVersion) + "\n";
  out += "fingerprint: " + fingerprint + "\n";

  out += "\n[config]\n";
  for (const auto& ln : scan_lines(canonical_config_dump(config)))
    out += "  " + ln.text + "\n";

  out += "\n[dataset]\n";
  out += "recording: " + dataset.meta.recording_id + "  location: " + dataset.meta.location_id +
         "  frame rate: " + fmt_double(dataset.meta.frame_rate) + " Hz\n";
  std::map<std::string, long> class_counts;
  for (const auto& [id, traj] : dataset.tracks) ++class_counts[traj.object_class];
  out += "tracks: " + std::to_string(dataset.tracks.size());
  if (!class_counts.empty()) {
    out += " (";
    bool first = true;
    for (const auto& [cls, count] : class_counts) {
      if (!first) out += ", ";
      out += cls + ": " + std::to_string(count);
      first = false;
    }
    out += ")";
  }
  out += "\n";
  out += "points: " + std::to_string(r.dataset_points) + "\n";
  out += "ego tracks: " + std::to_string(r.ego_ids.size()) + "\n";

  out += "\n[envelopes]\n";
  out += "count: " + std::to_string(r.envelopes.size()) + "\n";
  out += "truncated: " + std::to_string(r.truncated_envelopes) + "\n";

  out += "\n[instances]\n";
  out += "total: " + std::to_string(r.summary.total) +
         " (short retained: " + std::to_string(r.summary.short_retained) + ")\n";
  for (const auto& [type, count] : r.summary.counts_per_type)
    out += type + ": " + std::to_string(count) + "\n";

  out += "\n[gaps]\n";
  out += "count: " + std::to_string(r.gaps.size()) + "\n";
  for (const auto& g : r.gaps) {
    out += g.envelope_id + " [" + std::to_string(g.start_frame) + ", " +
           std::to_string(g.end_frame) + "] nearby:";
    for (const auto& id : g.nearby_objects) out += " " + id;
    out += "\n";
  }

  out += "\n[spatial coverage]\n";
  out += "uncovered points: " + std::to_string(r.uncovered.size()) + " of " +
         std::to_string(r.dataset_points) + "\n";

  out += "\n[saturation]\n";
  if (!r.type_curve) {
    out += "no instances; saturation not computed\n";
  } else {
    auto curve_block = [&](const std::string& name, const SaturationCurve& curve,
                           const CoverageEstimate* est, const SaturationFit* fit) {
      out += name + ": N=" + std::to_string(curve.sample_sizes.empty()
                                                ? 0
                                                : curve.sample_sizes.back()) +
             " repetitions=" + std::to_string(curve.repetitions) +
             " seed=" + std::to_string(curve.seed) + "\n";
      if (!curve.sample_sizes.empty())
        out += "  final point: n=" + std::to_string(curve.sample_sizes.back()) +
               " mean_distinct=" + fmt_double(curve.mean_distinct.back()) + "\n";
      if (est)
        out += "  coverage estimate: " + fmt_double(est->estimate) + " (" + est->method +
               ", singletons " + std::to_string(est->singletons) + " / total " +
               std::to_string(est->total) + ")\n";
      if (fit)
        out += "  fit: k_hat=" + fmt_double(fit->k_hat) + " tau_hat=" + fmt_double(fit->tau_hat) +
               " rmse=" + fmt_double(fit->rmse) + "\n";
    };
    curve_block("types", *r.type_curve, r.type_coverage ? &*r.type_coverage : nullptr,
                r.type_fit ? &*r.type_fit : nullptr);
    for (const auto& [param, curve] : r.parameter_curves) {
      auto est_it = r.parameter_coverage.find(param);
      auto fit_it = r.parameter_fits.find(param);
      curve_block("parameter " + param +
                      " (bin " + fmt_double(config.bin_width_for(param)) + ")",
                  curve, est_it != r.parameter_coverage.end() ? &est_it->second : nullptr,
                  fit_it != r.parameter_fits.end() ? &fit_it->second : nullptr);
    }
  }

  if (!r.lint_findings.empty()) {
    out += "\n[rule lint]\n";
    for (const auto& f : r.lint_findings) out += f + "\n";
  }

  out += "\n[verdicts]\n";
  for (size_t i = 0; i < bindings.size(); ++i)
    out += bindings[i].evidence_id + " " + verdicts[i].source + ": " +
           gsn::outcome_token(verdicts[i].outcome) + " - " + verdicts[i].detail + "\n";

  out += "\n[statuses]\n";
  std::vector<const gsn::ArgumentNode*> nodes;
  for (const auto& n : graph.nodes()) nodes.push_back(&n);
  std::sort(nodes.begin(), nodes.end(),
            [](const gsn::ArgumentNode* a, const gsn::ArgumentNode* b) { return a->id < b->id; });
  for (const auto* n : nodes) {
    if (!n->status) continue;
    out += n->id + " (" + gsn::kind_token(n->kind) + "): " + gsn::status_token(*n->status) + "\n";
  }
  for (const auto* root : graph.root_goals())
    out += "top goal " + root->id + ": " + gsn::status_token(*root->status) + "\n";

  return out;
}

// -----------------------------
// pipeline
// -----------------------------

struct PipelineRun {
  gsn::ArgumentGraph graph; // verdicts attached, statuses propagated
  AnalysisResults results;
  std::vector<EvidenceBinding> bindings;
  std::vector<gsn::EvidenceVerdict> verdicts; // aligned with bindings
  std::string report;
  std::string fingerprint;
};

// Aggregate over root goals, for the exit-code contract: Supported only if
// every root goal is, Undermined as soon as one is.
inline gsn::NodeStatus overall_status(const gsn::ArgumentGraph& graph) {
  bool all_supported = true, any_undermined = false, any_root = false;
  for (const auto* root : graph.root_goals()) {
    any_root = true;
    if (root->status != gsn::NodeStatus::Supported) all_supported = false;
    if (root->status == gsn::NodeStatus::Undermined) any_undermined = true;
  }
  if (any_undermined) return gsn::NodeStatus::Undermined;
  if (any_root && all_supported) return gsn::NodeStatus::Supported;
  return gsn::NodeStatus::Undetermined;
}

inline PipelineRun run_pipeline(const gsn::ArgumentGraph& graph, const Dataset& dataset,
                                const std::vector<MapRegion>& regions, const RuleSet& rules,
                                const std::vector<EvidenceBinding>& bindings,
                                const RunConfig& config) {
  {
    auto violations = gsn::validate_structure(graph);
    if (!violations.empty())
      throw Error("graph: structural violation " + violations.front().rule + " at " +
                  violations.front().node_id + ": " + violations.front().message);
  }

  PipelineRun run;
  run.bindings = bindings;
  run.results = run_analysis(dataset, regions, rules, config);

  gsn::ArgumentGraph working = graph;
  for (const auto& b : bindings) {
    gsn::EvidenceVerdict v = detail::stage(
        "evaluate", [&] { return evaluate_binding(b, run.results, config.timestamp); });
    working = gsn::attach_verdict(working, b.evidence_id, v);
    run.verdicts.push_back(std::move(v));
  }
  run.graph = detail::stage("propagate", [&] { return gsn::propagate_status(working); });

  run.fingerprint =
      to_hex(fnv1a64(std::string("scover ") + kVersion + "\n" + canonical_config_dump(config)));
  run.report = render_report(run.graph, dataset, run.results, run.bindings, run.verdicts, config,
                             run.fingerprint);
  return run;
}

} // namespace scover
