#pragma once

// Run configuration: one line-oriented `key: value` file plus CLI flag
// overrides. The canonical dump below is what the report fingerprint
// hashes, so anything that changes results must appear in it (and the
// knobs that cannot change results, `out` and `threads`, must not).

#include "scover/error.hpp"
#include "scover/lineio.hpp"
#include "scover/util.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace scover {

struct RunConfig {
  // inputs
  std::string graph_path;
  std::string tracks_path;
  std::string tracks_meta_path;
  std::string recording_meta_path;
  std::string regions_path;
  std::string rules_path;    // empty = built-in default rule set
  std::string bindings_path;
  std::string columns_path;  // optional column remap file
  std::string out_dir = "out";

  std::uint64_t seed = 1;
  double min_duration = 0.4;      // s
  double bridge_gap = 0.2;        // s
  double relevance_radius = 50.0; // m
  std::map<std::string, double> bin_widths; // parameter name -> bin width
  std::vector<long> sizes;        // empty = default logarithmic grid
  long repetitions = 200;
  int threads = 1;
  std::int64_t timestamp = 0;     // stamped on generated verdicts

  std::set<std::string> classes;     // empty = library default whitelist
  std::set<std::string> ego_classes; // empty = {car, truck_bus}

  double bin_width_for(const std::string& parameter) const {
    auto it = bin_widths.find(parameter);
    return it == bin_widths.end() ? 0.5 : it->second;
  }

  std::set<std::string> effective_ego_classes() const {
    return ego_classes.empty() ? std::set<std::string>{"car", "truck_bus"} : ego_classes;
  }
};

namespace detail {

inline std::set<std::string> parse_token_set(std::string_view value, int line) {
  std::set<std::string> out;
  for (auto t : split_ws(value))
    if (!out.emplace(t).second)
      throw ParseError("duplicate token '" + std::string(t) + "'", line);
  if (out.empty()) throw ParseError("expected at least one token", line);
  return out;
}

} // namespace detail

// Applies one `key: value` assignment. Shared by the file parser and the
// CLI override path so both spell keys identically.
inline void apply_config_entry(RunConfig& config, std::string_view key, std::string_view value,
                               int line = 0) {
  auto bad = [&](const std::string& msg) { throw ParseError(msg, line); };
  auto as_double = [&](double& out) {
    if (!parse_double(value, out)) bad("expected a number for '" + std::string(key) + "'");
  };
  auto as_int = [&](std::int64_t& out) {
    if (!parse_int64(value, out)) bad("expected an integer for '" + std::string(key) + "'");
  };

  if (key == "graph") config.graph_path = std::string(value);
  else if (key == "tracks") config.tracks_path = std::string(value);
  else if (key == "tracks-meta") config.tracks_meta_path = std::string(value);
  else if (key == "recording-meta") config.recording_meta_path = std::string(value);
  else if (key == "regions") config.regions_path = std::string(value);
  else if (key == "rules") config.rules_path = std::string(value);
  else if (key == "bindings") config.bindings_path = std::string(value);
  else if (key == "columns") config.columns_path = std::string(value);
  else if (key == "out") config.out_dir = std::string(value);
  else if (key == "seed") {
    std::int64_t v = 0;
    as_int(v);
    config.seed = static_cast<std::uint64_t>(v);
  } else if (key == "min-duration") as_double(config.min_duration);
  else if (key == "bridge-gap") as_double(config.bridge_gap);
  else if (key == "relevance-radius") as_double(config.relevance_radius);
  else if (key == "repetitions") {
    std::int64_t v = 0;
    as_int(v);
    config.repetitions = static_cast<long>(v);
  } else if (key == "threads") {
    std::int64_t v = 0;
    as_int(v);
    config.threads = static_cast<int>(v);
  } else if (key == "timestamp") {
    as_int(config.timestamp);
  } else if (key == "sizes") {
    config.sizes.clear();
    for (auto t : split_ws(value)) {
      std::int64_t v = 0;
      if (!parse_int64(t, v)) bad("bad size '" + std::string(t) + "'");
      config.sizes.push_back(static_cast<long>(v));
    }
    if (config.sizes.empty()) bad("'sizes' expects at least one integer");
  } else if (key == "bin-width") {
    auto parts = split_ws(value);
    double w = 0.0;
    if (parts.size() != 2 || !parse_double(parts[1], w))
      bad("'bin-width' expects '<parameter> <width>'");
    config.bin_widths[std::string(parts[0])] = w;
  } else if (key == "classes") {
    config.classes = detail::parse_token_set(value, line);
  } else if (key == "ego-classes") {
    config.ego_classes = detail::parse_token_set(value, line);
  } else {
    bad("unknown config key: " + std::string(key));
  }
}

inline RunConfig parse_run_config(std::string_view document, RunConfig base = {}) {
  for (const auto& ln : scan_lines(document)) {
    std::string_view key, value;
    if (!split_key_value(ln.text, key, value))
      throw ParseError("expected '<key>: <value>'", ln.number);
    apply_config_entry(base, key, value, ln.number);
  }
  return base;
}

// Bounds and path sanity. Throws on the first problem.
inline void validate_run_config(const RunConfig& config) {
  if (config.min_duration < 0.0) throw Error("min-duration must be >= 0");
  if (config.bridge_gap < 0.0) throw Error("bridge-gap must be >= 0");
  if (!(config.relevance_radius > 0.0)) throw Error("relevance-radius must be positive");
  if (config.repetitions < 1) throw Error("repetitions must be >= 1");
  if (config.threads < 1) throw Error("threads must be >= 1");
  for (const auto& [param, w] : config.bin_widths)
    if (!(w > 0.0)) throw Error("bin-width for '" + param + "' must be positive");
  for (long s : config.sizes)
    if (s < 1) throw Error("sizes must be >= 1");

  namespace fs = std::filesystem;
  fs::path out = fs::path(config.out_dir).lexically_normal();
  for (const std::string* p : {&config.graph_path, &config.tracks_path, &config.tracks_meta_path,
                               &config.recording_meta_path, &config.regions_path,
                               &config.rules_path, &config.bindings_path, &config.columns_path}) {
    if (p->empty()) continue;
    if (fs::path(*p).lexically_normal() == out)
      throw Error("input path '" + *p + "' collides with the output directory");
  }
}

// Deterministic listing of everything that can influence results. `out`
// and `threads` are deliberately absent: moving the output directory or
// changing the degree of parallelism never changes a single output byte.
inline std::string canonical_config_dump(const RunConfig& config) {
  std::string out;
  auto kv = [&](const std::string& k, const std::string& v) { out += k + ": " + v + "\n"; };

  for (const auto& [param, w] : config.bin_widths) kv("bin-width " + param, fmt_double(w));
  kv("bindings", config.bindings_path.empty() ? "(none)" : config.bindings_path);
  kv("bridge-gap", fmt_double(config.bridge_gap));
  {
    std::string joined;
    for (const auto& c : config.classes) joined += (joined.empty() ? "" : " ") + c;
    kv("classes", joined.empty() ? "(default)" : joined);
  }
  kv("columns", config.columns_path.empty() ? "(none)" : config.columns_path);
  {
    std::string joined;
    for (const auto& c : config.ego_classes) joined += (joined.empty() ? "" : " ") + c;
    kv("ego-classes", joined.empty() ? "(default)" : joined);
  }
  kv("graph", config.graph_path.empty() ? "(none)" : config.graph_path);
  kv("min-duration", fmt_double(config.min_duration));
  kv("recording-meta", config.recording_meta_path);
  kv("regions", config.regions_path);
  kv("relevance-radius", fmt_double(config.relevance_radius));
  kv("repetitions", std::to_string(config.repetitions));
  kv("rules", config.rules_path.empty() ? "(built-in)" : config.rules_path);
  kv("seed", std::to_string(config.seed));
  {
    std::string joined;
    for (long s : config.sizes) joined += (joined.empty() ? "" : " ") + std::to_string(s);
    kv("sizes", joined.empty() ? "(default)" : joined);
  }
  kv("timestamp", std::to_string(config.timestamp));
  kv("tracks", config.tracks_path);
  kv("tracks-meta", config.tracks_meta_path);
  return out;
}

} // namespace scover
