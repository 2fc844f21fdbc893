// Generates the committed fixture scenes (data/fixtures) and the worked
// example (data/example), then verifies every generated file through the
// library itself: each scene must be gap-free under the default rules, and
// each manifest entry must produce at least one gap when its rule is
// removed. Exits nonzero if any self-check fails.

#include "scover/config.hpp"
#include "scover/detect.hpp"
#include "scover/envelope.hpp"
#include "scover/gsn.hpp"
#include "scover/pipeline.hpp"
#include "scover/rules.hpp"
#include "scover/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

namespace {

using namespace scover;
namespace fs = std::filesystem;

constexpr double kRate = 25.0;

struct Segment {
  long frames;
  double speed; // m/s along the track heading
};

struct Track {
  std::string id;
  std::string cls;
  long first_frame = 0;
  double heading = 0.0;
  std::vector<double> xs, ys, speeds;
};

Track make_track(std::string id, std::string cls, long first_frame, double x0, double y0,
                 double heading, const std::vector<Segment>& segments) {
  Track t;
  t.id = std::move(id);
  t.cls = std::move(cls);
  t.first_frame = first_frame;
  t.heading = heading;
  double x = x0, y = y0;
  for (const auto& seg : segments) {
    for (long i = 0; i < seg.frames; ++i) {
      t.xs.push_back(x);
      t.ys.push_back(y);
      t.speeds.push_back(seg.speed);
      x += std::cos(heading) * seg.speed / kRate;
      y += std::sin(heading) * seg.speed / kRate;
    }
  }
  return t;
}

struct Scene {
  std::string name;
  std::string recording_id;
  std::string region_text;
  std::vector<Track> tracks;
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return std::string(buf);
}

void write_scene_files(const fs::path& dir, const Scene& scene) {
  fs::create_directories(dir);

  std::string tracks = "recordingId,trackId,frame,xCenter,yCenter,heading,xVelocity,yVelocity\n";
  std::string meta = "recordingId,trackId,class,initialFrame,finalFrame\n";
  for (const auto& t : scene.tracks) {
    const long last = t.first_frame + static_cast<long>(t.xs.size()) - 1;
    meta += scene.recording_id + "," + t.id + "," + t.cls + "," + std::to_string(t.first_frame) +
            "," + std::to_string(last) + "\n";
    for (size_t i = 0; i < t.xs.size(); ++i) {
      double vx = std::cos(t.heading) * t.speeds[i];
      double vy = std::sin(t.heading) * t.speeds[i];
      tracks += scene.recording_id + "," + t.id + "," +
                std::to_string(t.first_frame + static_cast<long>(i)) + "," + fixed(t.xs[i], 3) +
                "," + fixed(t.ys[i], 3) + "," + fixed(t.heading, 5) + "," + fixed(vx, 6) + "," +
                fixed(vy, 6) + "\n";
    }
  }
  std::string rec = "recordingId,frameRate,locationId\n" + scene.recording_id + ",25,synthetic\n";

  write_text_file((dir / "tracks.csv").string(), tracks);
  write_text_file((dir / "tracksMeta.csv").string(), meta);
  write_text_file((dir / "recordingMeta.csv").string(), rec);
  write_text_file((dir / "regions.regions").string(), scene.region_text);
}

std::string rect_region(const std::string& id, double x0, double y0, double x1, double y1) {
  std::string out = "region " + id + "\n";
  out += "v " + fixed(x0, 1) + " " + fixed(y0, 1) + "\n";
  out += "v " + fixed(x1, 1) + " " + fixed(y0, 1) + "\n";
  out += "v " + fixed(x1, 1) + " " + fixed(y1, 1) + "\n";
  out += "v " + fixed(x0, 1) + " " + fixed(y1, 1) + "\n";
  return out;
}

// default rule document with one rule block removed
std::string rules_without(const std::string& type_name) {
  std::string out;
  bool skipping = false;
  std::string doc = default_rule_document();
  size_t pos = 0;
  while (pos <= doc.size()) {
    size_t eol = doc.find('\n', pos);
    std::string line = doc.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    if (line.rfind("rule ", 0) == 0) skipping = (line == "rule " + type_name);
    if (!skipping) out += line + "\n";
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  return out;
}

struct SceneCheck {
  long envelopes = 0;
  long instances = 0;
};

// Loads a written scene back and verifies the gap-free property, raw and
// with default debouncing; optionally verifies that removing `removal_rule`
// produces at least one gap.
SceneCheck check_scene(const fs::path& dir, const std::string& removal_rule) {
  Dataset ds = load_dataset((dir / "tracks.csv").string(), (dir / "tracksMeta.csv").string(),
                            (dir / "recordingMeta.csv").string());
  auto regions = parse_regions(read_text_file((dir / "regions.regions").string()));
  RuleSet rules = compile_rules(default_rule_document());

  std::vector<std::string> ego_ids = select_ego_ids(ds, {"car", "truck_bus"});
  auto envelopes = segment(ds, regions, ego_ids);
  if (envelopes.empty()) throw Error(dir.string() + ": no envelopes");

  SceneCheck result;
  result.envelopes = static_cast<long>(envelopes.size());
  for (const auto& env : envelopes) {
    for (auto [md, bg] : {std::pair<double, double>{0.0, 0.0}, {0.4, 0.2}}) {
      auto instances = detect(env, ds, rules, md, bg);
      auto gaps = find_gaps(env, instances, 50.0, ds);
      if (!gaps.empty())
        throw Error(dir.string() + ": envelope " + env.envelope_id + " has " +
                    std::to_string(gaps.size()) + " gap(s) with min_duration=" + fmt_double(md));
      if (md == 0.0) result.instances += static_cast<long>(instances.size());
    }
  }

  if (!removal_rule.empty()) {
    RuleSet reduced = compile_rules(rules_without(removal_rule));
    long gap_count = 0;
    for (const auto& env : envelopes) {
      auto instances = detect(env, ds, reduced, 0.4, 0.2);
      gap_count += static_cast<long>(find_gaps(env, instances, 50.0, ds).size());
    }
    if (gap_count == 0)
      throw Error(dir.string() + ": removing rule '" + removal_rule +
                  "' produced no gap; scene does not exercise it");
  }
  return result;
}

const double kPi = std::numbers::pi;
const double kHalfPi = std::numbers::pi / 2.0;

std::vector<Scene> build_scenes() {
  std::vector<Scene> scenes;

  // 01: one car alone crossing a rectangle; pure ego_alone
  scenes.push_back(Scene{
      "scene_01", "1", rect_region("strip", 0, -10, 80, 10),
      {make_track("1", "car", 0, -10, 0, 0.0, {{150, 8}})}});

  // 02: leader 15 m ahead, same speed; following / followed_by pair
  scenes.push_back(Scene{
      "scene_02", "2", rect_region("strip", -20, -10, 100, 10),
      {make_track("1", "car", 0, -10, 0, 0.0, {{150, 8}}),
       make_track("2", "car", 0, 5, 0, 0.0, {{150, 8}})}});

  // 03: bicycle 10 m behind the ego; followed_by only (partner not an ego class)
  scenes.push_back(Scene{
      "scene_03", "3", rect_region("strip", -30, -10, 60, 10),
      {make_track("1", "car", 0, 0, 0, 0.0, {{150, 4}}),
       make_track("2", "bicycle", 0, -10, 0, 0.0, {{150, 4}})}});

  // 04: head-on pass; the partner track ends while still 6 m ahead so both
  // canvases stay inside the oncoming cone for every shared frame
  scenes.push_back(Scene{
      "scene_04", "4", rect_region("strip", -20, -20, 120, 20),
      {make_track("1", "car", 0, 0, 0, 0.0, {{160, 8}}),
       make_track("2", "car", 0, 86, 3, kPi, {{126, 8}})}});

  // 05: pedestrian crossing at 90 degrees, within 50 m for the whole scene
  scenes.push_back(Scene{
      "scene_05", "5", rect_region("strip", -20, -25, 120, 25),
      {make_track("1", "car", 0, 0, 0, 0.0, {{160, 8}}),
       make_track("2", "pedestrian", 0, 30, -20, kHalfPi, {{160, 1.5}})}});

  // 06: parallel car 3.5 m to the side; lateral_adjacent both ways
  scenes.push_back(Scene{
      "scene_06", "6", rect_region("strip", -20, -10, 80, 10),
      {make_track("1", "car", 0, 0, 0, 0.0, {{120, 8}}),
       make_track("2", "car", 0, 0, 3.5, 0.0, {{120, 8}})}});

  // 07: leader pulls away at frame 80; following hands off to ego_alone
  // exactly when the distance reaches 50 m (strict complement, no seam)
  scenes.push_back(Scene{
      "scene_07", "7", rect_region("strip", -20, -10, 200, 10),
      {make_track("1", "car", 0, 0, 0, 0.0, {{180, 8}}),
       make_track("2", "car", 0, 20, 0, 0.0, {{80, 8}, {100, 20}})}});

  // 08: U-shaped region; the ego leaves through the notch and re-enters,
  // giving two envelopes from one track
  scenes.push_back(Scene{
      "scene_08", "8",
      "region ubend\n"
      "v 0 0\nv 60 0\nv 60 40\nv 40 40\nv 40 10\nv 20 10\nv 20 40\nv 0 40\n",
      {make_track("1", "car", 0, -10, 25, 0.0, {{200, 8}})}});

  // 09: three-vehicle convoy; simultaneous following and followed_by
  scenes.push_back(Scene{
      "scene_09", "9", rect_region("strip", -30, -10, 80, 10),
      {make_track("1", "car", 0, 0, 0, 0.0, {{120, 8}}),
       make_track("2", "car", 0, 12, 0, 0.0, {{120, 8}}),
       make_track("3", "car", 0, -10, 0, 0.0, {{120, 8}})}});

  // 10: following for the full scene, pedestrian crossing mid-scene only
  scenes.push_back(Scene{
      "scene_10", "10", rect_region("strip", -30, -10, 80, 10),
      {make_track("1", "car", 0, 0, 0, 0.0, {{180, 8}}),
       make_track("2", "car", 0, 12, 0, 0.0, {{180, 8}}),
       make_track("3", "pedestrian", 60, 35, -6, kHalfPi, {{61, 1.5}})}});

  // 11: oncoming bicycle, partner track again ending before the pass
  scenes.push_back(Scene{
      "scene_11", "11", rect_region("strip", -20, -20, 120, 20),
      {make_track("1", "car", 0, 0, 0, 0.0, {{180, 8}}),
       make_track("2", "bicycle", 0, 80, 2, kPi, {{155, 4}})}});

  // 12: followed_by for the full scene, lateral partner first half only;
  // removing followed_by uncovers the second half
  scenes.push_back(Scene{
      "scene_12", "12", rect_region("strip", -30, -10, 80, 10),
      {make_track("1", "car", 0, 0, 0, 0.0, {{160, 8}}),
       make_track("2", "car", 0, -8, 0, 0.0, {{160, 8}}),
       make_track("3", "car", 0, 0, 3, 0.0, {{80, 8}})}});

  // 13: ego runs exactly along the region's bottom edge; boundary points
  // count as inside, so this is one envelope, no flicker
  scenes.push_back(Scene{
      "scene_13", "13", rect_region("strip", 0, 0, 50, 10),
      {make_track("1", "car", 0, -5, 0, 0.0, {{190, 8}})}});

  return scenes;
}

// scene -> rule whose removal must open a gap
const std::vector<std::pair<std::string, std::string>>& manifest() {
  static const std::vector<std::pair<std::string, std::string>> m = {
      {"scene_02", "following"},     {"scene_03", "followed_by"},
      {"scene_04", "oncoming"},      {"scene_05", "crossing"},
      {"scene_06", "lateral_adjacent"}, {"scene_07", "following"},
      {"scene_10", "following"},     {"scene_11", "oncoming"},
      {"scene_12", "followed_by"},
  };
  return m;
}

std::string removal_rule_for(const std::string& scene_name) {
  for (const auto& [scene, rule] : manifest())
    if (scene == scene_name) return rule;
  return "";
}

// -----------------------------
// worked example
// -----------------------------

const char* kExampleGraph = R"(# completeness argument for the example recording
gsn-version: 1

node G-catalogue goal
  statement: The catalogue of base scenarios on the observed road section is complete

node S-base strategy
  statement: Argue completeness of base scenarios over all enveloping scenarios

node CH-base counter-hypothesis
  statement: The set of base scenarios is incomplete for the observed section

node E-gapfree evidence
  statement: Rule-based detection assigns a base scenario to every recorded second

node G-props goal
  statement: The catalogue of base scenario properties is complete

node S-props strategy
  statement: Argue completeness of properties via parameter saturation
  terminal: yes

node CH-props counter-hypothesis
  statement: Relevant scenario properties are missing from the catalogue

node E-saturation evidence
  statement: Discovery curves of scenario parameters saturate above the agreed threshold

node CTX-odd context
  statement: Operational domain limited to the recorded road section and its users

node A-sensors assumption
  statement: Recorded trajectories are accurate enough for rule evaluation

edge G-catalogue supported-by S-base
edge G-catalogue in-context-of CTX-odd
edge S-base challenged-by CH-base
edge S-base supported-by G-props
edge S-base in-context-of A-sensors
edge CH-base supported-by E-gapfree
edge G-props supported-by S-props
edge S-props challenged-by CH-props
edge CH-props supported-by E-saturation
)";

const char* kExampleBindings = R"(# evidence bindings for the example run
bind E-gapfree gap-free
bind E-gapfree spatial-coverage
bind E-gapfree rule-totality
bind E-saturation saturation-threshold(types, 0.9)
bind E-saturation saturation-threshold(parameter:object_start_speed, 0.9)
)";

const char* kExampleConfig = R"(# example run configuration (paths relative to the repository root)
graph: data/example/graph.gsn
tracks: data/example/tracks.csv
tracks-meta: data/example/tracksMeta.csv
recording-meta: data/example/recordingMeta.csv
regions: data/example/intersection.regions
rules: data/example/rules.rules
bindings: data/example/bindings.bind
out: out/example
seed: 42
repetitions: 200
bin-width: object_start_speed 0.5
)";

Scene build_example_scene() {
  Scene scene;
  scene.name = "example";
  scene.recording_id = "100";
  scene.region_text = rect_region("section", -20, -20, 130, 1950);

  int next_id = 1;
  // 12 two-vehicle convoys on lanes 100 m apart: every convoy yields one
  // following and one followed_by instance, speeds alternate 4 / 8 m/s
  for (int i = 0; i < 12; ++i) {
    double y = 100.0 * i;
    double speed = (i % 2 == 0) ? 4.0 : 8.0;
    scene.tracks.push_back(
        make_track(std::to_string(next_id++), "car", 0, 0, y, 0.0, {{300, speed}}));
    scene.tracks.push_back(
        make_track(std::to_string(next_id++), "car", 0, 15, y, 0.0, {{300, speed}}));
  }
  // 8 solo vehicles: ego_alone instances
  for (int j = 0; j < 8; ++j) {
    double y = 1200.0 + 100.0 * j;
    double speed = (j % 2 == 0) ? 4.0 : 8.0;
    scene.tracks.push_back(
        make_track(std::to_string(next_id++), "car", 0, 0, y, 0.0, {{300, speed}}));
  }
  return scene;
}

void check_example(const fs::path& root) {
  RunConfig config;
  config.graph_path = (root / "data/example/graph.gsn").string();
  config.tracks_path = (root / "data/example/tracks.csv").string();
  config.tracks_meta_path = (root / "data/example/tracksMeta.csv").string();
  config.recording_meta_path = (root / "data/example/recordingMeta.csv").string();
  config.regions_path = (root / "data/example/intersection.regions").string();
  config.rules_path = (root / "data/example/rules.rules").string();
  config.bindings_path = (root / "data/example/bindings.bind").string();
  config.seed = 42;
  config.bin_widths["object_start_speed"] = 0.5;

  gsn::ArgumentGraph graph = gsn::parse_graph(read_text_file(config.graph_path));
  Dataset ds = load_dataset(config.tracks_path, config.tracks_meta_path,
                            config.recording_meta_path);
  auto regions = parse_regions(read_text_file(config.regions_path));
  RuleSet rules = compile_rules(read_text_file(config.rules_path));
  auto bindings = parse_bindings(read_text_file(config.bindings_path), graph);

  PipelineRun run = run_pipeline(graph, ds, regions, rules, bindings, config);
  if (!run.results.gaps.empty()) throw Error("example: expected zero gaps");
  if (!run.results.uncovered.empty()) throw Error("example: expected full spatial coverage");
  if (run.results.instances.size() < 30)
    throw Error("example: expected >= 30 instances, got " +
                std::to_string(run.results.instances.size()));
  if (!run.results.type_coverage || run.results.type_coverage->estimate < 1.0)
    throw Error("example: expected type coverage estimate 1.0");
  if (overall_status(run.graph) != gsn::NodeStatus::Supported)
    throw Error("example: expected the top goal to end Supported");
  std::cout << "example: " << run.results.envelopes.size() << " envelopes, "
            << run.results.instances.size() << " instances, supported\n";
}

} // namespace

int main(int argc, char** argv) {
  fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path(".");
  try {
    for (const auto& scene : build_scenes()) {
      fs::path dir = root / "data" / "fixtures" / scene.name;
      write_scene_files(dir, scene);
      SceneCheck check = check_scene(dir, removal_rule_for(scene.name));
      std::cout << scene.name << ": " << check.envelopes << " envelopes, " << check.instances
                << " instances, gap-free\n";
    }

    std::string manifest_text;
    for (const auto& [scene, rule] : manifest()) manifest_text += scene + " " + rule + "\n";
    write_text_file((root / "data" / "fixtures" / "manifest.txt").string(), manifest_text);

    Scene example = build_example_scene();
    fs::path example_dir = root / "data" / "example";
    fs::create_directories(example_dir);
    {
      // same CSV layout as the fixture scenes, different file names
      Scene tmp = example;
      write_scene_files(example_dir, tmp);
      fs::rename(example_dir / "regions.regions", example_dir / "intersection.regions");
      fs::remove(example_dir / "recordingMeta.csv");
      std::string rec = "recordingId,frameRate,locationId\n100,25,synthetic\n";
      write_text_file((example_dir / "recordingMeta.csv").string(), rec);
    }
    write_text_file((example_dir / "graph.gsn").string(), kExampleGraph);
    write_text_file((example_dir / "bindings.bind").string(), kExampleBindings);
    write_text_file((example_dir / "run.config").string(), kExampleConfig);
    write_text_file((example_dir / "rules.rules").string(), default_rule_document());
    check_example(root);
  } catch (const std::exception& e) {
    std::cerr << "fixture generation failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
