#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

// ctest exports the binary location; the suite runs from the repo root
std::string bin() {
  const char* b = std::getenv("SCOVER_BIN");
  REQUIRE(b != nullptr);
  return b;
}

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "scover_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct RunResult {
  int code = -1;
  std::string output; // stdout and stderr combined
};

RunResult run(const std::string& args) {
  static int counter = 0;
  fs::path log = work_dir() / ("run_" + std::to_string(counter++) + ".log");
  std::string cmd = bin() + " " + args + " > " + log.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// two same-heading cars plus a pedestrian parked at bearing 60 degrees and
// distance 10 from the ego: inside the relevance radius but outside every
// default rule's predicates
fs::path gap_scene() {
  fs::path dir = work_dir() / "gap_scene";
  fs::create_directories(dir);
  std::string tracks = "recordingId,trackId,frame,xCenter,yCenter,heading,xVelocity,yVelocity\n";
  for (int f = 0; f < 100; ++f) {
    double x = 8.0 * f / 25.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "1,1,%d,%.3f,0.000,0.00000,8.000000,0.000000\n", f, x);
    tracks += buf;
    std::snprintf(buf, sizeof(buf), "1,2,%d,%.3f,8.660,0.00000,8.000000,0.000000\n", f, x + 5.0);
    tracks += buf;
  }
  write_file(dir / "tracks.csv", tracks);
  write_file(dir / "tracksMeta.csv",
             "recordingId,trackId,class,initialFrame,finalFrame\n"
             "1,1,car,0,99\n"
             "1,2,pedestrian,0,99\n");
  write_file(dir / "recordingMeta.csv", "recordingId,frameRate,locationId\n1,25,synthetic\n");
  write_file(dir / "regions.regions",
             "region big\nv -10 -20\nv 60 -20\nv 60 20\nv -10 20\n");
  return dir;
}

std::string dataset_flags(const fs::path& dir) {
  return " --tracks " + (dir / "tracks.csv").string() +
         " --tracks-meta " + (dir / "tracksMeta.csv").string() +
         " --recording-meta " + (dir / "recordingMeta.csv").string() +
         " --regions " + (dir / "regions.regions").string();
}

} // namespace

TEST_CASE("version flag") {
  auto r = run("--version");
  CHECK(r.code == 0);
  CHECK_FALSE(r.output.empty());
}

TEST_CASE("validate accepts the example argument") {
  auto r = run("validate data/example/graph.gsn");
  CHECK(r.code == 0);
  CHECK_THAT(r.output, Catch::Matchers::ContainsSubstring("valid: 10 nodes"));
}

TEST_CASE("validate lists violations and exits 1") {
  fs::path bad = work_dir() / "unsupported_goal.gsn";
  write_file(bad, "gsn-version: 1\nnode G1 goal\n  statement: floats free\n");
  auto r = run("validate " + bad.string());
  CHECK(r.code == 1);
  CHECK_THAT(r.output, Catch::Matchers::ContainsSubstring("V1 G1"));
}

TEST_CASE("validate reports parse failures as errors") {
  fs::path bad = work_dir() / "garbled.gsn";
  write_file(bad, "gsn-version: 1\nnode G1 gaol\n");
  auto r = run("validate " + bad.string());
  CHECK(r.code == 2);
  CHECK_THAT(r.output, Catch::Matchers::ContainsSubstring("error:"));
}

TEST_CASE("missing inputs exit 2") {
  CHECK(run("validate " + (work_dir() / "nope.gsn").string()).code == 2);
  CHECK(run("detect").code == 2); // no tracks configured
  CHECK(run("frobnicate").code == 2);
  CHECK(run("detect --config data/example/run.config --seed twelve").code == 2);
}

TEST_CASE("detect runs the example clean") {
  fs::path out = work_dir() / "detect_example";
  auto r = run("detect --config data/example/run.config --out " + out.string());
  CHECK(r.code == 0);
  CHECK(slurp(out / "gaps.csv") == "envelope_id,start_frame,end_frame,nearby_objects\n");
  CHECK_THAT(slurp(out / "envelopes.csv"),
             Catch::Matchers::ContainsSubstring("envelope_id,region_id,ego_id"));
  CHECK_THAT(slurp(out / "summary.txt"), Catch::Matchers::ContainsSubstring("gaps: 0"));
  CHECK(fs::exists(out / "instances.csv"));
}

TEST_CASE("detect runs the synthetic fixture scenes clean") {
  for (const char* scene : {"scene_01", "scene_08", "scene_13"}) {
    fs::path dir = fs::path("data/fixtures") / scene;
    fs::path out = work_dir() / (std::string("detect_") + scene);
    auto r = run("detect" + dataset_flags(dir) + " --out " + out.string());
    INFO(scene << ": " << r.output);
    CHECK(r.code == 0);
  }
}

TEST_CASE("detect exits 3 when an envelope has a classification gap") {
  fs::path dir = gap_scene();
  fs::path out = work_dir() / "detect_gap";
  auto r = run("detect" + dataset_flags(dir) + " --out " + out.string());
  CHECK(r.code == 3);
  std::string gaps = slurp(out / "gaps.csv");
  CHECK_THAT(gaps, Catch::Matchers::ContainsSubstring("1.big.0,0,99,2"));
}

TEST_CASE("saturate produces deterministic curve files") {
  fs::path out1 = work_dir() / "sat_1";
  fs::path out2 = work_dir() / "sat_2";
  auto r1 = run("saturate --config data/example/run.config --out " + out1.string());
  auto r2 = run("saturate --config data/example/run.config --out " + out2.string() +
                " --threads 4");
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  for (const char* name : {"types_curve.csv", "types_coverage.csv", "types_fit.csv",
                           "object_start_speed_curve.csv", "object_start_speed_coverage.csv",
                           "object_start_speed_fit.csv"}) {
    INFO(name);
    CHECK(slurp(out1 / name) == slurp(out2 / name));
  }
  CHECK_THAT(slurp(out1 / "types_curve.csv"),
             Catch::Matchers::ContainsSubstring("# seed=42 repetitions=200"));
}

TEST_CASE("evaluate runs the example to a supported top goal") {
  fs::path out = work_dir() / "eval_example";
  auto r = run("evaluate --config data/example/run.config --out " + out.string());
  CHECK(r.code == 0);
  std::string report = slurp(out / "report.txt");
  CHECK_THAT(report, Catch::Matchers::ContainsSubstring("top goal G-catalogue: supported"));
  CHECK_THAT(slurp(out / "graph.gsn"), Catch::Matchers::ContainsSubstring("gsn-version: 1"));

  SECTION("thread count and output directory leave the report unchanged") {
    fs::path out2 = work_dir() / "eval_example_2";
    auto r2 = run("evaluate --config data/example/run.config --out " + out2.string() +
                  " --threads 4");
    CHECK(r2.code == 0);
    CHECK(slurp(out2 / "report.txt") == report);
  }
}

TEST_CASE("evaluate exits 4 when a challenge is confirmed") {
  // a region that misses most of the recording leaves many points uncovered
  fs::path partial = work_dir() / "partial.regions";
  write_file(partial, "region corner\nv -20 -20\nv 130 -20\nv 130 450\nv -20 450\n");
  fs::path out = work_dir() / "eval_partial";
  auto r = run("evaluate --config data/example/run.config --regions " + partial.string() +
               " --out " + out.string());
  CHECK(r.code == 4);
  CHECK_THAT(slurp(out / "report.txt"),
             Catch::Matchers::ContainsSubstring("top goal G-catalogue: undermined"));
}

TEST_CASE("evaluate exits 5 when the evidence is not bound") {
  fs::path none = work_dir() / "none.bind";
  write_file(none, "# nothing bound\n");
  fs::path out = work_dir() / "eval_unbound";
  auto r = run("evaluate --config data/example/run.config --bindings " + none.string() +
               " --out " + out.string());
  CHECK(r.code == 5);
  CHECK_THAT(slurp(out / "report.txt"),
             Catch::Matchers::ContainsSubstring("top goal G-catalogue: undetermined"));
}
