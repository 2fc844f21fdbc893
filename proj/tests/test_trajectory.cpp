#include <catch2/catch_amalgamated.hpp>

#include "scover/trajectory.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

using namespace scover;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  fs::path dir = fs::temp_directory_path() / "scover_trajectory_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
  fs::path p = temp_dir() / name;
  std::ofstream out(p);
  out << content;
  out.close();
  return p.string();
}

// Independent containment for convex CCW polygons: the point must lie on
// the left of (or on) every directed edge.
bool convex_contains(const std::vector<geo::Point>& poly, geo::Point p) {
  for (size_t i = 0; i < poly.size(); ++i) {
    geo::Point a = poly[i];
    geo::Point b = poly[(i + 1) % poly.size()];
    double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross < -1e-9) return false;
  }
  return true;
}

// Independent containment for arbitrary simple polygons: winding number by
// summing signed angle crossings. Only meaningful off the boundary.
bool winding_contains(const std::vector<geo::Point>& poly, geo::Point p) {
  int winding = 0;
  for (size_t i = 0; i < poly.size(); ++i) {
    geo::Point a = poly[i];
    geo::Point b = poly[(i + 1) % poly.size()];
    if (a.y <= p.y) {
      if (b.y > p.y && (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) > 0) ++winding;
    } else {
      if (b.y <= p.y && (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < 0) --winding;
    }
  }
  return winding != 0;
}

const std::vector<geo::Point> kUnitSquare = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};

const std::vector<geo::Point> kUShape = {
    {0, 0}, {60, 0}, {60, 40}, {40, 40}, {40, 10}, {20, 10}, {20, 40}, {0, 40}};

// Minimal consistent dataset: one car, three frames.
const char* kRecordingMeta = "recordingId,frameRate,locationId\n7,25,loc4\n";
const char* kTracksMeta = "recordingId,trackId,class,initialFrame,finalFrame\n7,1,car,10,12\n";
const char* kTracks =
    "recordingId,trackId,frame,xCenter,yCenter,heading,xVelocity,yVelocity\n"
    "7,1,10,0.0,0.0,0.0,3.0,4.0\n"
    "7,1,11,0.2,0.0,0.1,3.0,4.0\n"
    "7,1,12,0.4,0.0,0.2,3.0,4.0\n";

Dataset load_strings(const std::string& tracks, const std::string& meta,
                     const std::string& recording, const LoadOptions& options = {}) {
  return load_dataset(write_temp("tracks.csv", tracks), write_temp("tracksMeta.csv", meta),
                      write_temp("recordingMeta.csv", recording), options);
}

} // namespace

TEST_CASE("boundary-inclusive containment on the unit square") {
  CHECK(geo::point_in_polygon(kUnitSquare, {0.5, 0.5}));
  CHECK_FALSE(geo::point_in_polygon(kUnitSquare, {1.5, 0.5}));
  CHECK_FALSE(geo::point_in_polygon(kUnitSquare, {-0.001, 0.5}));

  SECTION("corners and edges are inside") {
    for (auto p : kUnitSquare) CHECK(geo::point_in_polygon(kUnitSquare, p));
    CHECK(geo::point_in_polygon(kUnitSquare, {0.5, 0.0}));
    CHECK(geo::point_in_polygon(kUnitSquare, {1.0, 0.5}));
    CHECK(geo::point_in_polygon(kUnitSquare, {0.0, 0.25}));
  }
  SECTION("points level with a horizontal edge") {
    CHECK_FALSE(geo::point_in_polygon(kUnitSquare, {1.5, 1.0}));
    CHECK_FALSE(geo::point_in_polygon(kUnitSquare, {-0.5, 0.0}));
    CHECK_FALSE(geo::point_in_polygon(kUnitSquare, {2.0, 0.0}));
  }
}

TEST_CASE("concave containment: the U-shaped region") {
  CHECK(geo::point_in_polygon(kUShape, {10, 25}));  // left arm
  CHECK(geo::point_in_polygon(kUShape, {50, 25}));  // right arm
  CHECK(geo::point_in_polygon(kUShape, {30, 5}));   // base
  CHECK_FALSE(geo::point_in_polygon(kUShape, {30, 25})); // notch
  CHECK_FALSE(geo::point_in_polygon(kUShape, {30, 45}));
  CHECK(geo::point_in_polygon(kUShape, {20, 25}));  // notch wall is boundary
  CHECK(geo::point_in_polygon(kUShape, {30, 10}));  // notch floor is boundary
}

TEST_CASE("containment matches the convex half-plane oracle") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int iter = 0; iter < 120; ++iter) {
    int n = 3 + static_cast<int>(unit(rng) * 6);
    std::vector<double> angles;
    for (int i = 0; i < n; ++i) angles.push_back(unit(rng) * 2 * std::numbers::pi);
    std::sort(angles.begin(), angles.end());
    bool spread_ok = true;
    for (int i = 1; i < n; ++i)
      if (angles[i] - angles[i - 1] < 0.05) spread_ok = false;
    if (!spread_ok) continue;

    std::vector<geo::Point> poly;
    double radius = 1.0 + unit(rng) * 9.0;
    for (double a : angles) poly.push_back({radius * std::cos(a), radius * std::sin(a)});
    REQUIRE(geo::polygon_is_simple(poly));

    for (int q = 0; q < 50; ++q) {
      geo::Point p{(unit(rng) * 2 - 1) * radius * 1.2, (unit(rng) * 2 - 1) * radius * 1.2};
      if (geo::point_on_polygon_boundary(poly, p)) continue;
      INFO("iter " << iter << " point (" << p.x << ", " << p.y << ")");
      CHECK(geo::point_in_polygon(poly, p) == convex_contains(poly, p));
    }
  }
}

TEST_CASE("containment matches the winding-number oracle on star polygons") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int iter = 0; iter < 120; ++iter) {
    int n = 5 + static_cast<int>(unit(rng) * 7);
    std::vector<geo::Point> poly;
    for (int i = 0; i < n; ++i) {
      double a = 2 * std::numbers::pi * i / n;
      double r = 2.0 + unit(rng) * 8.0; // varying radius makes it concave
      poly.push_back({r * std::cos(a), r * std::sin(a)});
    }
    REQUIRE(geo::polygon_is_simple(poly)); // star-shaped by construction

    for (int q = 0; q < 50; ++q) {
      geo::Point p{(unit(rng) * 2 - 1) * 11, (unit(rng) * 2 - 1) * 11};
      if (geo::point_on_polygon_boundary(poly, p)) continue;
      INFO("iter " << iter << " point (" << p.x << ", " << p.y << ")");
      CHECK(geo::point_in_polygon(poly, p) == winding_contains(poly, p));
    }
  }
}

TEST_CASE("polygon simplicity") {
  CHECK(geo::polygon_is_simple(kUnitSquare));
  CHECK(geo::polygon_is_simple(kUShape));

  std::vector<geo::Point> bowtie = {{0, 0}, {2, 2}, {2, 0}, {0, 2}};
  CHECK_FALSE(geo::polygon_is_simple(bowtie));

  std::vector<geo::Point> repeated = {{0, 0}, {1, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK_FALSE(geo::polygon_is_simple(repeated));

  std::vector<geo::Point> touching = {{0, 0}, {2, 0}, {2, 2}, {1, 0}, {0, 2}};
  CHECK_FALSE(geo::polygon_is_simple(touching)); // vertex lands on another edge
}

TEST_CASE("polygon area is orientation-independent in regions") {
  CHECK(geo::polygon_area(kUnitSquare) == Catch::Approx(1.0));
  std::vector<geo::Point> cw(kUnitSquare.rbegin(), kUnitSquare.rend());
  CHECK(geo::polygon_area(cw) == Catch::Approx(-1.0));
}

TEST_CASE("region file parsing") {
  SECTION("two regions round out") {
    auto regions = parse_regions(
        "# two rectangles\n"
        "region north\nv 0 0\nv 4 0\nv 4 2\nv 0 2\n"
        "region south\nv 0 5\nv 4 5\nv 4 8\nv 0 8\n");
    REQUIRE(regions.size() == 2);
    CHECK(regions[0].region_id == "north");
    CHECK(regions[1].polygon.size() == 4);
    CHECK(point_in_region(regions[0], 2, 1));
    CHECK_FALSE(point_in_region(regions[0], 2, 3));
  }
  SECTION("clockwise vertex order is accepted") {
    auto regions = parse_regions("region cw\nv 0 2\nv 4 2\nv 4 0\nv 0 0\n");
    CHECK(point_in_region(regions[0], 2, 1));
  }
  SECTION("errors") {
    CHECK_THROWS_WITH(parse_regions("region a\nv 0 0\nv 1 0\n"),
                      Catch::Matchers::ContainsSubstring("at least 3"));
    CHECK_THROWS_WITH(parse_regions("region a\nv 0 0\nv 2 2\nv 2 0\nv 0 2\n"),
                      Catch::Matchers::ContainsSubstring("self-intersecting"));
    CHECK_THROWS_WITH(parse_regions("region a\nv 0 0\nv 1 1\nv 2 2\n"),
                      Catch::Matchers::ContainsSubstring("zero area"));
    CHECK_THROWS_WITH(parse_regions("region a\nv 0 0\nv 1 0\nv 1 1\nregion a\nv 0 0\nv 1 0\nv 0 1\n"),
                      Catch::Matchers::ContainsSubstring("duplicate region id"));
    CHECK_THROWS_WITH(parse_regions("v 0 0\n"),
                      Catch::Matchers::ContainsSubstring("before any"));
    CHECK_THROWS_WITH(parse_regions("region a\nv 0 zero\n"),
                      Catch::Matchers::ContainsSubstring("expected 'v <x> <y>'"));
  }
}

TEST_CASE("dataset loading happy path") {
  Dataset ds = load_strings(kTracks, kTracksMeta, kRecordingMeta);
  CHECK(ds.meta.recording_id == "7");
  CHECK(ds.meta.frame_rate == Catch::Approx(25.0));
  CHECK(ds.meta.location_id == "loc4");
  REQUIRE(ds.tracks.size() == 1);

  const Trajectory& t = ds.track("1");
  CHECK(t.object_class == "car");
  CHECK(t.first_frame() == 10);
  CHECK(t.last_frame() == 12);
  CHECK(t.covers(11));
  CHECK_FALSE(t.covers(13));
  CHECK(t.at(10).speed == Catch::Approx(5.0)); // hypot(3, 4)
  CHECK(t.at(12).x == Catch::Approx(0.4));
  CHECK_THROWS_AS(t.at(9), Error);
  CHECK_THROWS_AS(ds.track("2"), Error);

  const TrackPoint& p = position_at(t, 11);
  CHECK(p.x == Catch::Approx(0.2));
}

TEST_CASE("rows arrive unsorted and are reassembled") {
  std::string shuffled =
      "recordingId,trackId,frame,xCenter,yCenter,heading,xVelocity,yVelocity\n"
      "7,1,12,0.4,0.0,0.2,3.0,4.0\n"
      "7,1,10,0.0,0.0,0.0,3.0,4.0\n"
      "7,1,11,0.2,0.0,0.1,3.0,4.0\n";
  Dataset ds = load_strings(shuffled, kTracksMeta, kRecordingMeta);
  const Trajectory& t = ds.track("1");
  CHECK(t.points.front().frame == 10);
  CHECK(t.points.back().frame == 12);
}

TEST_CASE("headings are normalized but unit mistakes are rejected") {
  SECTION("radians just outside one turn wrap") {
    std::string tracks =
        "recordingId,trackId,frame,xCenter,yCenter,heading,xVelocity,yVelocity\n"
        "7,1,10,0,0,6.5,1,0\n7,1,11,0,0,-6.5,1,0\n7,1,12,0,0,0,1,0\n";
    Dataset ds = load_strings(tracks, kTracksMeta, kRecordingMeta);
    CHECK(ds.track("1").at(10).heading == Catch::Approx(6.5 - 2 * std::numbers::pi));
    CHECK(ds.track("1").at(11).heading == Catch::Approx(-6.5 + 2 * std::numbers::pi));
  }
  SECTION("degree-scale headings are a hard error") {
    std::string tracks =
        "recordingId,trackId,frame,xCenter,yCenter,heading,xVelocity,yVelocity\n"
        "7,1,10,0,0,90.0,1,0\n7,1,11,0,0,90.0,1,0\n7,1,12,0,0,90.0,1,0\n";
    CHECK_THROWS_WITH(load_strings(tracks, kTracksMeta, kRecordingMeta),
                      Catch::Matchers::ContainsSubstring("radians"));
  }
}

TEST_CASE("dataset loading rejects inconsistent inputs") {
  SECTION("missing column") {
    std::string tracks = "recordingId,trackId,frame,xCenter,yCenter,heading,xVelocity\n";
    CHECK_THROWS_WITH(load_strings(tracks, kTracksMeta, kRecordingMeta),
                      Catch::Matchers::ContainsSubstring("missing column 'yVelocity'"));
  }
  SECTION("bad number") {
    std::string tracks =
        "recordingId,trackId,frame,xCenter,yCenter,heading,xVelocity,yVelocity\n"
        "7,1,10,zero,0,0,1,0\n";
    CHECK_THROWS_WITH(load_strings(tracks, kTracksMeta, kRecordingMeta),
                      Catch::Matchers::ContainsSubstring("bad number"));
  }
  SECTION("non-contiguous frames") {
    std::string tracks =
        "recordingId,trackId,frame,xCenter,yCenter,heading,xVelocity,yVelocity\n"
        "7,1,10,0,0,0,1,0\n7,1,12,0,0,0,1,0\n";
    std::string meta = "recordingId,trackId,class,initialFrame,finalFrame\n7,1,car,10,12\n";
    CHECK_THROWS_WITH(load_strings(tracks, meta, kRecordingMeta),
                      Catch::Matchers::ContainsSubstring("not contiguous"));
  }
  SECTION("duplicate frame") {
    std::string tracks =
        "recordingId,trackId,frame,xCenter,yCenter,heading,xVelocity,yVelocity\n"
        "7,1,10,0,0,0,1,0\n7,1,10,0,0,0,1,0\n";
    std::string meta = "recordingId,trackId,class,initialFrame,finalFrame\n7,1,car,10,11\n";
    CHECK_THROWS_AS(load_strings(tracks, meta, kRecordingMeta), Error);
  }
  SECTION("unknown object class") {
    std::string meta = "recordingId,trackId,class,initialFrame,finalFrame\n7,1,animal,10,12\n";
    CHECK_THROWS_WITH(load_strings(kTracks, meta, kRecordingMeta),
                      Catch::Matchers::ContainsSubstring("'animal' not in the configured whitelist"));
  }
  SECTION("track rows without a meta row") {
    std::string meta = "recordingId,trackId,class,initialFrame,finalFrame\n7,2,car,10,12\n";
    CHECK_THROWS_WITH(load_strings(kTracks, meta, kRecordingMeta),
                      Catch::Matchers::ContainsSubstring("no tracksMeta row"));
  }
  SECTION("meta row without track rows") {
    std::string meta =
        "recordingId,trackId,class,initialFrame,finalFrame\n7,1,car,10,12\n7,2,car,0,5\n";
    CHECK_THROWS_WITH(load_strings(kTracks, meta, kRecordingMeta),
                      Catch::Matchers::ContainsSubstring("has no rows"));
  }
  SECTION("span mismatch against tracksMeta") {
    std::string meta = "recordingId,trackId,class,initialFrame,finalFrame\n7,1,car,10,13\n";
    CHECK_THROWS_WITH(load_strings(kTracks, meta, kRecordingMeta),
                      Catch::Matchers::ContainsSubstring("does not match tracksMeta"));
  }
  SECTION("duplicate meta row") {
    std::string meta =
        "recordingId,trackId,class,initialFrame,finalFrame\n7,1,car,10,12\n7,1,car,10,12\n";
    CHECK_THROWS_WITH(load_strings(kTracks, meta, kRecordingMeta),
                      Catch::Matchers::ContainsSubstring("duplicate track id"));
  }
  SECTION("recording meta must hold exactly one row") {
    CHECK_THROWS_WITH(load_strings(kTracks, kTracksMeta, "recordingId,frameRate,locationId\n"),
                      Catch::Matchers::ContainsSubstring("no recording row"));
    CHECK_THROWS_WITH(
        load_strings(kTracks, kTracksMeta, "recordingId,frameRate,locationId\n7,25,a\n8,25,b\n"),
        Catch::Matchers::ContainsSubstring("single recording"));
  }
  SECTION("frame rate must be positive") {
    CHECK_THROWS_WITH(load_strings(kTracks, kTracksMeta, "recordingId,frameRate,locationId\n7,0,a\n"),
                      Catch::Matchers::ContainsSubstring("frameRate must be positive"));
  }
}

TEST_CASE("column remapping renames actual headers") {
  std::string tracks =
      "rec,id,t,x,y,psi,vx,vy\n"
      "7,1,10,0.0,0.0,0.0,3.0,4.0\n7,1,11,0.2,0.0,0.1,3.0,4.0\n7,1,12,0.4,0.0,0.2,3.0,4.0\n";
  std::string meta = "id,kind,first,last\n1,car,10,12\n";
  std::string recording = "rec,hz,place\n7,25,loc4\n";

  LoadOptions options;
  options.column_map = parse_column_map(
      "recordingId: rec\ntrackId: id\nframe: t\nxCenter: x\nyCenter: y\nheading: psi\n"
      "xVelocity: vx\nyVelocity: vy\nclass: kind\ninitialFrame: first\nfinalFrame: last\n"
      "frameRate: hz\nlocationId: place\n");
  Dataset ds = load_strings(tracks, meta, recording, options);
  CHECK(ds.track("1").at(12).x == Catch::Approx(0.4));
  CHECK(ds.meta.location_id == "loc4");

  CHECK_THROWS_WITH(parse_column_map("frame t\n"),
                    Catch::Matchers::ContainsSubstring("column mapping"));
  CHECK_THROWS_WITH(parse_column_map("frame: t\nframe: u\n"),
                    Catch::Matchers::ContainsSubstring("duplicate"));
}

TEST_CASE("custom class whitelist replaces the default") {
  LoadOptions options;
  options.class_whitelist = {"car", "scooter"};
  std::string meta =
      "recordingId,trackId,class,initialFrame,finalFrame\n7,1,scooter,10,12\n";
  std::string tracks =
      "recordingId,trackId,frame,xCenter,yCenter,heading,xVelocity,yVelocity\n"
      "7,1,10,0,0,0,1,0\n7,1,11,0,0,0,1,0\n7,1,12,0,0,0,1,0\n";
  Dataset ds = load_strings(tracks, meta, kRecordingMeta, options);
  CHECK(ds.track("1").object_class == "scooter");

  CHECK(default_class_whitelist().count("truck_bus") == 1);
  CHECK(default_class_whitelist().size() == 4);
}
