#pragma once

// Trajectory recordings in the inD-style CSV schema (tracks, tracksMeta,
// recordingMeta) loaded into a frame-indexed model, plus polygonal map
// regions used to cut recordings spatially.

#include "scover/csv.hpp"
#include "scover/error.hpp"
#include "scover/lineio.hpp"
#include "scover/util.hpp"

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace scover {

// ---------------------------------------------------------------------------
// planar geometry helpers
// ---------------------------------------------------------------------------

namespace geo {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline constexpr double kEps = 1e-9;

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool on_segment(const Point& a, const Point& b, const Point& p) {
  if (std::fabs(cross(a, b, p)) > kEps * (1.0 + std::fabs(a.x) + std::fabs(b.x) +
                                          std::fabs(a.y) + std::fabs(b.y)))
    return false;
  return p.x >= std::min(a.x, b.x) - kEps && p.x <= std::max(a.x, b.x) + kEps &&
         p.y >= std::min(a.y, b.y) - kEps && p.y <= std::max(a.y, b.y) + kEps;
}

inline int sign_of(double v) { return v > kEps ? 1 : (v < -kEps ? -1 : 0); }

// True when the open interiors of segments ab and cd cross.
inline bool segments_properly_cross(const Point& a, const Point& b, const Point& c,
                                    const Point& d) {
  int d1 = sign_of(cross(a, b, c));
  int d2 = sign_of(cross(a, b, d));
  int d3 = sign_of(cross(c, d, a));
  int d4 = sign_of(cross(c, d, b));
  return d1 * d2 < 0 && d3 * d4 < 0;
}

inline double polygon_area(const std::vector<Point>& poly) {
  double s = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * s;
}

inline bool point_on_polygon_boundary(const std::vector<Point>& poly, const Point& p) {
  for (size_t i = 0; i < poly.size(); ++i)
    if (on_segment(poly[i], poly[(i + 1) % poly.size()], p)) return true;
  return false;
}

// Even-odd ray casting; boundary points count as inside.
inline bool point_in_polygon(const std::vector<Point>& poly, const Point& p) {
  if (point_on_polygon_boundary(poly, p)) return true;
  bool inside = false;
  for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    bool straddles = (a.y > p.y) != (b.y > p.y);
    if (straddles && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

// Simple = no two non-adjacent edges touch, adjacent edges share only their
// common endpoint, no repeated vertices.
inline bool polygon_is_simple(const std::vector<Point>& poly) {
  size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (std::fabs(poly[i].x - poly[j].x) < kEps && std::fabs(poly[i].y - poly[j].y) < kEps)
        return false;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    for (size_t j = i + 1; j < n; ++j) {
      const Point& c = poly[j];
      const Point& d = poly[(j + 1) % n];
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_properly_cross(a, b, c, d)) return false;
      if (on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) ||
          on_segment(c, d, b))
        return false;
    }
  }
  return true;
}

} // namespace geo

// ---------------------------------------------------------------------------
// domain types
// ---------------------------------------------------------------------------

struct RecordingMeta {
  std::string recording_id;
  double frame_rate = 0.0; // Hz
  std::string location_id;
};

struct TrackPoint {
  long frame = 0;
  double x = 0.0;       // m
  double y = 0.0;       // m
  double heading = 0.0; // radians in [-pi, pi)
  double speed = 0.0;   // m/s
};

struct Trajectory {
  std::string track_id;
  std::string object_class;
  std::vector<TrackPoint> points; // frame-ordered, contiguous

  long first_frame() const { return points.front().frame; }
  long last_frame() const { return points.back().frame; }

  bool covers(long frame) const { return frame >= first_frame() && frame <= last_frame(); }

  const TrackPoint& at(long frame) const {
    if (!covers(frame))
      throw Error("track " + track_id + ": frame " + std::to_string(frame) + " outside [" +
                  std::to_string(first_frame()) + ", " + std::to_string(last_frame()) + "]");
    return points[static_cast<size_t>(frame - first_frame())];
  }
};

struct MapRegion {
  std::string region_id;
  std::vector<geo::Point> polygon; // simple, >=3 vertices, nonzero area
};

inline bool point_in_region(const MapRegion& region, double x, double y) {
  return geo::point_in_polygon(region.polygon, geo::Point{x, y});
}

struct Dataset {
  RecordingMeta meta;
  std::map<std::string, Trajectory> tracks; // keyed by track id

  const Trajectory& track(const std::string& id) const {
    auto it = tracks.find(id);
    if (it == tracks.end()) throw Error("unknown track id: " + id);
    return it->second;
  }
};

// position_at per the model: stored point, no interpolation.
inline const TrackPoint& position_at(const Trajectory& trajectory, long frame) {
  return trajectory.at(frame);
}

// ---------------------------------------------------------------------------
// loading
// ---------------------------------------------------------------------------

inline const std::set<std::string>& default_class_whitelist() {
  static const std::set<std::string> w{"car", "truck_bus", "pedestrian", "bicycle"};
  return w;
}

struct LoadOptions {
  std::set<std::string> class_whitelist = default_class_whitelist();
  // canonical column name -> actual header in the files
  std::map<std::string, std::string> column_map;

  std::string actual(const std::string& canonical) const {
    auto it = column_map.find(canonical);
    return it == column_map.end() ? canonical : it->second;
  }
};

// Column remap file: one `canonical: actual` line per renamed column.
inline std::map<std::string, std::string> parse_column_map(std::string_view text) {
  std::map<std::string, std::string> out;
  for (const auto& ln : scan_lines(text)) {
    std::string_view key, value;
    if (!split_key_value(ln.text, key, value) || value.empty())
      throw ParseError("expected '<canonical>: <actual>' column mapping", ln.number);
    if (!out.emplace(std::string(key), std::string(value)).second)
      throw ParseError("duplicate column mapping for '" + std::string(key) + "'", ln.number);
  }
  return out;
}

namespace detail {

struct MetaRow {
  std::string object_class;
  long initial_frame = 0;
  long final_frame = 0;
};

inline double row_double(const CsvRow& row, size_t col, const std::string& file) {
  double v = 0.0;
  if (!parse_double(row.fields[col], v))
    throw Error(file + " line " + std::to_string(row.line) + ": bad number '" +
                std::string(row.fields[col]) + "'");
  return v;
}

inline long row_long(const CsvRow& row, size_t col, const std::string& file) {
  std::int64_t v = 0;
  if (!parse_int64(row.fields[col], v))
    throw Error(file + " line " + std::to_string(row.line) + ": bad integer '" +
                std::string(row.fields[col]) + "'");
  return static_cast<long>(v);
}

} // namespace detail

inline Dataset load_dataset(const std::string& tracks_file, const std::string& tracks_meta_file,
                            const std::string& recording_meta_file,
                            const LoadOptions& options = {}) {
  Dataset ds;

  { // recordingMeta: exactly one data row
    CsvReader reader(recording_meta_file);
    size_t c_id = reader.header().require(options.actual("recordingId"), recording_meta_file);
    size_t c_rate = reader.header().require(options.actual("frameRate"), recording_meta_file);
    size_t c_loc = reader.header().require(options.actual("locationId"), recording_meta_file);
    CsvRow row;
    bool seen = false;
    while (reader.next(row)) {
      if (seen) throw Error(recording_meta_file + ": expected a single recording row");
      seen = true;
      ds.meta.recording_id = std::string(row.fields[c_id]);
      ds.meta.frame_rate = detail::row_double(row, c_rate, recording_meta_file);
      ds.meta.location_id = std::string(row.fields[c_loc]);
    }
    if (!seen) throw Error(recording_meta_file + ": no recording row");
    if (!(ds.meta.frame_rate > 0.0))
      throw Error(recording_meta_file + ": frameRate must be positive");
  }

  std::map<std::string, detail::MetaRow> meta_rows;
  {
    CsvReader reader(tracks_meta_file);
    size_t c_id = reader.header().require(options.actual("trackId"), tracks_meta_file);
    size_t c_class = reader.header().require(options.actual("class"), tracks_meta_file);
    size_t c_first = reader.header().require(options.actual("initialFrame"), tracks_meta_file);
    size_t c_last = reader.header().require(options.actual("finalFrame"), tracks_meta_file);
    CsvRow row;
    while (reader.next(row)) {
      std::string id(row.fields[c_id]);
      detail::MetaRow m;
      m.object_class = std::string(row.fields[c_class]);
      if (!options.class_whitelist.count(m.object_class))
        throw Error(tracks_meta_file + " line " + std::to_string(row.line) +
                    ": object class '" + m.object_class + "' not in the configured whitelist");
      m.initial_frame = detail::row_long(row, c_first, tracks_meta_file);
      m.final_frame = detail::row_long(row, c_last, tracks_meta_file);
      if (!meta_rows.emplace(id, m).second)
        throw Error(tracks_meta_file + ": duplicate track id " + id);
    }
  }

  {
    CsvReader reader(tracks_file);
    reader.header().require(options.actual("recordingId"), tracks_file);
    size_t c_id = reader.header().require(options.actual("trackId"), tracks_file);
    size_t c_frame = reader.header().require(options.actual("frame"), tracks_file);
    size_t c_x = reader.header().require(options.actual("xCenter"), tracks_file);
    size_t c_y = reader.header().require(options.actual("yCenter"), tracks_file);
    size_t c_heading = reader.header().require(options.actual("heading"), tracks_file);
    size_t c_vx = reader.header().require(options.actual("xVelocity"), tracks_file);
    size_t c_vy = reader.header().require(options.actual("yVelocity"), tracks_file);
    CsvRow row;
    while (reader.next(row)) {
      std::string id(row.fields[c_id]);
      auto mit = meta_rows.find(id);
      if (mit == meta_rows.end())
        throw Error(tracks_file + " line " + std::to_string(row.line) + ": track " + id +
                    " has no tracksMeta row");

      TrackPoint p;
      p.frame = detail::row_long(row, c_frame, tracks_file);
      p.x = detail::row_double(row, c_x, tracks_file);
      p.y = detail::row_double(row, c_y, tracks_file);
      double heading = detail::row_double(row, c_heading, tracks_file);
      // Headings must already be radians. Anything beyond one extra turn is
      // treated as a unit mistake (degree data), not silently wrapped away.
      if (std::fabs(heading) > 7.0)
        throw Error(tracks_file + " line " + std::to_string(row.line) +
                    ": heading magnitude > 7; headings must be radians");
      p.heading = wrap_angle(heading);
      double vx = detail::row_double(row, c_vx, tracks_file);
      double vy = detail::row_double(row, c_vy, tracks_file);
      p.speed = std::hypot(vx, vy);

      auto [it, inserted] = ds.tracks.try_emplace(id);
      if (inserted) {
        it->second.track_id = id;
        it->second.object_class = mit->second.object_class;
      }
      it->second.points.push_back(p);
    }
  }

  for (auto& [id, traj] : ds.tracks) {
    std::sort(traj.points.begin(), traj.points.end(),
              [](const TrackPoint& a, const TrackPoint& b) { return a.frame < b.frame; });
    for (size_t i = 1; i < traj.points.size(); ++i)
      if (traj.points[i].frame != traj.points[i - 1].frame + 1)
        throw Error(tracks_file + ": track " + id + " frames not contiguous near frame " +
                    std::to_string(traj.points[i - 1].frame));
    const detail::MetaRow& m = meta_rows.at(id);
    if (traj.first_frame() != m.initial_frame || traj.last_frame() != m.final_frame)
      throw Error(tracks_meta_file + ": track " + id + " frame span [" +
                  std::to_string(traj.first_frame()) + ", " + std::to_string(traj.last_frame()) +
                  "] does not match tracksMeta [" + std::to_string(m.initial_frame) + ", " +
                  std::to_string(m.final_frame) + "]");
  }
  for (const auto& [id, m] : meta_rows)
    if (!ds.tracks.count(id))
      throw Error(tracks_meta_file + ": track " + id + " has no rows in " + tracks_file);

  return ds;
}

// ---------------------------------------------------------------------------
// map regions
// ---------------------------------------------------------------------------

// Region file: blocks of `region <id>` followed by `v <x> <y>` vertex lines.
inline std::vector<MapRegion> parse_regions(std::string_view text) {
  std::vector<MapRegion> out;
  std::set<std::string> seen;
  int open_line = 0;

  auto finish = [&](int line) {
    if (out.empty()) return;
    const MapRegion& r = out.back();
    if (r.polygon.size() < 3)
      throw ParseError("region '" + r.region_id + "' needs at least 3 vertices", line);
    if (!geo::polygon_is_simple(r.polygon))
      throw ParseError("region '" + r.region_id + "' polygon is self-intersecting", open_line);
    if (std::fabs(geo::polygon_area(r.polygon)) <= geo::kEps)
      throw ParseError("region '" + r.region_id + "' polygon has zero area", open_line);
  };

  int last_line = 0;
  for (const auto& ln : scan_lines(text)) {
    last_line = ln.number;
    auto tokens = split_ws(ln.text);
    if (tokens[0] == "region") {
      finish(ln.number);
      if (tokens.size() != 2)
        throw ParseError("expected 'region <id>'", ln.number);
      std::string id(tokens[1]);
      if (!seen.insert(id).second)
        throw ParseError("duplicate region id: " + id, ln.number);
      out.push_back(MapRegion{id, {}});
      open_line = ln.number;
    } else if (tokens[0] == "v") {
      if (out.empty())
        throw ParseError("vertex before any 'region' line", ln.number);
      double x = 0.0, y = 0.0;
      if (tokens.size() != 3 || !parse_double(tokens[1], x) || !parse_double(tokens[2], y))
        throw ParseError("expected 'v <x> <y>'", ln.number);
      out.back().polygon.push_back(geo::Point{x, y});
    } else {
      throw ParseError("expected 'region' or 'v' line", ln.number);
    }
  }
  finish(last_line);
  return out;
}

} // namespace scover
