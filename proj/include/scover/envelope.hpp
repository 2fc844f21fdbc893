#pragma once

// Enveloping scenarios: per-ego spatio-temporal canvases. The spatial cut
// is a map region, the temporal cut is the ego's entry and exit. Re-entry
// opens a fresh envelope.

#include "scover/csv.hpp"
#include "scover/error.hpp"
#include "scover/trajectory.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

namespace scover {

struct EnvelopingScenario {
  std::string envelope_id; // "<ego>.<region>.<enter_frame>"
  std::string region_id;
  std::string ego_id;
  long enter_frame = 0;
  long exit_frame = 0; // inclusive; >= enter_frame

  bool operator==(const EnvelopingScenario&) const = default;
};

struct UncoveredSample {
  std::string track_id;
  long frame = 0;
  double x = 0.0;
  double y = 0.0;
};

namespace detail {

inline geo::Point polygon_centroid(const std::vector<geo::Point>& poly) {
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const geo::Point& p = poly[i];
    const geo::Point& q = poly[(i + 1) % poly.size()];
    double w = p.x * q.y - q.x * p.y;
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  a *= 0.5;
  return geo::Point{cx / (6.0 * a), cy / (6.0 * a)};
}

inline bool strictly_inside(const std::vector<geo::Point>& poly, const geo::Point& p) {
  return !geo::point_on_polygon_boundary(poly, p) && geo::point_in_polygon(poly, p);
}

// Interior overlap test. Sharing a boundary is fine; sharing area is not.
inline bool regions_overlap(const MapRegion& a, const MapRegion& b) {
  for (size_t i = 0; i < a.polygon.size(); ++i)
    for (size_t j = 0; j < b.polygon.size(); ++j)
      if (geo::segments_properly_cross(a.polygon[i], a.polygon[(i + 1) % a.polygon.size()],
                                       b.polygon[j], b.polygon[(j + 1) % b.polygon.size()]))
        return true;
  for (const auto& v : a.polygon)
    if (strictly_inside(b.polygon, v)) return true;
  for (const auto& v : b.polygon)
    if (strictly_inside(a.polygon, v)) return true;
  // containment or coincidence with every vertex on the other's boundary
  if (strictly_inside(b.polygon, polygon_centroid(a.polygon))) return true;
  if (strictly_inside(a.polygon, polygon_centroid(b.polygon))) return true;
  return false;
}

} // namespace detail

inline void validate_regions_disjoint(const std::vector<MapRegion>& regions) {
  for (size_t i = 0; i < regions.size(); ++i)
    for (size_t j = i + 1; j < regions.size(); ++j)
      if (detail::regions_overlap(regions[i], regions[j]))
        throw Error("regions '" + regions[i].region_id + "' and '" + regions[j].region_id +
                    "' overlap");
}

// Envelopes for one ego: maximal containment runs per region.
inline std::vector<EnvelopingScenario> segment_one_ego(const Dataset& dataset,
                                                       const std::vector<MapRegion>& regions,
                                                       const std::string& ego_id) {
  const Trajectory& traj = dataset.track(ego_id);
  std::vector<EnvelopingScenario> out;
  for (const auto& region : regions) {
    long run_start = -1;
    long prev = 0;
    for (const auto& p : traj.points) {
      bool inside = point_in_region(region, p.x, p.y);
      if (inside && run_start < 0) run_start = p.frame;
      if (!inside && run_start >= 0) {
        out.push_back(EnvelopingScenario{"", region.region_id, ego_id, run_start, prev});
        run_start = -1;
      }
      prev = p.frame;
    }
    if (run_start >= 0)
      out.push_back(EnvelopingScenario{"", region.region_id, ego_id, run_start, prev});
  }
  return out;
}

inline std::vector<EnvelopingScenario> segment(const Dataset& dataset,
                                               const std::vector<MapRegion>& regions,
                                               const std::vector<std::string>& ego_ids) {
  validate_regions_disjoint(regions);
  for (const auto& id : ego_ids) dataset.track(id); // throws on unknown ego

  std::vector<EnvelopingScenario> out;
  for (const auto& id : ego_ids) {
    auto part = segment_one_ego(dataset, regions, id);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end(), [](const EnvelopingScenario& a, const EnvelopingScenario& b) {
    return std::tie(a.ego_id, a.enter_frame, a.region_id) <
           std::tie(b.ego_id, b.enter_frame, b.region_id);
  });
  for (auto& e : out)
    e.envelope_id = e.ego_id + "." + e.region_id + "." + std::to_string(e.enter_frame);
  return out;
}

// Every track point lying in no region. An empty result backs the claim
// that the spatial split covers all recorded locations.
inline std::vector<UncoveredSample> check_spatial_coverage(const Dataset& dataset,
                                                           const std::vector<MapRegion>& regions) {
  std::vector<UncoveredSample> out;
  for (const auto& [id, traj] : dataset.tracks) {
    for (const auto& p : traj.points) {
      bool covered = false;
      for (const auto& region : regions)
        if (point_in_region(region, p.x, p.y)) { covered = true; break; }
      if (!covered) out.push_back(UncoveredSample{id, p.frame, p.x, p.y});
    }
  }
  return out;
}

// True when the envelope begins or ends because the ego track itself starts
// or ends inside the region rather than crossing its border.
inline bool envelope_truncated(const Dataset& dataset, const EnvelopingScenario& e) {
  const Trajectory& traj = dataset.track(e.ego_id);
  return e.enter_frame == traj.first_frame() || e.exit_frame == traj.last_frame();
}

inline std::string export_envelopes_csv(const std::vector<EnvelopingScenario>& envelopes) {
  CsvWriter w({"envelope_id", "region_id", "ego_id", "enter_frame", "exit_frame"});
  for (const auto& e : envelopes)
    w.row({e.envelope_id, e.region_id, e.ego_id, std::to_string(e.enter_frame),
           std::to_string(e.exit_frame)});
  return w.render();
}

} // namespace scover
