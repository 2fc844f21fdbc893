#pragma once

// Frame-level rule matching inside one envelope, merged into maximal
// per-(type, object) instances, plus the gap report that drives the
// completeness argument: a frame no instance covers is a classification gap.

#include "scover/csv.hpp"
#include "scover/envelope.hpp"
#include "scover/error.hpp"
#include "scover/rules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace scover {

struct BaseScenarioInstance {
  std::string instance_id; // "<envelope_id>.<k>", k 1-based in sort order
  std::string envelope_id;
  std::string type_name;
  std::string ego_id;
  std::string object_id; // empty for ego-alone instances
  long start_frame = 0;
  long end_frame = 0;
  // Shorter than min_duration but kept because dropping it would have left
  // frames uncovered.
  bool short_retained = false;

  bool operator==(const BaseScenarioInstance&) const = default;
};

struct ClassificationGap {
  std::string envelope_id;
  long start_frame = 0;
  long end_frame = 0;
  std::vector<std::string> nearby_objects; // within relevance radius during the gap
};

namespace detail {

// Tracks other than the ego that exist at the given frame.
inline std::vector<const Trajectory*> objects_at(const Dataset& dataset,
                                                 const std::string& ego_id, long frame) {
  std::vector<const Trajectory*> out;
  for (const auto& [id, traj] : dataset.tracks)
    if (id != ego_id && traj.covers(frame)) out.push_back(&traj);
  return out;
}

struct Interval {
  long start = 0;
  long end = 0;
};

inline void append_frame(std::vector<Interval>& runs, long frame) {
  if (!runs.empty() && runs.back().end + 1 == frame) runs.back().end = frame;
  else runs.push_back(Interval{frame, frame});
}

} // namespace detail

// True when the rule matches at this frame for this ego/object pairing.
// For the ego-alone rule, `objects` must be every co-present track.
inline bool ego_alone_matches(const BaseScenarioRule& rule, const TrackPoint& ego,
                              const std::vector<const Trajectory*>& objects, long frame) {
  double radius = rule.predicates[0].a;
  for (const auto* obj : objects)
    if (detail::pair_distance(ego, obj->at(frame)) < radius) return false;
  return true;
}

inline std::vector<BaseScenarioInstance> detect(const EnvelopingScenario& envelope,
                                                const Dataset& dataset, const RuleSet& rules,
                                                double min_duration, double bridge_gap) {
  if (min_duration < 0.0) throw Error("min_duration must be >= 0");
  if (bridge_gap < 0.0) throw Error("bridge_gap must be >= 0");
  const Trajectory& ego = dataset.track(envelope.ego_id);
  const double rate = dataset.meta.frame_rate;

  // (type, object) -> maximal matching frame runs
  std::map<std::pair<std::string, std::string>, std::vector<detail::Interval>> runs;

  for (long frame = envelope.enter_frame; frame <= envelope.exit_frame; ++frame) {
    const TrackPoint& e = ego.at(frame);
    auto objects = detail::objects_at(dataset, envelope.ego_id, frame);

    for (const auto& rule : rules.rules) {
      if (rule.ego_alone()) {
        if (ego_alone_matches(rule, e, objects, frame))
          detail::append_frame(runs[{rule.type_name, ""}], frame);
        continue;
      }
      for (const auto* obj : objects) {
        if (!rule.accepts_class(obj->object_class)) continue;
        if (rule_matches_pair(rule, e, obj->at(frame)))
          detail::append_frame(runs[{rule.type_name, obj->track_id}], frame);
      }
    }
  }

  // bridge: merge runs of one (type, object) separated by at most
  // bridge_gap seconds of unmatched frames
  const long bridge_frames = static_cast<long>(std::floor(bridge_gap * rate + 1e-9));
  for (auto& [key, list] : runs) {
    std::vector<detail::Interval> merged;
    for (const auto& iv : list) {
      if (!merged.empty() && iv.start - merged.back().end - 1 <= bridge_frames)
        merged.back().end = iv.end;
      else
        merged.push_back(iv);
    }
    list = std::move(merged);
  }

  struct Candidate {
    detail::Interval iv;
    const std::pair<std::string, std::string>* key;
    bool short_candidate;
  };
  std::vector<Candidate> candidates;
  const double min_frames = min_duration * rate - 1e-9;
  for (const auto& [key, list] : runs)
    for (const auto& iv : list)
      candidates.push_back(
          Candidate{iv, &key, static_cast<double>(iv.end - iv.start + 1) < min_frames});

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.iv.start, a.key->first, a.key->second) <
           std::tie(b.iv.start, b.key->first, b.key->second);
  });

  // Short intervals are dropped unless they cover a frame nothing else
  // covers; retained ones are flagged.
  const size_t span = static_cast<size_t>(envelope.exit_frame - envelope.enter_frame + 1);
  std::vector<char> covered(span, 0);
  auto mark = [&](const detail::Interval& iv) {
    for (long f = iv.start; f <= iv.end; ++f)
      covered[static_cast<size_t>(f - envelope.enter_frame)] = 1;
  };
  for (const auto& c : candidates)
    if (!c.short_candidate) mark(c.iv);

  std::vector<BaseScenarioInstance> out;
  for (const auto& c : candidates) {
    bool keep = !c.short_candidate;
    bool flagged = false;
    if (c.short_candidate) {
      for (long f = c.iv.start; f <= c.iv.end && !keep; ++f)
        if (!covered[static_cast<size_t>(f - envelope.enter_frame)]) keep = true;
      if (keep) {
        mark(c.iv);
        flagged = true;
      }
    }
    if (!keep) continue;
    BaseScenarioInstance inst;
    inst.envelope_id = envelope.envelope_id;
    inst.type_name = c.key->first;
    inst.ego_id = envelope.ego_id;
    inst.object_id = c.key->second;
    inst.start_frame = c.iv.start;
    inst.end_frame = c.iv.end;
    inst.short_retained = flagged;
    out.push_back(std::move(inst));
  }

  std::sort(out.begin(), out.end(), [](const BaseScenarioInstance& a, const BaseScenarioInstance& b) {
    return std::tie(a.start_frame, a.type_name, a.object_id) <
           std::tie(b.start_frame, b.type_name, b.object_id);
  });
  for (size_t i = 0; i < out.size(); ++i)
    out[i].instance_id = envelope.envelope_id + "." + std::to_string(i + 1);
  return out;
}

inline std::vector<ClassificationGap> find_gaps(const EnvelopingScenario& envelope,
                                                const std::vector<BaseScenarioInstance>& instances,
                                                double relevance_radius, const Dataset& dataset) {
  const size_t span = static_cast<size_t>(envelope.exit_frame - envelope.enter_frame + 1);
  std::vector<char> covered(span, 0);
  for (const auto& inst : instances) {
    if (inst.envelope_id != envelope.envelope_id)
      throw Error("instance " + inst.instance_id + " does not belong to envelope " +
                  envelope.envelope_id);
    for (long f = inst.start_frame; f <= inst.end_frame; ++f)
      covered[static_cast<size_t>(f - envelope.enter_frame)] = 1;
  }

  const Trajectory& ego = dataset.track(envelope.ego_id);
  std::vector<ClassificationGap> out;
  for (long f = envelope.enter_frame; f <= envelope.exit_frame; ++f) {
    if (covered[static_cast<size_t>(f - envelope.enter_frame)]) continue;
    if (!out.empty() && out.back().end_frame + 1 == f) out.back().end_frame = f;
    else out.push_back(ClassificationGap{envelope.envelope_id, f, f, {}});
  }

  for (auto& gap : out) {
    std::set<std::string> nearby;
    for (long f = gap.start_frame; f <= gap.end_frame; ++f) {
      const TrackPoint& e = ego.at(f);
      for (const auto* obj : detail::objects_at(dataset, envelope.ego_id, f))
        if (detail::pair_distance(e, obj->at(f)) < relevance_radius)
          nearby.insert(obj->track_id);
    }
    gap.nearby_objects.assign(nearby.begin(), nearby.end());
  }
  return out;
}

struct DetectionSummary {
  std::map<std::string, long> counts_per_type;
  long total = 0;
  long short_retained = 0;
  // object's speed at each instance's start frame (ego speed for ego-alone),
  // aligned with the instance list passed to summarize
  std::vector<double> object_start_speeds;
};

inline DetectionSummary summarize(const std::vector<BaseScenarioInstance>& instances,
                                  const Dataset& dataset) {
  DetectionSummary s;
  for (const auto& inst : instances) {
    ++s.counts_per_type[inst.type_name];
    ++s.total;
    if (inst.short_retained) ++s.short_retained;
    const Trajectory& traj =
        inst.object_id.empty() ? dataset.track(inst.ego_id) : dataset.track(inst.object_id);
    s.object_start_speeds.push_back(traj.at(inst.start_frame).speed);
  }
  return s;
}

inline std::string export_instances_csv(const std::vector<BaseScenarioInstance>& instances) {
  CsvWriter w({"instance_id", "envelope_id", "type_name", "ego_id", "object_id", "start_frame",
               "end_frame"});
  for (const auto& i : instances)
    w.row({i.instance_id, i.envelope_id, i.type_name, i.ego_id, i.object_id,
           std::to_string(i.start_frame), std::to_string(i.end_frame)});
  return w.render();
}

inline std::string export_gaps_csv(const std::vector<ClassificationGap>& gaps) {
  CsvWriter w({"envelope_id", "start_frame", "end_frame", "nearby_objects"});
  for (const auto& g : gaps) {
    std::string objs;
    for (size_t i = 0; i < g.nearby_objects.size(); ++i) {
      if (i) objs += ";";
      objs += g.nearby_objects[i];
    }
    w.row({g.envelope_id, std::to_string(g.start_frame), std::to_string(g.end_frame), objs});
  }
  return w.render();
}

} // namespace scover
