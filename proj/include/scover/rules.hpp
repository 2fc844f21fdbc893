#pragma once

// Positively-formulated base-scenario rules. A rule is a conjunction of
// atomic predicates over an (ego, object) frame pair; negation and class
// complements are rejected at compile time so that nothing unknown can be
// classified by exclusion. The single sanctioned absence atom,
// no_whitelisted_object_within, defines the ego-alone rule.

#include "scover/error.hpp"
#include "scover/lineio.hpp"
#include "scover/trajectory.hpp"
#include "scover/util.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace scover {

enum class AtomKind {
  DistanceBelow,      // (r)
  DistanceAtLeast,    // (r)
  ObjectAhead,        // (half_angle)
  ObjectBehind,       // (half_angle)
  HeadingAligned,     // (tolerance)
  HeadingOpposed,     // (tolerance)
  HeadingCrossing,    // (min, max)
  EgoSpeedAtLeast,    // (v)
  ObjectSpeedAtLeast, // (v)
  NoObjectWithin      // (r); ego-alone only
};

struct Atom {
  AtomKind kind = AtomKind::DistanceBelow;
  double a = 0.0;
  double b = 0.0; // second argument (heading_crossing only)
};

struct BaseScenarioRule {
  std::string type_name;
  std::vector<std::string> object_classes; // empty = ego-alone rule
  std::vector<Atom> predicates;

  bool ego_alone() const { return object_classes.empty(); }

  bool accepts_class(const std::string& c) const {
    for (const auto& oc : object_classes)
      if (oc == c) return true;
    return false;
  }
};

struct RuleSet {
  std::vector<BaseScenarioRule> rules;

  const BaseScenarioRule* find(std::string_view type_name) const {
    for (const auto& r : rules)
      if (r.type_name == type_name) return &r;
    return nullptr;
  }

  const BaseScenarioRule& ego_alone_rule() const {
    for (const auto& r : rules)
      if (r.ego_alone()) return r;
    throw Error("rule set has no ego-alone rule");
  }
};

// -----------------------------
// atom evaluation
// -----------------------------

namespace detail {

inline double pair_distance(const TrackPoint& ego, const TrackPoint& obj) {
  return std::hypot(obj.x - ego.x, obj.y - ego.y);
}

inline double bearing_from_ego(const TrackPoint& ego, const TrackPoint& obj) {
  return wrap_angle(std::atan2(obj.y - ego.y, obj.x - ego.x) - ego.heading);
}

} // namespace detail

// Atom truth value for one (ego, object) frame pair. NoObjectWithin is not
// decidable pairwise and is handled by the detector; it is false here.
inline bool eval_atom(const Atom& atom, const TrackPoint& ego, const TrackPoint& obj) {
  using std::numbers::pi;
  switch (atom.kind) {
    case AtomKind::DistanceBelow:
      return detail::pair_distance(ego, obj) < atom.a;
    case AtomKind::DistanceAtLeast:
      return detail::pair_distance(ego, obj) >= atom.a;
    case AtomKind::ObjectAhead:
      return std::fabs(detail::bearing_from_ego(ego, obj)) <= atom.a;
    case AtomKind::ObjectBehind:
      return std::fabs(wrap_angle(detail::bearing_from_ego(ego, obj) - pi)) <= atom.a;
    case AtomKind::HeadingAligned:
      return std::fabs(wrap_angle(obj.heading - ego.heading)) <= atom.a;
    case AtomKind::HeadingOpposed:
      return std::fabs(wrap_angle(obj.heading - ego.heading - pi)) <= atom.a;
    case AtomKind::HeadingCrossing: {
      double d = std::fabs(wrap_angle(obj.heading - ego.heading));
      return d >= atom.a && d <= atom.b;
    }
    case AtomKind::EgoSpeedAtLeast:
      return ego.speed >= atom.a;
    case AtomKind::ObjectSpeedAtLeast:
      return obj.speed >= atom.a;
    case AtomKind::NoObjectWithin:
      return false;
  }
  return false;
}

inline bool rule_matches_pair(const BaseScenarioRule& rule, const TrackPoint& ego,
                              const TrackPoint& obj) {
  for (const auto& atom : rule.predicates)
    if (!eval_atom(atom, ego, obj)) return false;
  return true;
}

// -----------------------------
// compilation
// -----------------------------

namespace detail {

struct AtomSpec {
  const char* name;
  AtomKind kind;
  int arity;
};

inline const AtomSpec* atom_spec(std::string_view name) {
  static const AtomSpec specs[] = {
      {"distance_below", AtomKind::DistanceBelow, 1},
      {"distance_at_least", AtomKind::DistanceAtLeast, 1},
      {"object_ahead", AtomKind::ObjectAhead, 1},
      {"object_behind", AtomKind::ObjectBehind, 1},
      {"heading_aligned", AtomKind::HeadingAligned, 1},
      {"heading_opposed", AtomKind::HeadingOpposed, 1},
      {"heading_crossing", AtomKind::HeadingCrossing, 2},
      {"ego_speed_at_least", AtomKind::EgoSpeedAtLeast, 1},
      {"object_speed_at_least", AtomKind::ObjectSpeedAtLeast, 1},
      {"no_whitelisted_object_within", AtomKind::NoObjectWithin, 1},
  };
  for (const auto& s : specs)
    if (name == s.name) return &s;
  return nullptr;
}

inline void check_atom_bounds(const Atom& atom, const std::string& rule, int line) {
  using std::numbers::pi;
  auto fail = [&](const std::string& msg) {
    throw ParseError("rule '" + rule + "': " + msg, line);
  };
  if (!std::isfinite(atom.a) || !std::isfinite(atom.b)) fail("non-finite predicate parameter");
  switch (atom.kind) {
    case AtomKind::DistanceBelow:
    case AtomKind::DistanceAtLeast:
    case AtomKind::NoObjectWithin:
      if (atom.a <= 0.0) fail("distance parameter must be positive");
      break;
    case AtomKind::ObjectAhead:
    case AtomKind::ObjectBehind:
    case AtomKind::HeadingAligned:
    case AtomKind::HeadingOpposed:
      if (atom.a <= 0.0 || atom.a > pi) fail("angle parameter must lie in (0, pi]");
      break;
    case AtomKind::HeadingCrossing:
      if (atom.a < 0.0 || atom.b > pi || atom.a >= atom.b)
        fail("heading_crossing expects 0 <= min < max <= pi");
      break;
    case AtomKind::EgoSpeedAtLeast:
    case AtomKind::ObjectSpeedAtLeast:
      if (atom.a < 0.0) fail("speed parameter must be non-negative");
      break;
  }
}

// "atom_name(arg[, arg])" -> Atom
inline Atom parse_atom(std::string_view text, const std::string& rule, int line) {
  auto open = text.find('(');
  auto close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
      close + 1 != text.size())
    throw ParseError("rule '" + rule + "': expected '<atom>(<args>)', got '" +
                         std::string(text) + "'",
                     line);
  std::string_view name = trim(text.substr(0, open));
  std::string_view args = text.substr(open + 1, close - open - 1);

  const AtomSpec* spec = atom_spec(name);
  if (!spec)
    throw ParseError("rule '" + rule + "': unknown predicate '" + std::string(name) + "'", line);

  std::vector<std::string_view> parts;
  for (auto piece : split_char(args, ','))
    parts.push_back(trim(piece));
  if (parts.size() == 1 && parts[0].empty()) parts.clear();
  if (static_cast<int>(parts.size()) != spec->arity)
    throw ParseError("rule '" + rule + "': " + std::string(name) + " expects " +
                         std::to_string(spec->arity) + " argument(s)",
                     line);

  Atom atom;
  atom.kind = spec->kind;
  if (!parse_double(parts[0], atom.a))
    throw ParseError("rule '" + rule + "': bad number '" + std::string(parts[0]) + "'", line);
  if (spec->arity == 2 && !parse_double(parts[1], atom.b))
    throw ParseError("rule '" + rule + "': bad number '" + std::string(parts[1]) + "'", line);
  check_atom_bounds(atom, rule, line);
  return atom;
}

} // namespace detail

// Compiles a rule document. Grammar: `rule <type_name>` headers followed by
// indented `classes:` and `when:` properties. Rejects negation anywhere and
// requires exactly one ego-alone rule.
inline RuleSet compile_rules(std::string_view document) {
  RuleSet set;
  std::set<std::string> names;
  bool have_when = false;
  int header_line = 0;

  auto finish = [&](int line) {
    if (set.rules.empty()) return;
    BaseScenarioRule& r = set.rules.back();
    if (!have_when)
      throw ParseError("rule '" + r.type_name + "' has no 'when:' line", line);
    if (r.ego_alone()) {
      if (r.predicates.size() != 1 || r.predicates[0].kind != AtomKind::NoObjectWithin)
        throw ParseError("ego-alone rule '" + r.type_name +
                             "' must consist of the single predicate "
                             "no_whitelisted_object_within(r)",
                         header_line);
    } else {
      for (const auto& a : r.predicates)
        if (a.kind == AtomKind::NoObjectWithin)
          throw ParseError("rule '" + r.type_name +
                               "': no_whitelisted_object_within is reserved for the "
                               "ego-alone rule",
                           header_line);
    }
  };

  int last_line = 0;
  for (const auto& ln : scan_lines(document)) {
    last_line = ln.number;
    auto tokens = split_ws(ln.text);

    if (!ln.indented) {
      if (tokens[0] != "rule")
        throw ParseError("expected 'rule <type_name>'", ln.number);
      finish(ln.number);
      if (tokens.size() != 2)
        throw ParseError("expected 'rule <type_name>'", ln.number);
      std::string name(tokens[1]);
      if (!names.insert(name).second)
        throw ParseError("duplicate rule type_name: " + name, ln.number);
      set.rules.push_back(BaseScenarioRule{name, {}, {}});
      have_when = false;
      header_line = ln.number;
      continue;
    }

    if (set.rules.empty())
      throw ParseError("property line outside a rule block", ln.number);
    BaseScenarioRule& r = set.rules.back();
    std::string_view key, value;
    if (!split_key_value(ln.text, key, value))
      throw ParseError("expected 'classes:' or 'when:' property", ln.number);

    if (key == "classes") {
      for (auto c : split_ws(value)) {
        if (c.front() == '!' || c == "not")
          throw ParseError("rule '" + r.type_name +
                               "': class complements are not allowed; rules must be "
                               "formulated positively",
                           ln.number);
        r.object_classes.emplace_back(c);
      }
    } else if (key == "when") {
      if (have_when)
        throw ParseError("rule '" + r.type_name + "' has multiple 'when:' lines", ln.number);
      have_when = true;
      if (value.find('!') != std::string_view::npos)
        throw ParseError("rule '" + r.type_name +
                             "': negation is not allowed; rules must be formulated positively",
                         ln.number);
      for (auto piece : split_char(value, '&')) {
        std::string_view atom_text = trim(piece);
        if (atom_text.empty())
          throw ParseError("rule '" + r.type_name + "': empty conjunct", ln.number);
        auto head = split_ws(atom_text);
        if (head[0] == "not")
          throw ParseError("rule '" + r.type_name +
                               "': negation is not allowed; rules must be formulated positively",
                           ln.number);
        r.predicates.push_back(detail::parse_atom(atom_text, r.type_name, ln.number));
      }
      if (r.predicates.empty())
        throw ParseError("rule '" + r.type_name + "' has no predicates", ln.number);
    } else {
      throw ParseError("unknown rule property: " + std::string(key), ln.number);
    }
  }
  if (set.rules.empty()) throw ParseError("rule document defines no rules", 1);
  finish(last_line);

  int ego_alone_count = 0;
  for (const auto& r : set.rules)
    if (r.ego_alone()) ++ego_alone_count;
  if (ego_alone_count == 0)
    throw ParseError("rule set has no ego-alone rule (empty classes list + "
                     "no_whitelisted_object_within)",
                     last_line);
  if (ego_alone_count > 1)
    throw ParseError("rule set has more than one ego-alone rule", last_line);

  return set;
}

// Exclusivity lint: the ego-alone rule is mutually exclusive with another
// rule only if that rule demands an object within the ego-alone radius.
// Returns one finding per rule that cannot guarantee this.
inline std::vector<std::string> lint_rules(const RuleSet& set) {
  std::vector<std::string> findings;
  double ego_radius = set.ego_alone_rule().predicates[0].a;
  for (const auto& r : set.rules) {
    if (r.ego_alone()) continue;
    bool bounded = false;
    for (const auto& a : r.predicates)
      if (a.kind == AtomKind::DistanceBelow && a.a <= ego_radius) bounded = true;
    if (!bounded)
      findings.push_back("rule '" + r.type_name + "' can match objects outside the ego-alone " +
                         "radius " + fmt_double(ego_radius) +
                         "; ego-alone exclusivity not guaranteed");
  }
  return findings;
}

// Built-in rule set used when no rule document is supplied. Angles are
// radians: 0.523599 = 30 deg, 1.047198 = 60 deg, 2.094395 = 120 deg.
inline const char* default_rule_document() {
  return R"(# default base-scenario rules
rule ego_alone
  when: no_whitelisted_object_within(50)

rule following
  classes: car truck_bus pedestrian bicycle
  when: distance_below(50) & object_ahead(0.523599) & heading_aligned(0.523599)

rule followed_by
  classes: car truck_bus pedestrian bicycle
  when: distance_below(50) & object_behind(0.523599) & heading_aligned(0.523599)

rule oncoming
  classes: car truck_bus pedestrian bicycle
  when: distance_below(50) & object_ahead(0.523599) & heading_opposed(0.523599)

rule crossing
  classes: car truck_bus pedestrian bicycle
  when: distance_below(50) & heading_crossing(1.047198, 2.094395)

rule lateral_adjacent
  classes: car truck_bus pedestrian bicycle
  when: distance_below(6) & heading_aligned(0.523599)
)";
}

} // namespace scover
