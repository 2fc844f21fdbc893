#pragma once

// Goal-structuring-notation argument graphs with counter-hypothesis
// refutation semantics: a strategy holds only while every counter-hypothesis
// raised against it is refuted by evidence and every subgoal holds in turn.

#include "scover/error.hpp"
#include "scover/lineio.hpp"
#include "scover/util.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scover::gsn {

enum class NodeKind { Goal, Strategy, CounterHypothesis, Evidence, Assumption, Context };

enum class EdgeKind { SupportedBy, ChallengedBy, InContextOf };

// Goals and strategies use Supported/Undermined/Undetermined; counter-
// hypotheses use Refuted/Confirmed/Open. Evidence, assumption, and context
// nodes carry no status at all.
enum class NodeStatus { Supported, Undermined, Undetermined, Refuted, Confirmed, Open };

enum class VerdictOutcome { Refuting, Confirming, Inconclusive };

struct EvidenceVerdict {
  std::string source;       // check identifier or "manual"
  VerdictOutcome outcome = VerdictOutcome::Inconclusive;
  std::string detail;
  std::int64_t timestamp = 0; // seconds since epoch

  bool operator==(const EvidenceVerdict&) const = default;
};

struct ArgumentNode {
  std::string id;
  NodeKind kind = NodeKind::Goal;
  std::string statement;
  std::optional<NodeStatus> status; // engaged only for goal/strategy/counter-hypothesis
  bool terminal = false;            // strategy without subgoals, marked explicitly
  std::vector<EvidenceVerdict> verdicts; // evidence nodes only

  bool operator==(const ArgumentNode&) const = default;
};

struct Edge {
  std::string from;
  EdgeKind kind = EdgeKind::SupportedBy;
  std::string to;

  bool operator==(const Edge&) const = default;
  auto tie() const { return std::tie(from, kind, to); }
};

struct Violation {
  std::string rule; // V1..V5
  std::string node_id;
  std::string message;
};

// -----------------------------
// token tables
// -----------------------------

inline const char* kind_token(NodeKind k) {
  switch (k) {
    case NodeKind::Goal: return "goal";
    case NodeKind::Strategy: return "strategy";
    case NodeKind::CounterHypothesis: return "counter-hypothesis";
    case NodeKind::Evidence: return "evidence";
    case NodeKind::Assumption: return "assumption";
    case NodeKind::Context: return "context";
  }
  return "?";
}

inline bool kind_from_token(std::string_view t, NodeKind& out) {
  if (t == "goal") out = NodeKind::Goal;
  else if (t == "strategy") out = NodeKind::Strategy;
  else if (t == "counter-hypothesis") out = NodeKind::CounterHypothesis;
  else if (t == "evidence") out = NodeKind::Evidence;
  else if (t == "assumption") out = NodeKind::Assumption;
  else if (t == "context") out = NodeKind::Context;
  else return false;
  return true;
}

inline const char* edge_token(EdgeKind k) {
  switch (k) {
    case EdgeKind::SupportedBy: return "supported-by";
    case EdgeKind::ChallengedBy: return "challenged-by";
    case EdgeKind::InContextOf: return "in-context-of";
  }
  return "?";
}

inline bool edge_from_token(std::string_view t, EdgeKind& out) {
  if (t == "supported-by") out = EdgeKind::SupportedBy;
  else if (t == "challenged-by") out = EdgeKind::ChallengedBy;
  else if (t == "in-context-of") out = EdgeKind::InContextOf;
  else return false;
  return true;
}

inline const char* status_token(NodeStatus s) {
  switch (s) {
    case NodeStatus::Supported: return "supported";
    case NodeStatus::Undermined: return "undermined";
    case NodeStatus::Undetermined: return "undetermined";
    case NodeStatus::Refuted: return "refuted";
    case NodeStatus::Confirmed: return "confirmed";
    case NodeStatus::Open: return "open";
  }
  return "?";
}

inline bool status_from_token(std::string_view t, NodeStatus& out) {
  if (t == "supported") out = NodeStatus::Supported;
  else if (t == "undermined") out = NodeStatus::Undermined;
  else if (t == "undetermined") out = NodeStatus::Undetermined;
  else if (t == "refuted") out = NodeStatus::Refuted;
  else if (t == "confirmed") out = NodeStatus::Confirmed;
  else if (t == "open") out = NodeStatus::Open;
  else return false;
  return true;
}

inline const char* outcome_token(VerdictOutcome o) {
  switch (o) {
    case VerdictOutcome::Refuting: return "refuting";
    case VerdictOutcome::Confirming: return "confirming";
    case VerdictOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

inline bool outcome_from_token(std::string_view t, VerdictOutcome& out) {
  if (t == "refuting") out = VerdictOutcome::Refuting;
  else if (t == "confirming") out = VerdictOutcome::Confirming;
  else if (t == "inconclusive") out = VerdictOutcome::Inconclusive;
  else return false;
  return true;
}

inline bool kind_has_status(NodeKind k) {
  return k == NodeKind::Goal || k == NodeKind::Strategy || k == NodeKind::CounterHypothesis;
}

inline bool status_in_family(NodeKind k, NodeStatus s) {
  if (k == NodeKind::Goal || k == NodeKind::Strategy)
    return s == NodeStatus::Supported || s == NodeStatus::Undermined || s == NodeStatus::Undetermined;
  if (k == NodeKind::CounterHypothesis)
    return s == NodeStatus::Refuted || s == NodeStatus::Confirmed || s == NodeStatus::Open;
  return false;
}

inline NodeStatus default_status(NodeKind k) {
  return k == NodeKind::CounterHypothesis ? NodeStatus::Open : NodeStatus::Undetermined;
}

// Endpoint-kind pairs each edge kind permits. A goal supported directly by
// evidence (without a strategy) is accepted as a documented extension.
inline bool edge_endpoints_legal(EdgeKind e, NodeKind from, NodeKind to) {
  switch (e) {
    case EdgeKind::SupportedBy:
      return (from == NodeKind::Goal && to == NodeKind::Strategy) ||
             (from == NodeKind::Goal && to == NodeKind::Evidence) ||
             (from == NodeKind::Strategy && to == NodeKind::Goal) ||
             (from == NodeKind::CounterHypothesis && to == NodeKind::Evidence);
    case EdgeKind::ChallengedBy:
      return from == NodeKind::Strategy && to == NodeKind::CounterHypothesis;
    case EdgeKind::InContextOf:
      return to == NodeKind::Assumption || to == NodeKind::Context;
  }
  return false;
}

// -----------------------------
// graph
// -----------------------------

class ArgumentGraph {
public:
  const std::vector<ArgumentNode>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_node(std::string_view id) const { return find(id) != nullptr; }

  const ArgumentNode* find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &nodes_[it->second];
  }

  const ArgumentNode& at(std::string_view id) const {
    const ArgumentNode* n = find(id);
    if (!n) throw Error("unknown node id: " + std::string(id));
    return *n;
  }

  void add_node(ArgumentNode node) {
    if (node.id.empty()) throw Error("node id empty");
    if (node.statement.empty()) throw Error("node statement empty: " + node.id);
    if (index_.count(node.id)) throw Error("duplicate node id: " + node.id);
    if (!node.verdicts.empty() && node.kind != NodeKind::Evidence)
      throw Error("verdicts on non-evidence node: " + node.id);
    if (node.status && !status_in_family(node.kind, *node.status))
      throw Error("status outside kind's family: " + node.id);
    if (!node.status && kind_has_status(node.kind))
      node.status = default_status(node.kind);
    index_[node.id] = nodes_.size();
    nodes_.push_back(std::move(node));
  }

  void add_edge(const std::string& from, EdgeKind kind, const std::string& to) {
    const ArgumentNode* f = find(from);
    const ArgumentNode* t = find(to);
    if (!f) throw Error("edge endpoint missing: " + from);
    if (!t) throw Error("edge endpoint missing: " + to);
    if (!edge_endpoints_legal(kind, f->kind, t->kind))
      throw Error("edge kind/endpoint mismatch: " + from + " -" + edge_token(kind) + "-> " + to);
    edges_.push_back(Edge{from, kind, to});
  }

  // Structural equality, insensitive to declaration order.
  bool operator==(const ArgumentGraph& other) const {
    auto mine = nodes_;
    auto theirs = other.nodes_;
    auto by_id = [](const ArgumentNode& a, const ArgumentNode& b) { return a.id < b.id; };
    std::sort(mine.begin(), mine.end(), by_id);
    std::sort(theirs.begin(), theirs.end(), by_id);
    if (mine != theirs) return false;
    auto e1 = edges_;
    auto e2 = other.edges_;
    auto by_tie = [](const Edge& a, const Edge& b) { return a.tie() < b.tie(); };
    std::sort(e1.begin(), e1.end(), by_tie);
    std::sort(e2.begin(), e2.end(), by_tie);
    return e1 == e2;
  }

  // --- adjacency helpers (ids, in declaration order) ---

  std::vector<const ArgumentNode*> supported_by(std::string_view id) const {
    return targets(id, EdgeKind::SupportedBy);
  }

  std::vector<const ArgumentNode*> challenged_by(std::string_view id) const {
    return targets(id, EdgeKind::ChallengedBy);
  }

  std::vector<const ArgumentNode*> targets(std::string_view id, EdgeKind kind) const {
    std::vector<const ArgumentNode*> out;
    for (const auto& e : edges_)
      if (e.kind == kind && e.from == id) out.push_back(&at(e.to));
    return out;
  }

  // Goals with no incoming SupportedBy edge; the argument roots.
  std::vector<const ArgumentNode*> root_goals() const {
    std::vector<const ArgumentNode*> out;
    for (const auto& n : nodes_) {
      if (n.kind != NodeKind::Goal) continue;
      bool incoming = false;
      for (const auto& e : edges_)
        if (e.kind == EdgeKind::SupportedBy && e.to == n.id) { incoming = true; break; }
      if (!incoming) out.push_back(&n);
    }
    return out;
  }

  ArgumentNode& mutable_at(std::string_view id) {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw Error("unknown node id: " + std::string(id));
    return nodes_[it->second];
  }

private:
  std::vector<ArgumentNode> nodes_;
  std::vector<Edge> edges_;
  std::map<std::string, size_t> index_;
};

// -----------------------------
// parsing
// -----------------------------

namespace detail {

inline bool is_id_token(std::string_view t) {
  if (t.empty()) return false;
  for (char c : t)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) return false;
  return true;
}

inline int column_of(std::string_view line, std::string_view token) {
  if (token.data() >= line.data() && token.data() <= line.data() + line.size())
    return static_cast<int>(token.data() - line.data()) + 1;
  return 1;
}

} // namespace detail

// Parses a GSN text document (grammar in docs/formats.md). Statuses default
// to undetermined/open unless the document states them.
inline ArgumentGraph parse_graph(std::string_view document) {
  auto lines = scan_lines(document);
  if (lines.empty()) throw ParseError("missing 'gsn-version: 1' header", 1);

  {
    std::string_view key, value;
    if (!split_key_value(lines[0].text, key, value) || key != "gsn-version")
      throw ParseError("missing 'gsn-version: 1' header", lines[0].number);
    if (value != "1")
      throw ParseError("unsupported gsn-version: " + std::string(value), lines[0].number);
  }

  ArgumentGraph graph;

  // Node blocks are accumulated and committed when the next top-level line
  // (or the end of the document) is reached. Edges are resolved afterwards
  // so forward references are legal.
  struct PendingEdge { std::string from; EdgeKind kind; std::string to; int line; };
  std::vector<PendingEdge> pending_edges;
  std::optional<ArgumentNode> current;
  int current_line = 0;

  auto commit = [&](int line) {
    if (!current) return;
    if (current->statement.empty())
      throw ParseError("node '" + current->id + "' has no statement", line);
    try {
      graph.add_node(std::move(*current));
    } catch (const Error& e) {
      throw ParseError(e.what(), current_line);
    }
    current.reset();
  };

  for (size_t li = 1; li < lines.size(); ++li) {
    const auto& ln = lines[li];
    std::string_view text = ln.text;
    auto tokens = split_ws(text);
    if (tokens.empty()) continue;

    if (ln.indented) {
      if (!current)
        throw ParseError("property line outside a node block", ln.number);
      std::string_view key, value;
      if (!split_key_value(text, key, value))
        throw ParseError("expected '<key>: <value>' property", ln.number);
      if (key == "statement") {
        if (value.empty()) throw ParseError("empty statement", ln.number);
        if (!current->statement.empty())
          throw ParseError("duplicate statement for node '" + current->id + "'", ln.number);
        current->statement = std::string(value);
      } else if (key == "status") {
        NodeStatus s;
        if (!status_from_token(value, s))
          throw ParseError("unknown status token: " + std::string(value), ln.number);
        if (!kind_has_status(current->kind))
          throw ParseError("status not applicable to " + std::string(kind_token(current->kind)) +
                               " node '" + current->id + "'",
                           ln.number);
        if (!status_in_family(current->kind, s))
          throw ParseError("status '" + std::string(value) + "' outside the " +
                               std::string(kind_token(current->kind)) + " status family",
                           ln.number);
        current->status = s;
      } else if (key == "terminal") {
        if (current->kind != NodeKind::Strategy)
          throw ParseError("terminal flag only applies to strategy nodes", ln.number);
        if (value == "yes") current->terminal = true;
        else if (value == "no") current->terminal = false;
        else throw ParseError("terminal expects 'yes' or 'no'", ln.number);
      } else if (key == "verdict") {
        if (current->kind != NodeKind::Evidence)
          throw ParseError("verdict on non-evidence node '" + current->id + "'", ln.number);
        auto parts = split_ws(value);
        if (parts.size() < 3)
          throw ParseError("verdict expects '<outcome> <source> <epoch-seconds> <detail>'", ln.number);
        EvidenceVerdict v;
        if (!outcome_from_token(parts[0], v.outcome))
          throw ParseError("unknown verdict outcome: " + std::string(parts[0]), ln.number,
                           detail::column_of(text, parts[0]));
        v.source = std::string(parts[1]);
        std::int64_t ts = 0;
        if (!parse_int64(parts[2], ts))
          throw ParseError("verdict timestamp must be an integer", ln.number,
                           detail::column_of(text, parts[2]));
        v.timestamp = ts;
        const char* detail_start = parts[2].data() + parts[2].size();
        const char* end = value.data() + value.size();
        v.detail = std::string(trim(std::string_view(detail_start, static_cast<size_t>(end - detail_start))));
        current->verdicts.push_back(std::move(v));
      } else {
        throw ParseError("unknown node property: " + std::string(key), ln.number);
      }
      continue;
    }

    // top-level line: commits any open node block
    if (tokens[0] == "node") {
      commit(ln.number);
      if (tokens.size() != 3)
        throw ParseError("expected 'node <id> <kind>'", ln.number);
      if (!detail::is_id_token(tokens[1]))
        throw ParseError("invalid node id: " + std::string(tokens[1]), ln.number,
                         detail::column_of(text, tokens[1]));
      ArgumentNode n;
      n.id = std::string(tokens[1]);
      if (!kind_from_token(tokens[2], n.kind))
        throw ParseError("unknown node kind: " + std::string(tokens[2]), ln.number,
                         detail::column_of(text, tokens[2]));
      if (graph.has_node(n.id))
        throw ParseError("duplicate node id: " + n.id, ln.number, detail::column_of(text, tokens[1]));
      current = std::move(n);
      current_line = ln.number;
    } else if (tokens[0] == "edge") {
      commit(ln.number);
      if (tokens.size() != 4)
        throw ParseError("expected 'edge <from> <kind> <to>'", ln.number);
      EdgeKind kind;
      if (!edge_from_token(tokens[2], kind))
        throw ParseError("unknown edge kind: " + std::string(tokens[2]), ln.number,
                         detail::column_of(text, tokens[2]));
      pending_edges.push_back(
          PendingEdge{std::string(tokens[1]), kind, std::string(tokens[3]), ln.number});
    } else {
      throw ParseError("expected 'node' or 'edge' declaration", ln.number);
    }
  }
  commit(lines.back().number);

  for (const auto& pe : pending_edges) {
    try {
      graph.add_edge(pe.from, pe.kind, pe.to);
    } catch (const Error& e) {
      throw ParseError(e.what(), pe.line);
    }
  }
  return graph;
}

// -----------------------------
// structural validation
// -----------------------------

// Rules:
//   V1 every goal has >=1 supported-by edge to a strategy or evidence
//   V2 every strategy has >=1 challenged-by edge to a counter-hypothesis
//   V3 every strategy has >=1 supported-by subgoal or carries the terminal flag
//   V4 the supported-by/challenged-by subgraph is acyclic
//   V5 every node is reachable from some goal
inline std::vector<Violation> validate_structure(const ArgumentGraph& graph) {
  std::vector<Violation> out;

  for (const auto& n : graph.nodes()) {
    if (n.kind == NodeKind::Goal) {
      bool supported = false;
      for (const auto* t : graph.supported_by(n.id))
        if (t->kind == NodeKind::Strategy || t->kind == NodeKind::Evidence) supported = true;
      if (!supported)
        out.push_back({"V1", n.id, "goal has no supporting strategy or evidence"});
    } else if (n.kind == NodeKind::Strategy) {
      if (graph.challenged_by(n.id).empty())
        out.push_back({"V2", n.id, "strategy has no counter-hypothesis"});
      bool has_subgoal = false;
      for (const auto* t : graph.supported_by(n.id))
        if (t->kind == NodeKind::Goal) has_subgoal = true;
      if (!has_subgoal && !n.terminal)
        out.push_back({"V3", n.id, "strategy has neither subgoals nor the terminal flag"});
    }
  }

  // V4: cycle detection over supported-by/challenged-by edges.
  {
    std::map<std::string, int> state; // 0 new, 1 on stack, 2 done
    std::vector<std::string> cycle_nodes;
    auto visit = [&](auto&& self, const std::string& id) -> bool {
      int& st = state[id];
      if (st == 1) { cycle_nodes.push_back(id); return true; }
      if (st == 2) return false;
      st = 1;
      for (const auto& e : graph.edges()) {
        if (e.from != id || e.kind == EdgeKind::InContextOf) continue;
        if (self(self, e.to)) { state[id] = 2; return true; }
      }
      st = 2;
      return false;
    };
    for (const auto& n : graph.nodes()) {
      cycle_nodes.clear();
      if (state[n.id] == 0 && visit(visit, n.id)) {
        out.push_back({"V4", cycle_nodes.front(), "support cycle detected"});
        break;
      }
    }
  }

  // V5: reachability from goals over all edge kinds.
  {
    std::map<std::string, bool> reached;
    std::vector<std::string> stack;
    for (const auto& n : graph.nodes())
      if (n.kind == NodeKind::Goal) { stack.push_back(n.id); reached[n.id] = true; }
    while (!stack.empty()) {
      std::string id = stack.back();
      stack.pop_back();
      for (const auto& e : graph.edges())
        if (e.from == id && !reached[e.to]) { reached[e.to] = true; stack.push_back(e.to); }
    }
    for (const auto& n : graph.nodes())
      if (!reached[n.id])
        out.push_back({"V5", n.id, "node unreachable from every goal"});
  }

  return out;
}

// -----------------------------
// status propagation
// -----------------------------

namespace detail {

// Pooled verdicts of the evidence nodes below a counter-hypothesis (or of a
// single evidence node supporting a goal directly). A confirming verdict
// wins over refuting ones: conflicts must surface, not cancel.
inline NodeStatus verdict_status(bool any_confirming, bool any_refuting) {
  if (any_confirming) return NodeStatus::Confirmed;
  if (any_refuting) return NodeStatus::Refuted;
  return NodeStatus::Open;
}

inline void scan_verdicts(const ArgumentNode& evidence, bool& any_confirming, bool& any_refuting) {
  for (const auto& v : evidence.verdicts) {
    if (v.outcome == VerdictOutcome::Confirming) any_confirming = true;
    if (v.outcome == VerdictOutcome::Refuting) any_refuting = true;
  }
}

// Effective contribution of an evidence node attached directly below a
// goal: a refuting verdict (no confirming) supports the claim, a confirming
// verdict undermines it.
inline NodeStatus direct_evidence_status(const ArgumentNode& evidence) {
  bool c = false, r = false;
  scan_verdicts(evidence, c, r);
  if (c) return NodeStatus::Undermined;
  if (r) return NodeStatus::Supported;
  return NodeStatus::Undetermined;
}

} // namespace detail

// Recomputes every status from the verdicts by iterating the local rules to
// a fixpoint. Requires a structurally valid graph. Returns a new graph that
// differs from the input only in status fields.
inline ArgumentGraph propagate_status(const ArgumentGraph& input) {
  {
    auto violations = validate_structure(input);
    if (!violations.empty())
      throw Error("propagate_status requires a structurally valid graph (" +
                  violations.front().rule + " at " + violations.front().node_id + ")");
  }

  ArgumentGraph graph = input;

  // counter-hypothesis statuses depend only on verdicts; fixed before the loop
  for (const auto& n : graph.nodes()) {
    if (n.kind != NodeKind::CounterHypothesis) continue;
    bool c = false, r = false;
    for (const auto* ev : graph.supported_by(n.id))
      if (ev->kind == NodeKind::Evidence) detail::scan_verdicts(*ev, c, r);
    graph.mutable_at(n.id).status = detail::verdict_status(c, r);
  }
  for (const auto& n : graph.nodes())
    if (n.kind == NodeKind::Goal || n.kind == NodeKind::Strategy)
      graph.mutable_at(n.id).status = NodeStatus::Undetermined;

  // ids in sorted order for a deterministic sweep
  std::vector<std::string> ids;
  for (const auto& n : graph.nodes())
    if (n.kind == NodeKind::Goal || n.kind == NodeKind::Strategy) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());

  bool changed = true;
  size_t sweeps = 0;
  while (changed) {
    changed = false;
    if (++sweeps > graph.nodes().size() + 2)
      throw Error("status propagation did not reach a fixpoint");

    for (const auto& id : ids) {
      const ArgumentNode& n = graph.at(id);
      NodeStatus next = NodeStatus::Undetermined;

      if (n.kind == NodeKind::Strategy) {
        bool any_confirmed = false, all_refuted = true;
        for (const auto* ch : graph.challenged_by(id)) {
          if (ch->status == NodeStatus::Confirmed) any_confirmed = true;
          if (ch->status != NodeStatus::Refuted) all_refuted = false;
        }
        bool any_sub_undermined = false, all_sub_supported = true;
        for (const auto* t : graph.supported_by(id)) {
          if (t->kind != NodeKind::Goal) continue;
          if (t->status == NodeStatus::Undermined) any_sub_undermined = true;
          if (t->status != NodeStatus::Supported) all_sub_supported = false;
        }
        if (any_confirmed || any_sub_undermined) next = NodeStatus::Undermined;
        else if (all_refuted && all_sub_supported) next = NodeStatus::Supported;
        else next = NodeStatus::Undetermined;
      } else { // goal
        bool any_supported = false, all_undermined = true, any_supporter = false;
        for (const auto* t : graph.supported_by(id)) {
          NodeStatus ts;
          if (t->kind == NodeKind::Strategy) ts = *t->status;
          else if (t->kind == NodeKind::Evidence) ts = detail::direct_evidence_status(*t);
          else continue;
          any_supporter = true;
          if (ts == NodeStatus::Supported) any_supported = true;
          if (ts != NodeStatus::Undermined) all_undermined = false;
        }
        if (any_supported) next = NodeStatus::Supported;
        else if (any_supporter && all_undermined) next = NodeStatus::Undermined;
        else next = NodeStatus::Undetermined;
      }

      ArgumentNode& mut = graph.mutable_at(id);
      if (mut.status != next) {
        mut.status = next;
        changed = true;
      }
    }
  }
  return graph;
}

// Appends a verdict; statuses are left untouched (callers re-propagate).
inline ArgumentGraph attach_verdict(const ArgumentGraph& input, const std::string& evidence_id,
                                    EvidenceVerdict verdict) {
  const ArgumentNode* n = input.find(evidence_id);
  if (!n) throw Error("unknown node id: " + evidence_id);
  if (n->kind != NodeKind::Evidence)
    throw Error("node '" + evidence_id + "' is not an evidence node");
  ArgumentGraph graph = input;
  graph.mutable_at(evidence_id).verdicts.push_back(std::move(verdict));
  return graph;
}

// -----------------------------
// export
// -----------------------------

enum class ExportMode { Document, Renderable };

inline std::string export_graph(const ArgumentGraph& graph, ExportMode mode) {
  std::string out;
  if (mode == ExportMode::Document) {
    out += "gsn-version: 1\n";
    for (const auto& n : graph.nodes()) {
      out += "node " + n.id + " " + kind_token(n.kind) + "\n";
      out += "  statement: " + n.statement + "\n";
      if (n.status) out += "  status: " + std::string(status_token(*n.status)) + "\n";
      if (n.terminal) out += "  terminal: yes\n";
      for (const auto& v : n.verdicts) {
        out += "  verdict: " + std::string(outcome_token(v.outcome)) + " " + v.source + " " +
               std::to_string(v.timestamp);
        if (!v.detail.empty()) out += " " + v.detail;
        out += "\n";
      }
    }
    for (const auto& e : graph.edges())
      out += "edge " + e.from + " " + edge_token(e.kind) + " " + e.to + "\n";
  } else {
    for (const auto& n : graph.nodes()) {
      out += "node\t" + n.id + "\t" + kind_token(n.kind) + "\t" +
             (n.status ? status_token(*n.status) : "-") + "\t" + n.statement + "\n";
    }
    for (const auto& e : graph.edges())
      out += "edge\t" + e.from + "\t" + edge_token(e.kind) + "\t" + e.to + "\n";
  }
  return out;
}

} // namespace scover::gsn
