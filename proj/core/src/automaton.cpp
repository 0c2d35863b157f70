#include "urlweaver/automaton.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <queue>
#include <stdexcept>
#include <unordered_set>

namespace urlweaver::strana {

void StringAutomaton::add_edge(StateId from, EdgeLabel label, StateId to) {
  edges_.push_back(Edge{from, to, std::move(label)});
}

std::vector<std::vector<const Edge*>> StringAutomaton::adjacency() const {
  std::vector<std::vector<const Edge*>> adj(states_);
  for (const auto& e : edges_) adj[e.from].push_back(&e);
  for (auto& out : adj)
    std::sort(out.begin(), out.end(), [](const Edge* a, const Edge* b) {
      return std::tie(a->label, a->to) < std::tie(b->label, b->to);
    });
  return adj;
}

std::optional<std::vector<StateId>> StringAutomaton::topological_order() const {
  std::vector<std::size_t> indeg(states_, 0);
  std::vector<std::vector<StateId>> succ(states_);
  for (const auto& e : edges_) {
    succ[e.from].push_back(e.to);
    ++indeg[e.to];
  }
  std::priority_queue<StateId, std::vector<StateId>, std::greater<>> ready;
  for (StateId s = 0; s < states_; ++s)
    if (indeg[s] == 0) ready.push(s);
  std::vector<StateId> order;
  order.reserve(states_);
  while (!ready.empty()) {
    StateId s = ready.top();
    ready.pop();
    order.push_back(s);
    for (StateId t : succ[s])
      if (--indeg[t] == 0) ready.push(t);
  }
  if (order.size() != states_) return std::nullopt;
  return order;
}

StringAutomaton StringAutomaton::normalized() const {
  const std::size_t n = states_;
  std::vector<std::vector<const Edge*>> out(n), in(n);
  for (const auto& e : edges_) {
    out[e.from].push_back(&e);
    in[e.to].push_back(&e);
  }

  std::vector<char> reach(n, 0), coreach(n, 0);
  std::vector<StateId> work{entry_};
  reach[entry_] = 1;
  while (!work.empty()) {
    StateId s = work.back();
    work.pop_back();
    for (const Edge* e : out[s])
      if (!reach[e->to]) reach[e->to] = 1, work.push_back(e->to);
  }
  for (StateId x : exits_)
    if (!coreach[x]) coreach[x] = 1, work.push_back(x);
  while (!work.empty()) {
    StateId s = work.back();
    work.pop_back();
    for (const Edge* e : in[s])
      if (!coreach[e->from]) coreach[e->from] = 1, work.push_back(e->from);
  }
  auto kept = [&](StateId s) { return s == entry_ || (reach[s] && coreach[s]); };

  auto order = topological_order();
  if (!order) throw std::logic_error("string automaton is not acyclic");

  // Merge states with identical (exit flag, outgoing label/target-class) sets,
  // visiting successors before predecessors.
  using Signature = std::pair<bool, std::vector<std::pair<EdgeLabel, std::size_t>>>;
  std::map<Signature, std::size_t> classes;
  std::vector<std::size_t> cls(n, std::numeric_limits<std::size_t>::max());
  std::vector<StateId> rep_min;
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    StateId s = *it;
    if (!kept(s)) continue;
    Signature sig;
    sig.first = exits_.count(s) > 0;
    for (const Edge* e : out[s])
      if (kept(e->to)) sig.second.emplace_back(e->label, cls[e->to]);
    std::sort(sig.second.begin(), sig.second.end());
    sig.second.erase(std::unique(sig.second.begin(), sig.second.end()), sig.second.end());
    auto [pos, fresh] = classes.try_emplace(std::move(sig), rep_min.size());
    if (fresh) rep_min.push_back(s);
    cls[s] = pos->second;
    rep_min[pos->second] = std::min(rep_min[pos->second], s);
  }

  // Quotient graph, then dense renumbering in topological order.
  const std::size_t k = rep_min.size();
  std::set<std::tuple<std::size_t, EdgeLabel, std::size_t>> qedges;
  for (const auto& e : edges_)
    if (kept(e.from) && kept(e.to)) qedges.emplace(cls[e.from], e.label, cls[e.to]);

  std::vector<std::size_t> indeg(k, 0);
  std::vector<std::vector<std::size_t>> succ(k);
  for (const auto& [f, l, t] : qedges) {
    succ[f].push_back(t);
    ++indeg[t];
  }
  auto later = [&](std::size_t a, std::size_t b) { return rep_min[a] > rep_min[b]; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> ready(later);
  for (std::size_t c = 0; c < k; ++c)
    if (indeg[c] == 0) ready.push(c);
  std::vector<StateId> renum(k);
  StateId next = 0;
  while (!ready.empty()) {
    std::size_t c = ready.top();
    ready.pop();
    renum[c] = next++;
    for (std::size_t t : succ[c])
      if (--indeg[t] == 0) ready.push(t);
  }

  StringAutomaton res;
  res.states_ = k;
  res.entry_ = renum[cls[entry_]];
  for (StateId x : exits_)
    if (kept(x)) res.exits_.insert(renum[cls[x]]);
  for (const auto& [f, l, t] : qedges) res.edges_.push_back(Edge{renum[f], renum[t], l});
  std::sort(res.edges_.begin(), res.edges_.end());
  return res;
}

StringAutomaton single_edge(EdgeLabel label) {
  StringAutomaton a;
  StateId s = a.add_state();
  a.add_edge(a.entry(), std::move(label), s);
  a.add_exit(s);
  return a;
}

std::string to_json(const StringAutomaton& a) {
  const StringAutomaton n = a.normalized();
  nlohmann::ordered_json doc;
  doc["entry"] = n.entry();
  doc["exits"] = nlohmann::ordered_json::array();
  for (StateId x : n.exits()) doc["exits"].push_back(x);
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : n.edges()) {
    nlohmann::ordered_json je;
    je["from"] = e.from;
    je["to"] = e.to;
    je[e.label.is_hole() ? "hole" : "lit"] = e.label.text;
    doc["edges"].push_back(std::move(je));
  }
  return doc.dump();
}

StringAutomaton from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("automaton JSON: ") + e.what());
  }
  auto bad = [](const std::string& why) {
    return std::invalid_argument("automaton JSON: " + why);
  };
  if (!doc.is_object() || !doc.contains("entry") || !doc.contains("exits") ||
      !doc.contains("edges"))
    throw bad("expected an object with entry, exits and edges");
  if (!doc["entry"].is_number_unsigned()) throw bad("entry must be a state number");
  if (!doc["exits"].is_array() || doc["exits"].empty()) throw bad("exits must be a non-empty array");
  if (!doc["edges"].is_array()) throw bad("edges must be an array");

  StateId max_state = doc["entry"].get<StateId>();
  auto state_of = [&](const nlohmann::json& v) {
    if (!v.is_number_unsigned()) throw bad("state ids must be non-negative integers");
    auto s = v.get<StateId>();
    max_state = std::max(max_state, s);
    return s;
  };
  std::vector<Edge> edges;
  for (const auto& je : doc["edges"]) {
    if (!je.is_object() || !je.contains("from") || !je.contains("to")) throw bad("malformed edge");
    Edge e;
    e.from = state_of(je["from"]);
    e.to = state_of(je["to"]);
    bool lit = je.contains("lit"), hole = je.contains("hole");
    if (lit == hole) throw bad("edge needs exactly one of lit or hole");
    const auto& label = lit ? je["lit"] : je["hole"];
    if (!label.is_string()) throw bad("edge label must be a string");
    e.label = lit ? EdgeLabel::lit(label.get<std::string>())
                  : EdgeLabel::hole(label.get<std::string>());
    edges.push_back(std::move(e));
  }
  std::set<StateId> exits;
  for (const auto& x : doc["exits"]) exits.insert(state_of(x));

  StringAutomaton a;
  // entry must be state 0 in the in-memory form; swap ids if needed
  StateId entry = doc["entry"].get<StateId>();
  auto remap = [&](StateId s) { return s == entry ? 0 : (s == 0 ? entry : s); };
  while (a.state_count() <= max_state) a.add_state();
  for (auto& e : edges) a.add_edge(remap(e.from), std::move(e.label), remap(e.to));
  for (StateId x : exits) a.add_exit(remap(x));
  if (!a.is_acyclic()) throw bad("edge relation is cyclic");
  return a;
}

Language language_of(const StringAutomaton& a, std::size_t cap) {
  Language lang;
  const auto adj = a.adjacency();
  // fused sequences keyed by an unambiguous byte encoding
  std::unordered_set<std::string> seen;
  std::string key;
  // the fused label path, with what each step needs to undo it
  TokenSeq path;
  struct Undo {
    std::size_t size;
    std::size_t back_len;
  };
  std::vector<Undo> undo;
  struct Frame {
    StateId state;
    std::size_t next_edge;
  };
  std::vector<Frame> stack;

  // Returns false once enumeration must stop.
  auto visit = [&](StateId s) {
    if (!a.exits().count(s)) return true;
    key.clear();
    for (const auto& t : path) {
      key += t.is_hole() ? '\x01' : '\x02';
      key += std::to_string(t.text.size());
      key += ':';
      key += t.text;
    }
    if (seen.count(key)) return true;
    if (lang.sequences.size() >= cap) {
      lang.truncated = true;
      return false;
    }
    seen.insert(key);
    lang.sequences.push_back(path);
    return true;
  };

  if (!visit(a.entry())) return lang;
  stack.push_back({a.entry(), 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next_edge == adj[top.state].size()) {
      stack.pop_back();
      if (!undo.empty() && !stack.empty()) {
        path.resize(undo.back().size);
        if (!path.empty()) path.back().text.resize(undo.back().back_len);
        undo.pop_back();
      }
      continue;
    }
    const Edge* e = adj[top.state][top.next_edge++];
    undo.push_back({path.size(), path.empty() ? 0 : path.back().text.size()});
    append_fused(path, e->label);
    if (!visit(e->to)) return lang;
    stack.push_back({e->to, 0});
  }
  return lang;
}

std::size_t path_count(const StringAutomaton& a) {
  auto order = a.topological_order();
  if (!order) throw std::logic_error("string automaton is not acyclic");
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> ways(a.state_count(), 0);
  ways[a.entry()] = 1;
  const auto adj = a.adjacency();
  std::size_t total = 0;
  auto add = [](std::size_t x, std::size_t y) { return x > kMax - y ? kMax : x + y; };
  for (StateId s : *order) {
    if (a.exits().count(s)) total = add(total, ways[s]);
    for (const Edge* e : adj[s]) ways[e->to] = add(ways[e->to], ways[s]);
  }
  return total;
}

}  // namespace urlweaver::strana
