#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "urlweaver/token.hpp"

namespace urlweaver::strana {

using StateId = std::uint32_t;

struct Edge {
  StateId from = 0;
  StateId to = 0;
  EdgeLabel label;

  // (from, to, label) order, which is also the serialized order
  auto operator<=>(const Edge&) const = default;
  bool operator==(const Edge&) const = default;
};

/// Acyclic labeled automaton; each entry-to-exit path spells one string.
/// States are dense ids. Construction code is expected to keep the edge
/// relation acyclic; `normalized()` checks it.
class StringAutomaton {
 public:
  StringAutomaton() : states_(1) {}

  StateId entry() const noexcept { return entry_; }
  std::size_t state_count() const noexcept { return states_; }
  const std::set<StateId>& exits() const noexcept { return exits_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  StateId add_state() { return static_cast<StateId>(states_++); }
  void add_edge(StateId from, EdgeLabel label, StateId to);
  void add_exit(StateId s) { exits_.insert(s); }
  void set_exits(std::set<StateId> exits) { exits_ = std::move(exits); }

  /// Kahn order preferring the lowest state id; nullopt when cyclic.
  std::optional<std::vector<StateId>> topological_order() const;
  bool is_acyclic() const { return topological_order().has_value(); }

  /// Drops states that are unreachable or cannot reach an exit (the entry is
  /// always kept), merges states with identical futures, removes duplicate
  /// edges and renumbers densely in topological order with sorted edges.
  /// Language-preserving. Throws std::logic_error on a cyclic automaton.
  StringAutomaton normalized() const;

  /// Out-edges of every state, sorted by (label, to).
  std::vector<std::vector<const Edge*>> adjacency() const;

  bool operator==(const StringAutomaton&) const = default;

 private:
  std::size_t states_;
  StateId entry_ = 0;
  std::set<StateId> exits_;
  std::vector<Edge> edges_;
};

/// Single-edge automaton accepting exactly `label`.
StringAutomaton single_edge(EdgeLabel label);

/// Compact JSON `{"entry":..,"exits":[..],"edges":[..]}` of the normalized
/// automaton. Two automata serialize equally iff their normal forms match.
std::string to_json(const StringAutomaton& a);

/// Inverse of to_json; throws std::invalid_argument on malformed documents
/// and on cyclic edge relations.
StringAutomaton from_json(std::string_view text);

struct Language {
  std::vector<TokenSeq> sequences;  // distinct, in lexicographic edge order
  bool truncated = false;
};

/// Enumerates entry-to-exit label sequences (adjacent literals fused), at
/// most `cap` distinct ones.
Language language_of(const StringAutomaton& a, std::size_t cap);

/// Number of entry-to-exit paths, saturating at SIZE_MAX.
std::size_t path_count(const StringAutomaton& a);

}  // namespace urlweaver::strana
