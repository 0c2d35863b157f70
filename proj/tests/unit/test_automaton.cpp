#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "urlweaver/automaton.hpp"

using namespace urlweaver;
using namespace urlweaver::strana;

namespace {

EdgeLabel L(std::string s) { return EdgeLabel::lit(std::move(s)); }
EdgeLabel H(std::string s) { return EdgeLabel::hole(std::move(s)); }

StringAutomaton chain(std::initializer_list<EdgeLabel> labels) {
  StringAutomaton a;
  StateId cur = a.entry();
  for (const auto& l : labels) {
    StateId n = a.add_state();
    a.add_edge(cur, l, n);
    cur = n;
  }
  a.add_exit(cur);
  return a;
}

StringAutomaton forks(int n) {
  StringAutomaton a;
  StateId cur = a.entry();
  for (int i = 0; i < n; ++i) {
    StateId nx = a.add_state();
    a.add_edge(cur, L("a" + std::to_string(i)), nx);
    a.add_edge(cur, H("h" + std::to_string(i)), nx);
    cur = nx;
  }
  a.add_exit(cur);
  return a;
}

// every entry-to-exit path, fused by hand
std::set<TokenSeq> all_paths(const StringAutomaton& a) {
  std::set<TokenSeq> out;
  auto walk = [&](auto&& self, StateId s, TokenSeq acc) -> void {
    if (a.exits().count(s)) {
      TokenSeq f;
      for (const auto& t : acc) {
        if (t.is_lit() && t.text.empty()) continue;
        if (t.is_lit() && !f.empty() && f.back().is_lit())
          f.back().text += t.text;
        else
          f.push_back(t);
      }
      out.insert(f);
    }
    for (const auto& e : a.edges())
      if (e.from == s) {
        auto next = acc;
        next.push_back(e.label);
        self(self, e.to, next);
      }
  };
  walk(walk, a.entry(), {});
  return out;
}

StringAutomaton random_dag(std::mt19937_64& rng) {
  static const std::vector<EdgeLabel> pool = {L("a"), L("b"), L("ab"), L(""), H("x"), H("y"), L("/")};
  StringAutomaton a;
  std::size_t n = 2 + rng() % 8;
  for (std::size_t i = 1; i < n; ++i) a.add_state();
  std::size_t m = rng() % (2 * n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    StateId u = static_cast<StateId>(rng() % (n - 1));
    StateId v = static_cast<StateId>(u + 1 + rng() % (n - 1 - u));
    a.add_edge(u, pool[rng() % pool.size()], v);
  }
  // exits must be reachable from the entry
  std::vector<bool> seen(n, false);
  seen[0] = true;
  for (std::size_t s = 0; s < n; ++s)
    if (seen[s])
      for (const auto& e : a.edges())
        if (e.from == s) seen[e.to] = true;
  std::vector<StateId> live;
  for (std::size_t s = 0; s < n; ++s)
    if (seen[s]) live.push_back(static_cast<StateId>(s));
  a.add_exit(live[rng() % live.size()]);
  if (rng() % 2) a.add_exit(live[rng() % live.size()]);
  return a;
}

std::set<TokenSeq> as_set(const Language& l) { return {l.sequences.begin(), l.sequences.end()}; }

}  // namespace

TEST_CASE("single edge automaton") {
  auto a = single_edge(L("http://a.com"));
  CHECK(a.state_count() == 2);
  CHECK(a.edges().size() == 1);
  auto lang = language_of(a, 10);
  REQUIRE(lang.sequences.size() == 1);
  CHECK(lang.sequences[0] == TokenSeq{L("http://a.com")});
  CHECK_FALSE(lang.truncated);
}

TEST_CASE("adjacent literals are fused in the language") {
  auto a = chain({L("http://"), L("a.com"), H("p"), L("/"), L("x")});
  auto lang = language_of(a, 10);
  REQUIRE(lang.sequences.size() == 1);
  CHECK(lang.sequences[0] == TokenSeq{L("http://a.com"), H("p"), L("/x")});
}

TEST_CASE("twelve independent forks give 4096 sequences") {
  auto a = forks(12);
  auto lang = language_of(a, 10'000);
  CHECK(lang.sequences.size() == 4096);
  CHECK_FALSE(lang.truncated);
  CHECK(path_count(a) == 4096);
  CHECK(as_set(lang).size() == 4096);
}

TEST_CASE("language enumeration stops at the cap") {
  auto a = forks(12);
  auto lang = language_of(a, 100);
  CHECK(lang.sequences.size() == 100);
  CHECK(lang.truncated);
  // the cap exactly equal to the size is not a truncation
  auto exact = language_of(forks(3), 8);
  CHECK(exact.sequences.size() == 8);
  CHECK_FALSE(exact.truncated);
}

TEST_CASE("duplicate paths are reported once") {
  StringAutomaton a;
  auto m1 = a.add_state(), m2 = a.add_state(), e = a.add_state();
  a.add_edge(0, L("a"), m1);
  a.add_edge(m1, L("b"), e);
  a.add_edge(0, L("ab"), m2);
  a.add_edge(m2, L(""), e);
  a.add_exit(e);
  auto lang = language_of(a, 10);
  CHECK(lang.sequences == std::vector<TokenSeq>{{L("ab")}});
}

TEST_CASE("normalization merges equivalent states and renumbers") {
  // two arms with identical futures collapse into a fork over one state
  StringAutomaton a;
  auto x = a.add_state(), y = a.add_state(), z1 = a.add_state(), z2 = a.add_state();
  a.add_edge(0, L("today"), x);
  a.add_edge(0, H("t"), y);
  a.add_edge(x, L("&"), z1);
  a.add_edge(y, L("&"), z2);
  a.add_exit(z1);
  a.add_exit(z2);
  auto n = a.normalized();
  CHECK(n.state_count() == 3);
  CHECK(n.edges().size() == 3);
  CHECK(n.exits() == std::set<StateId>{2});
  CHECK(as_set(language_of(n, 10)) == as_set(language_of(a, 10)));
}

TEST_CASE("normalization trims dead states") {
  StringAutomaton a;
  auto x = a.add_state(), dead = a.add_state(), unreachable = a.add_state();
  a.add_edge(0, L("a"), x);
  a.add_edge(0, L("b"), dead);
  a.add_edge(unreachable, L("c"), x);
  a.add_exit(x);
  auto n = a.normalized();
  CHECK(n.state_count() == 2);
  CHECK(n.edges().size() == 1);
}

TEST_CASE("cycles are detected") {
  StringAutomaton a;
  auto x = a.add_state();
  a.add_edge(0, L("a"), x);
  a.add_edge(x, L("b"), 0);
  a.add_exit(x);
  CHECK_FALSE(a.is_acyclic());
  CHECK_THROWS_AS(a.normalized(), std::logic_error);
}

TEST_CASE("serialization is bit-exact") {
  auto a = chain({L("a"), H("this.t")});
  CHECK(to_json(a) ==
        R"({"entry":0,"exits":[2],"edges":[{"from":0,"to":1,"lit":"a"},{"from":1,"to":2,"hole":"this.t"}]})");
  // a literal sorts before a hole on the same state pair
  StringAutomaton f;
  auto e = f.add_state();
  f.add_edge(0, H("z"), e);
  f.add_edge(0, L("z"), e);
  f.add_exit(e);
  CHECK(to_json(f) ==
        R"({"entry":0,"exits":[1],"edges":[{"from":0,"to":1,"lit":"z"},{"from":0,"to":1,"hole":"z"}]})");
}

TEST_CASE("from_json rejects malformed documents") {
  CHECK_THROWS_AS(from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(from_json(R"({"exits":[1],"edges":[]})"), std::invalid_argument);
  CHECK_THROWS_AS(from_json(R"({"entry":0,"exits":[1],"edges":[{"from":0,"to":1}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      from_json(R"({"entry":0,"exits":[1],"edges":[{"from":0,"to":1,"lit":"a"},{"from":1,"to":0,"lit":"b"}]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(from_json(R"({"entry":0,"exits":[-1],"edges":[]})"), std::invalid_argument);
}

TEST_CASE("property: normalization preserves the language and is idempotent") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    auto a = random_dag(rng);
    auto oracle = all_paths(a);
    auto n = a.normalized();
    CHECK(as_set(language_of(a, 100'000)) == oracle);
    CHECK(as_set(language_of(n, 100'000)) == oracle);
    CHECK(n.normalized() == n);
    CHECK(n.is_acyclic());
  }
}

TEST_CASE("property: json round trip reaches the same normal form") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 300; ++i) {
    auto a = random_dag(rng);
    auto text = to_json(a);
    auto back = from_json(text);
    CHECK(to_json(back) == text);
    CHECK(as_set(language_of(back, 100'000)) == as_set(language_of(a, 100'000)));
  }
}

TEST_CASE("property: languages come out in a stable order") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    auto a = random_dag(rng);
    auto first = language_of(a, 3);
    auto full = language_of(a, 100'000);
    REQUIRE(first.sequences.size() <= full.sequences.size());
    for (std::size_t k = 0; k < first.sequences.size(); ++k) CHECK(first.sequences[k] == full.sequences[k]);
    CHECK(first.truncated == (full.sequences.size() > 3));
  }
}
