#include "urlweaver/compare.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

namespace urlweaver::compare {

std::string_view level_name(Level l) {
  switch (l) {
    case Level::Domains: return "domains";
    case Level::PathPairs: return "path_pairs";
    case Level::KeyTriples: return "key_triples";
    case Level::ValueTuples: return "value_tuples";
  }
  return "domains";
}

namespace {

template <class Set>
std::vector<Row> rows_of(const Set& set) {
  std::vector<Row> rows;
  rows.reserve(set.size());
  for (const auto& item : set) {
    if constexpr (std::is_same_v<std::decay_t<decltype(item)>, std::string>)
      rows.push_back(Row{item});
    else
      rows.emplace_back(item.begin(), item.end());
  }
  return rows;
}

LevelComparison partition(const std::vector<Row>& d, const std::vector<Row>& s) {
  LevelComparison out;
  std::set_difference(d.begin(), d.end(), s.begin(), s.end(), std::back_inserter(out.d_only));
  std::set_intersection(d.begin(), d.end(), s.begin(), s.end(), std::back_inserter(out.both));
  std::set_difference(s.begin(), s.end(), d.begin(), d.end(), std::back_inserter(out.s_only));
  return out;
}

}  // namespace

std::vector<Row> level_rows(const urlmodel::ComponentSets& sets, Level l) {
  switch (l) {
    case Level::Domains: return rows_of(sets.domains);
    case Level::PathPairs: return rows_of(sets.path_pairs);
    case Level::KeyTriples: return rows_of(sets.key_triples);
    case Level::ValueTuples: return rows_of(sets.value_tuples);
  }
  return {};
}

ComparisonReport compare_components(const urlmodel::ComponentSets& d,
                                    const urlmodel::ComponentSets& s) {
  ComparisonReport r;
  for (Level l : kLevels) r.levels[static_cast<std::size_t>(l)] = partition(level_rows(d, l), level_rows(s, l));
  return r;
}

bool match_tokens(const TokenSeq& tokens, std::string_view text, std::string_view excluded,
                  bool allow_empty) {
  // reachable[i]: text[0..i) consumed by the tokens seen so far
  std::vector<char> reachable(text.size() + 1, 0), next(text.size() + 1, 0);
  reachable[0] = 1;
  for (const auto& t : tokens) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (!reachable[i]) continue;
      if (t.is_lit()) {
        if (text.substr(i, t.text.size()) == t.text) next[i + t.text.size()] = 1;
        continue;
      }
      if (allow_empty) next[i] = 1;
      for (std::size_t j = i; j < text.size() && excluded.find(text[j]) == std::string_view::npos; ++j)
        next[j + 1] = 1;
    }
    reachable.swap(next);
  }
  return reachable[text.size()] != 0;
}

PatternMatcher::PatternMatcher(urlmodel::UrlPattern pattern, MatchOptions options)
    : pattern_(std::move(pattern)), options_(options) {
  whole_path_hole_ = pattern_.path.size() == 1 && pattern_.path[0].size() == 1 &&
                     pattern_.path[0][0].is_hole();
}

bool PatternMatcher::matches(const urlmodel::UrlPattern& url) const {
  const bool empty_ok = options_.holes_may_be_empty;
  if (url.protocol != pattern_.protocol) return false;
  if (!match_tokens(pattern_.domain, render(url.domain), "/?:", empty_ok)) return false;

  if (whole_path_hole_) {
    std::string path;
    for (const auto& seg : url.path) path += "/" + render(seg);
    if (path.empty()) return false;
    if (!match_tokens(pattern_.path[0], std::string_view(path).substr(1), "?", empty_ok)) return false;
  } else {
    if (url.path.size() != pattern_.path.size()) return false;
    for (std::size_t i = 0; i < url.path.size(); ++i)
      if (!match_tokens(pattern_.path[i], render(url.path[i]), "/?", empty_ok)) return false;
  }

  for (const auto& want : pattern_.query) {
    bool found = std::any_of(url.query.begin(), url.query.end(), [&](const urlmodel::QueryPair& have) {
      return match_tokens(want.key, render(have.key), "&=", empty_ok) &&
             match_tokens(want.value, render(have.value), "&", empty_ok);
    });
    if (!found) return false;
  }
  return true;
}

bool match_url(const urlmodel::UrlPattern& url, const urlmodel::UrlPattern& pattern,
               MatchOptions options) {
  return PatternMatcher(pattern, options).matches(url);
}

std::string report_json(const ComparisonReport& r) {
  nlohmann::ordered_json j;
  auto& levels = j["levels"] = nlohmann::ordered_json::array();
  for (Level l : kLevels) {
    const auto& lc = r.at(l);
    nlohmann::ordered_json e;
    e["level"] = level_name(l);
    e["d_only"] = lc.d_only.size();
    e["both"] = lc.both.size();
    e["s_only"] = lc.s_only.size();
    e["members"] = {{"d_only", lc.d_only}, {"both", lc.both}, {"s_only", lc.s_only}};
    levels.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

}  // namespace urlweaver::compare
