#pragma once

// Static-versus-dynamic comparison: per-level partition of component sets
// and matching of concrete URLs against patterns.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "urlweaver/components.hpp"
#include "urlweaver/url.hpp"

namespace urlweaver::compare {

enum class Level { Domains, PathPairs, KeyTriples, ValueTuples };
inline constexpr std::array<Level, 4> kLevels = {Level::Domains, Level::PathPairs,
                                                 Level::KeyTriples, Level::ValueTuples};
std::string_view level_name(Level l);

using Row = std::vector<std::string>;

/// One level of the partition of D ∪ S; each member list is sorted.
struct LevelComparison {
  std::vector<Row> d_only;
  std::vector<Row> both;
  std::vector<Row> s_only;
};

struct ComparisonReport {
  std::array<LevelComparison, 4> levels;

  const LevelComparison& at(Level l) const { return levels[static_cast<std::size_t>(l)]; }
};

/// `d` are the dynamically observed components, `s` the static ones.
ComparisonReport compare_components(const urlmodel::ComponentSets& d,
                                    const urlmodel::ComponentSets& s);

/// Rows of one level of a component set, sorted.
std::vector<Row> level_rows(const urlmodel::ComponentSets& sets, Level l);

struct MatchOptions {
  bool holes_may_be_empty = false;
};

/// Compiled pattern. Within a path segment a hole matches a run without '/'
/// or '?'; a hole forming the whole path matches any run without '?'; in a
/// query key or value a hole matches a run without '&' (and without '=' in
/// keys); in the domain a run without '/', '?' or ':'.
class PatternMatcher {
 public:
  explicit PatternMatcher(urlmodel::UrlPattern pattern, MatchOptions options = {});

  /// `url` must be hole-free. Extra query pairs in the URL are allowed;
  /// every pattern pair must be matched by some URL pair.
  bool matches(const urlmodel::UrlPattern& url) const;

  const urlmodel::UrlPattern& pattern() const noexcept { return pattern_; }

 private:
  urlmodel::UrlPattern pattern_;
  MatchOptions options_;
  bool whole_path_hole_ = false;
};

bool match_url(const urlmodel::UrlPattern& url, const urlmodel::UrlPattern& pattern,
               MatchOptions options = {});

/// Glob match of `tokens` against `text`; holes match runs free of
/// `excluded` characters, non-empty unless `allow_empty`.
bool match_tokens(const TokenSeq& tokens, std::string_view text, std::string_view excluded,
                  bool allow_empty);

/// `{"levels":[{"level":..,"d_only":n,"both":n,"s_only":n,"members":{..}}]}`
std::string report_json(const ComparisonReport& r);

}  // namespace urlweaver::compare
