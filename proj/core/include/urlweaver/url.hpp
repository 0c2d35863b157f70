#pragma once

// URL patterns: URLs whose parts may be placeholders.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "urlweaver/automaton.hpp"
#include "urlweaver/sir.hpp"
#include "urlweaver/token.hpp"

namespace urlweaver::urlmodel {

enum class Protocol { Http, Https };

struct QueryPair {
  TokenSeq key;
  TokenSeq value;
};

/// Structured URL pattern. Token sequences are fused (no two adjacent
/// literals, no empty literal). An empty `path` is the empty path; "/" is a
/// single empty segment.
struct UrlPattern {
  Protocol protocol = Protocol::Http;
  TokenSeq domain;
  std::vector<TokenSeq> path;
  std::vector<QueryPair> query;

  /// Canonical text with every hole as "[ ]".
  std::string render() const;

  /// All hole descriptors in textual order.
  std::vector<std::string> holes() const;

  bool has_holes() const;

  /// Equality treats holes as interchangeable.
  friend bool operator==(const UrlPattern& a, const UrlPattern& b);
};

std::string_view protocol_name(Protocol p);

/// Parses a token sequence whose first token is a literal starting with
/// http:// or https://. Authority is [A-Za-z0-9.-]+ with an optional
/// ":port", or holes; path and query characters are checked against a fixed
/// set; "#..." is dropped. Holes stay whole within the component in which
/// they occur and are never treated as delimiters. Throws Unparseable.
UrlPattern parse_pattern(const TokenSeq& tokens);

/// Parses text in which every "[ ]" is a hole (with an empty descriptor).
UrlPattern parse_pattern_text(std::string_view text);

/// Keeps an automaton iff some path can start with an http(s):// literal
/// prefix or starts with a hole.
std::vector<strana::StringAutomaton> filter_url_automata(
    const std::vector<strana::StringAutomaton>& automata);
bool may_be_url(const strana::StringAutomaton& a);

struct PatternSet {
  std::vector<UrlPattern> patterns;
  std::vector<TokenSeq> sources;  // the sequence each pattern came from
  std::size_t discarded = 0;      // sequences that failed to parse
  bool truncated = false;
};

PatternSet patterns_of(const strana::StringAutomaton& a, std::size_t cap);

struct ExtractedConstant {
  std::string method;
  sir::InstrId site = 0;
  UrlPattern pattern;
  std::string literal;
};

struct ConstantSet {
  std::vector<ExtractedConstant> constants;
  std::size_t discarded = 0;
};

/// Every literal operand and format-template literal segment with an
/// http(s):// prefix, parsed on its own. No concatenation reasoning.
ConstantSet extract_constants(const sir::ProgramIR& program);

/// The candidate literals extract_constants looks at, with the id of the
/// instruction that holds them.
std::vector<std::pair<sir::InstrId, std::string>> url_literals(const sir::MethodIR& method);

}  // namespace urlweaver::urlmodel
