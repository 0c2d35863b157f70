#pragma once

// End-to-end extraction of URL patterns from a parsed program.

#include <cstddef>
#include <string>
#include <vector>

#include "urlweaver/components.hpp"
#include "urlweaver/strana.hpp"
#include "urlweaver/url.hpp"

namespace urlweaver::urlmodel {

enum class SinkKind { Builder, Format, Literal };

std::string_view sink_kind_name(SinkKind k);

/// One string-producing point of a method and the automaton of its values.
struct StringSink {
  std::string method;
  SinkKind kind = SinkKind::Builder;
  sir::InstrId site = 0;
  strana::StringAutomaton automaton;
};

struct PatternRecord {
  std::string method;
  sir::InstrId site = 0;
  SinkKind kind = SinkKind::Builder;
  UrlPattern pattern;
};

struct AnalysisOptions {
  strana::BuildOptions build;
  std::size_t cap = 10'000;
};

struct ProgramAnalysis {
  std::vector<StringSink> sinks;  // sinks that passed the URL filter
  std::vector<PatternRecord> patterns;
  std::size_t filtered_out = 0;  // automata dropped as clearly not URLs
  std::size_t discarded = 0;     // enumerated sequences that failed to parse
  std::size_t truncated = 0;     // automata whose language hit the cap

  ComponentSets components() const;
};

/// Builder and format automata of a method, followed by single-edge
/// automata for every http(s) literal whose components the builder and
/// format patterns of the method do not already cover.
std::vector<StringSink> collect_sinks(const sir::MethodIR& method, const AnalysisOptions& options);

/// Runs alias analysis, automaton construction, URL filtering and pattern
/// enumeration over every method.
ProgramAnalysis analyze_program(const sir::ProgramIR& program, const AnalysisOptions& options = {});

/// `{"method":..,"site":..,"pattern":..,"holes":[..]}`
std::string pattern_report_line(const PatternRecord& record);

}  // namespace urlweaver::urlmodel
