#include "urlweaver/analysis.hpp"

#include <nlohmann/json.hpp>

#include "urlweaver/error.hpp"

namespace urlweaver::urlmodel {

std::string_view sink_kind_name(SinkKind k) {
  switch (k) {
    case SinkKind::Builder: return "builder";
    case SinkKind::Format: return "format";
    case SinkKind::Literal: return "literal";
  }
  return "builder";
}

ComponentSets ProgramAnalysis::components() const {
  ComponentSets sets;
  for (const auto& r : patterns) sets.add(r.pattern);
  return sets;
}

namespace {

struct SinkPatterns {
  StringSink sink;
  bool url = false;
  PatternSet patterns;  // filled iff url
};

// Sinks of a method with their enumerated patterns, so that coverage and
// reporting share a single enumeration per automaton.
std::vector<SinkPatterns> sinks_with_patterns(const sir::MethodIR& method, const AnalysisOptions& options) {
  const auto aliases = strana::analyze_aliases(method);
  auto automata = strana::build_string_automata(method, aliases, options.build);

  std::vector<SinkPatterns> out;
  ComponentSets covered;
  auto add = [&](SinkKind kind, sir::InstrId site, strana::StringAutomaton a) {
    SinkPatterns sp{{method.name, kind, site, std::move(a)}, false, {}};
    sp.url = may_be_url(sp.sink.automaton);
    if (sp.url) {
      sp.patterns = patterns_of(sp.sink.automaton, options.cap);
      for (const auto& p : sp.patterns.patterns) covered.add(p);
    }
    out.push_back(std::move(sp));
  };
  for (auto& [site, a] : automata.builders) add(SinkKind::Builder, site, std::move(a));
  for (auto& [site, a] : automata.formats) add(SinkKind::Format, site, std::move(a));
  for (const auto& [site, text] : url_literals(method)) {
    ComponentSets own;
    UrlPattern p;
    try {
      p = parse_pattern({EdgeLabel::lit(text)});
    } catch (const Unparseable&) {
      continue;
    }
    own.add(p);
    if (includes(covered, own)) continue;
    covered.merge(own);
    SinkPatterns sp{{method.name, SinkKind::Literal, site, strana::single_edge(EdgeLabel::lit(text))}, true, {}};
    sp.patterns.patterns.push_back(std::move(p));
    sp.patterns.sources.push_back({EdgeLabel::lit(text)});
    out.push_back(std::move(sp));
  }
  return out;
}

}  // namespace

std::vector<StringSink> collect_sinks(const sir::MethodIR& method, const AnalysisOptions& options) {
  std::vector<StringSink> sinks;
  for (auto& sp : sinks_with_patterns(method, options)) sinks.push_back(std::move(sp.sink));
  return sinks;
}

ProgramAnalysis analyze_program(const sir::ProgramIR& program, const AnalysisOptions& options) {
  ProgramAnalysis out;
  for (const auto& m : program.methods) {
    for (auto& sp : sinks_with_patterns(m, options)) {
      if (!sp.url) {
        ++out.filtered_out;
        continue;
      }
      out.discarded += sp.patterns.discarded;
      out.truncated += sp.patterns.truncated ? 1 : 0;
      for (auto& p : sp.patterns.patterns) out.patterns.push_back({m.name, sp.sink.site, sp.sink.kind, std::move(p)});
      out.sinks.push_back(std::move(sp.sink));
    }
  }
  return out;
}

std::string pattern_report_line(const PatternRecord& record) {
  nlohmann::ordered_json j;
  j["method"] = record.method;
  j["site"] = record.site;
  j["pattern"] = record.pattern.render();
  j["holes"] = record.pattern.holes();
  return j.dump();
}

}  // namespace urlweaver::urlmodel
