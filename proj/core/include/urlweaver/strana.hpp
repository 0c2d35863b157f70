#pragma once

// Builder alias analysis and string automaton construction over a method's
// control-flow graph.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "urlweaver/automaton.hpp"
#include "urlweaver/sir.hpp"

namespace urlweaver::strana {

/// A builder allocation site is identified by the id of its NewBuilder.
using SiteId = sir::InstrId;
using SiteSet = std::set<SiteId>;

/// Registers that may hold a builder, and the sites they may point to.
/// Registers absent from the map hold no builder.
struct AliasState {
  std::map<std::string, SiteSet> points_to;

  const SiteSet& sites_of(const std::string& reg) const;
  void join(const AliasState& other);

  bool operator==(const AliasState&) const = default;
};

/// Alias state holding immediately before each non-structured instruction.
using AliasResult = std::unordered_map<sir::InstrId, AliasState>;

/// Forward may-alias fixpoint over the cfg, back edges included.
/// Throws UnknownBuilder when an append or tostring targets a register that
/// holds no builder.
AliasResult analyze_aliases(const sir::MethodIR& method);

enum class LoopSemantics {
  ZeroOrOne,  // skip the body, or run it once
  ExactlyOne,
};

struct BuildOptions {
  LoopSemantics loops = LoopSemantics::ZeroOrOne;
  std::size_t frontier_limit = 100'000;
};

/// Automata for every builder site and every format result of a method.
struct MethodAutomata {
  std::map<SiteId, StringAutomaton> builders;
  std::map<sir::InstrId, StringAutomaton> formats;
};

/// Single forward pass over the cfg in topological order. Loops are
/// traversed at most once; appends through an ambiguous register are
/// optional on each of its sites. A ToString value is inlined where it is
/// appended only if its definition dominates the use, otherwise the use
/// becomes the hole "reg:<name>". Exits of a site are its frontiers at every
/// ToString of it and at method exit. Results are normalized.
/// Throws NestingTooDeep, FrontierExplosion, ArityMismatch, UnknownSpecifier.
MethodAutomata build_string_automata(const sir::MethodIR& method, const AliasResult& aliases,
                                     const BuildOptions& options = {});

/// Builder-site automata only.
std::map<SiteId, StringAutomaton> build_automata(const sir::MethodIR& method,
                                                 const AliasResult& aliases,
                                                 const BuildOptions& options = {});

/// A piece of a format template: literal text, or the index of the argument
/// consumed by a %s, %d or %f specifier.
using FormatPiece = std::variant<std::string, std::size_t>;

/// Splits a template at its specifiers; "%%" is literal "%". Throws
/// UnknownSpecifier.
std::vector<FormatPiece> split_format(std::string_view templ);

/// Throws ArityMismatch or UnknownSpecifier.
std::vector<EdgeLabel> expand_format(std::string_view templ,
                                     const std::vector<sir::Operand>& args);

}  // namespace urlweaver::strana
