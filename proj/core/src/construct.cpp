#include <algorithm>
#include <memory>

#include "urlweaver/error.hpp"
#include "urlweaver/strana.hpp"

namespace urlweaver::strana {

std::vector<FormatPiece> split_format(std::string_view templ) {
  std::vector<FormatPiece> pieces;
  std::string lit;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < templ.size(); ++i) {
    if (templ[i] != '%') {
      lit.push_back(templ[i]);
      continue;
    }
    if (i + 1 == templ.size()) throw UnknownSpecifier('\0', i);
    char spec = templ[++i];
    if (spec == '%') {
      lit.push_back('%');
    } else if (spec == 's' || spec == 'd' || spec == 'f') {
      if (!lit.empty()) pieces.emplace_back(std::move(lit));
      lit.clear();
      pieces.emplace_back(arg++);
    } else {
      throw UnknownSpecifier(spec, i - 1);
    }
  }
  if (!lit.empty()) pieces.emplace_back(std::move(lit));
  return pieces;
}

namespace {

std::size_t count_args(const std::vector<FormatPiece>& pieces) {
  return static_cast<std::size_t>(std::count_if(pieces.begin(), pieces.end(), [](const auto& p) {
    return std::holds_alternative<std::size_t>(p);
  }));
}

EdgeLabel label_of(const sir::Operand& op) {
  if (const auto* lit = std::get_if<sir::Literal>(&op)) return EdgeLabel::lit(lit->text);
  if (const auto* opq = std::get_if<sir::Opaque>(&op)) return EdgeLabel::hole(opq->descriptor);
  return EdgeLabel::hole("reg:" + std::get<sir::RegisterRef>(op).name);
}

}  // namespace

std::vector<EdgeLabel> expand_format(std::string_view templ,
                                     const std::vector<sir::Operand>& args) {
  const auto pieces = split_format(templ);
  if (count_args(pieces) != args.size()) throw ArityMismatch(count_args(pieces), args.size());
  std::vector<EdgeLabel> out;
  for (const auto& p : pieces) {
    EdgeLabel l = std::holds_alternative<std::string>(p) ? EdgeLabel::lit(std::get<std::string>(p))
                                                         : label_of(args[std::get<std::size_t>(p)]);
    if (l.is_lit() && l.text.empty()) continue;
    out.push_back(std::move(l));
  }
  return out;
}

namespace {

using Frontier = std::vector<StateId>;  // sorted, unique

Frontier unite(const Frontier& a, const Frontier& b) {
  Frontier out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

struct StringValue {
  sir::InstrId def = 0;
  std::shared_ptr<const StringAutomaton> value;
};

struct FlowState {
  std::map<SiteId, Frontier> frontiers;
  std::map<std::string, StringValue> strings;
};

// Extends `fr` in `a` by one labeled step.
Frontier step(StringAutomaton& a, const Frontier& fr, const EdgeLabel& label) {
  if (label.is_lit() && label.text.empty()) return fr;
  StateId n = a.add_state();
  for (StateId f : fr) a.add_edge(f, label, n);
  return {n};
}

// Concatenates a copy of `frag` after `fr`; frag's entry has no in-edges.
Frontier splice(StringAutomaton& a, const Frontier& fr, const StringAutomaton& frag) {
  std::vector<StateId> copy(frag.state_count(), 0);
  for (StateId s = 0; s < frag.state_count(); ++s)
    if (s != frag.entry()) copy[s] = a.add_state();
  for (const auto& e : frag.edges()) {
    if (e.from == frag.entry()) {
      for (StateId f : fr) a.add_edge(f, e.label, copy[e.to]);
    } else {
      a.add_edge(copy[e.from], e.label, copy[e.to]);
    }
  }
  Frontier out;
  for (StateId x : frag.exits()) {
    if (x == frag.entry())
      out = unite(out, fr);
    else
      out = unite(out, Frontier{copy[x]});
  }
  return out;
}

class Constructor {
 public:
  Constructor(const sir::MethodIR& method, const AliasResult& aliases, const BuildOptions& opts)
      : method_(method), aliases_(aliases), opts_(opts) {}

  MethodAutomata run() {
    if (nesting_depth(method_.body) > sir::kMaxNesting)
      throw NestingTooDeep(nesting_depth(method_.body));
    const auto& blocks = method_.cfg.blocks;
    std::vector<FlowState> out(blocks.size());
    for (const auto& b : blocks) {
      FlowState st = entry_state(b, out);
      for (const auto& ins : b.instrs) execute(ins, st);
      out[b.id] = std::move(st);
    }
    for (const auto& [site, fr] : out[method_.cfg.exit].frontiers) record_exits(site, fr);

    MethodAutomata result;
    for (auto& [site, a] : sites_) {
      a.set_exits(std::set<StateId>(exits_[site].begin(), exits_[site].end()));
      result.builders.emplace(site, a.normalized());
    }
    result.formats = std::move(formats_);
    return result;
  }

 private:
  bool followed(const sir::CfgEdge& e) const {
    if (e.kind == sir::EdgeKind::BackEdge) return false;
    if (e.kind == sir::EdgeKind::LoopSkip) return opts_.loops == LoopSemantics::ZeroOrOne;
    return true;
  }

  FlowState entry_state(const sir::BasicBlock& b, const std::vector<FlowState>& out) const {
    FlowState st;
    bool first = true;
    for (const auto& p : b.preds) {
      if (!followed(p)) continue;
      const FlowState& pred = out[p.block];
      for (const auto& [site, fr] : pred.frontiers) st.frontiers[site] = unite(st.frontiers[site], fr);
      if (first) {
        st.strings = pred.strings;
        first = false;
        continue;
      }
      // a string binding survives a join only if every arm carries the same definition
      for (auto it = st.strings.begin(); it != st.strings.end();) {
        auto other = pred.strings.find(it->first);
        if (other == pred.strings.end() || other->second.def != it->second.def)
          it = st.strings.erase(it);
        else
          ++it;
      }
    }
    return st;
  }

  StringAutomaton& site(SiteId id) { return sites_[id]; }

  void record_exits(SiteId id, const Frontier& fr) { exits_[id] = unite(exits_[id], fr); }

  // Applies one operand to a frontier of `a`.
  Frontier apply(StringAutomaton& a, const Frontier& fr, const sir::Operand& op,
                 const FlowState& st) const {
    if (const auto* reg = std::get_if<sir::RegisterRef>(&op)) {
      auto it = st.strings.find(reg->name);
      if (it != st.strings.end()) return splice(a, fr, *it->second.value);
    }
    return step(a, fr, label_of(op));
  }

  void check_frontier(const FlowState& st) const {
    std::size_t live = 0;
    for (const auto& [s, fr] : st.frontiers) live += fr.size();
    if (live > opts_.frontier_limit) throw FrontierExplosion(live, opts_.frontier_limit);
  }

  const SiteSet& sites_at(const sir::Instruction& ins, const std::string& reg) const {
    auto it = aliases_.find(ins.id);
    if (it == aliases_.end() || it->second.sites_of(reg).empty())
      throw UnknownBuilder(reg, method_.name);
    return it->second.sites_of(reg);
  }

  StringAutomaton snapshot(const SiteSet& sites, const FlowState& st) {
    StringAutomaton u;
    for (SiteId s : sites) {
      auto fr_it = st.frontiers.find(s);
      if (fr_it == st.frontiers.end() || fr_it->second.empty()) continue;
      StringAutomaton part = site(s);
      part.set_exits(std::set<StateId>(fr_it->second.begin(), fr_it->second.end()));
      part = part.normalized();
      Frontier exits = splice(u, Frontier{u.entry()}, part);
      for (StateId x : exits) u.add_exit(x);
    }
    return u.normalized();
  }

  void execute(const sir::Instruction& ins, FlowState& st) {
    std::visit(
        [&](const auto& op) {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, sir::NewBuilder>) {
            st.strings.erase(op.dest);
            st.frontiers[ins.id] = Frontier{site(ins.id).entry()};
          } else if constexpr (std::is_same_v<T, sir::Append>) {
            const SiteSet& sites = sites_at(ins, op.builder);
            const bool weak = sites.size() > 1;
            for (SiteId s : sites) {
              auto& fr = st.frontiers[s];
              if (fr.empty()) continue;
              Frontier next = apply(site(s), fr, op.value, st);
              fr = weak ? unite(next, fr) : std::move(next);
            }
            check_frontier(st);
          } else if constexpr (std::is_same_v<T, sir::ToString>) {
            const SiteSet& sites = sites_at(ins, op.builder);
            for (SiteId s : sites)
              if (auto it = st.frontiers.find(s); it != st.frontiers.end())
                record_exits(s, it->second);
            st.strings[op.dest] =
                StringValue{ins.id, std::make_shared<const StringAutomaton>(snapshot(sites, st))};
          } else if constexpr (std::is_same_v<T, sir::Copy>) {
            auto it = st.strings.find(op.src);
            if (it != st.strings.end()) {
              StringValue v = it->second;
              st.strings[op.dest] = std::move(v);
            } else {
              st.strings.erase(op.dest);
            }
          } else if constexpr (std::is_same_v<T, sir::Format>) {
            const auto pieces = split_format(op.templ);
            if (count_args(pieces) != op.args.size())
              throw ArityMismatch(count_args(pieces), op.args.size());
            StringAutomaton f;
            Frontier fr{f.entry()};
            for (const auto& p : pieces) {
              if (const auto* text = std::get_if<std::string>(&p))
                fr = step(f, fr, EdgeLabel::lit(*text));
              else
                fr = apply(f, fr, op.args[std::get<std::size_t>(p)], st);
            }
            f.set_exits(std::set<StateId>(fr.begin(), fr.end()));
            auto value = std::make_shared<const StringAutomaton>(f.normalized());
            formats_[ins.id] = *value;
            st.strings[op.dest] = StringValue{ins.id, std::move(value)};
          }
        },
        ins.op);
  }

  const sir::MethodIR& method_;
  const AliasResult& aliases_;
  const BuildOptions& opts_;
  std::map<SiteId, StringAutomaton> sites_;
  std::map<SiteId, Frontier> exits_;
  std::map<sir::InstrId, StringAutomaton> formats_;
};

}  // namespace

MethodAutomata build_string_automata(const sir::MethodIR& method, const AliasResult& aliases,
                                     const BuildOptions& options) {
  return Constructor(method, aliases, options).run();
}

std::map<SiteId, StringAutomaton> build_automata(const sir::MethodIR& method,
                                                 const AliasResult& aliases,
                                                 const BuildOptions& options) {
  return build_string_automata(method, aliases, options).builders;
}

}  // namespace urlweaver::strana
