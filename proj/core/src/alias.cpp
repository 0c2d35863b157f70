#include <deque>

#include "urlweaver/error.hpp"
#include "urlweaver/strana.hpp"

namespace urlweaver::strana {

const SiteSet& AliasState::sites_of(const std::string& reg) const {
  static const SiteSet kEmpty;
  auto it = points_to.find(reg);
  return it == points_to.end() ? kEmpty : it->second;
}

void AliasState::join(const AliasState& other) {
  for (const auto& [reg, sites] : other.points_to) points_to[reg].insert(sites.begin(), sites.end());
}

namespace {

void transfer(const sir::Instruction& ins, AliasState& st) {
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, sir::NewBuilder>) {
          st.points_to[op.dest] = SiteSet{ins.id};
        } else if constexpr (std::is_same_v<T, sir::Copy>) {
          auto it = st.points_to.find(op.src);
          if (it != st.points_to.end()) {
            SiteSet sites = it->second;
            st.points_to[op.dest] = std::move(sites);
          } else {
            st.points_to.erase(op.dest);
          }
        } else if constexpr (std::is_same_v<T, sir::ToString> || std::is_same_v<T, sir::Format>) {
          st.points_to.erase(op.dest);
        }
      },
      ins.op);
}

void check_use(const sir::Instruction& ins, const AliasState& st, const std::string& method) {
  const std::string* target = nullptr;
  if (const auto* ap = std::get_if<sir::Append>(&ins.op))
    target = &ap->builder;
  else if (const auto* ts = std::get_if<sir::ToString>(&ins.op))
    target = &ts->builder;
  if (target && st.sites_of(*target).empty()) throw UnknownBuilder(*target, method);
}

}  // namespace

AliasResult analyze_aliases(const sir::MethodIR& method) {
  const auto& blocks = method.cfg.blocks;
  std::vector<AliasState> in(blocks.size()), out(blocks.size());
  std::vector<char> queued(blocks.size(), 1);
  std::deque<sir::BlockId> work;
  for (const auto& b : blocks) work.push_back(b.id);

  while (!work.empty()) {
    sir::BlockId id = work.front();
    work.pop_front();
    queued[id] = 0;
    AliasState st;
    for (const auto& p : blocks[id].preds) st.join(out[p.block]);
    in[id] = st;
    for (const auto& ins : blocks[id].instrs) transfer(ins, st);
    // every block starts queued, so an unchanged out-state needs no propagation
    if (st == out[id]) continue;
    out[id] = std::move(st);
    for (const auto& s : blocks[id].succs)
      if (!queued[s.block]) queued[s.block] = 1, work.push_back(s.block);
  }

  AliasResult result;
  for (const auto& b : blocks) {
    AliasState st = in[b.id];
    for (const auto& ins : b.instrs) {
      check_use(ins, st, method.name);
      result.emplace(ins.id, st);
      transfer(ins, st);
    }
  }
  return result;
}

}  // namespace urlweaver::strana
