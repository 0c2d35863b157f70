#include <algorithm>
#include <sstream>

#include "urlweaver/sir.hpp"

namespace urlweaver::sir {
namespace {

void renumber(Block& block, InstrId& next) {
  for (auto& ins : block) {
    ins.id = next++;
    if (auto* br = std::get_if<If>(&ins.op)) {
      renumber(br->then_block, next);
      renumber(br->else_block, next);
    } else if (auto* lp = std::get_if<Loop>(&ins.op)) {
      renumber(lp->body, next);
    }
  }
}

class CfgBuilder {
 public:
  Cfg run(const Block& body) {
    BlockId entry = fresh();
    BlockId last = lower(body, entry);
    cfg_.entry = entry;
    cfg_.exit = last;
    return std::move(cfg_);
  }

 private:
  BlockId fresh() {
    auto id = static_cast<BlockId>(cfg_.blocks.size());
    cfg_.blocks.push_back(BasicBlock{id, {}, {}, {}});
    return id;
  }

  void link(BlockId from, BlockId to, EdgeKind kind = EdgeKind::Normal) {
    cfg_.blocks[from].succs.push_back({to, kind});
    cfg_.blocks[to].preds.push_back({from, kind});
  }

  // Lowers `block` starting in `cur`; returns the block control ends in.
  BlockId lower(const Block& block, BlockId cur) {
    for (const auto& ins : block) {
      if (const auto* br = std::get_if<If>(&ins.op)) {
        BlockId then_b = fresh();
        link(cur, then_b);
        BlockId then_end = lower(br->then_block, then_b);
        BlockId else_b = fresh();
        link(cur, else_b);
        BlockId else_end = lower(br->else_block, else_b);
        BlockId join = fresh();
        link(then_end, join);
        link(else_end, join);
        cur = join;
      } else if (const auto* lp = std::get_if<Loop>(&ins.op)) {
        BlockId head = fresh();
        link(cur, head);
        BlockId body = fresh();
        link(head, body);
        BlockId body_end = lower(lp->body, body);
        BlockId exit = fresh();
        link(head, exit, EdgeKind::LoopSkip);
        link(body_end, exit);
        link(body_end, head, EdgeKind::BackEdge);
        cur = exit;
      } else {
        cfg_.blocks[cur].instrs.push_back(ins);
      }
    }
    return cur;
  }

  Cfg cfg_;
};

void escape_into(std::ostream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    if (c == '"' || c == '\\')
      os << '\\' << c;
    else if (c == '\n')
      os << "\\n";
    else
      os << c;
  }
  os << '"';
}

void print_operand(std::ostream& os, const Operand& op) {
  if (const auto* lit = std::get_if<Literal>(&op)) {
    escape_into(os, lit->text);
  } else if (const auto* opq = std::get_if<Opaque>(&op)) {
    const auto& d = opq->descriptor;
    if (d.size() > 2 && d.compare(d.size() - 2, 2, "()") == 0)
      os << "call " << d;
    else
      os << '@' << d;
  } else {
    os << std::get<RegisterRef>(op).name;
  }
}

void print_block(std::ostream& os, const Block& block, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (const auto& ins : block) {
    os << pad;
    std::visit(
        [&](const auto& op) {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, NewBuilder>) {
            os << op.dest << " = newbuilder\n";
          } else if constexpr (std::is_same_v<T, Append>) {
            os << "append " << op.builder << ' ';
            print_operand(os, op.value);
            os << '\n';
          } else if constexpr (std::is_same_v<T, Format>) {
            os << op.dest << " = format ";
            escape_into(os, op.templ);
            for (const auto& a : op.args) {
              os << ' ';
              print_operand(os, a);
            }
            os << '\n';
          } else if constexpr (std::is_same_v<T, Copy>) {
            os << op.dest << " = copy " << op.src << '\n';
          } else if constexpr (std::is_same_v<T, ToString>) {
            os << op.dest << " = tostring " << op.builder << '\n';
          } else if constexpr (std::is_same_v<T, Request>) {
            os << "request " << op.reg << '\n';
          } else if constexpr (std::is_same_v<T, If>) {
            os << "if (*) {\n";
            print_block(os, op.then_block, indent + 1);
            os << pad << "}";
            if (!op.else_block.empty()) {
              os << " else {\n";
              print_block(os, op.else_block, indent + 1);
              os << pad << "}";
            }
            os << '\n';
          } else if constexpr (std::is_same_v<T, Loop>) {
            os << "loop {\n";
            print_block(os, op.body, indent + 1);
            os << pad << "}\n";
          }
        },
        ins.op);
  }
}

}  // namespace

MethodIR build_cfg(MethodIR method) {
  InstrId next = 0;
  renumber(method.body, next);
  method.instruction_count = next;
  method.cfg = CfgBuilder{}.run(method.body);
  return method;
}

std::size_t nesting_depth(const Block& block) {
  std::size_t deepest = 0;
  for (const auto& ins : block) {
    if (const auto* br = std::get_if<If>(&ins.op)) {
      deepest = std::max({deepest, 1 + nesting_depth(br->then_block),
                          1 + nesting_depth(br->else_block)});
    } else if (const auto* lp = std::get_if<Loop>(&ins.op)) {
      deepest = std::max(deepest, 1 + nesting_depth(lp->body));
    }
  }
  return deepest;
}

std::string print_program(const ProgramIR& program) {
  std::ostringstream os;
  for (std::size_t i = 0; i < program.methods.size(); ++i) {
    const auto& m = program.methods[i];
    if (i) os << '\n';
    os << "method " << m.name << '(';
    for (std::size_t p = 0; p < m.params.size(); ++p) os << (p ? ", " : "") << m.params[p];
    os << ") {\n";
    print_block(os, m.body, 1);
    os << "}\n";
  }
  return os.str();
}

}  // namespace urlweaver::sir
