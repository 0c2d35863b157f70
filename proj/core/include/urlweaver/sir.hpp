#pragma once

// String-construction IR: a small structured language of builder operations
// with abstract branches and loops, plus the per-method control-flow graph.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace urlweaver::sir {

/// Maximum depth of nested if/loop blocks accepted by the parser.
inline constexpr std::size_t kMaxNesting = 64;

struct Literal {
  std::string text;
  bool operator==(const Literal&) const = default;
};

/// A value the analysis cannot see into: a field read (`@this.time`) or a
/// call result (`call getCity()`). The descriptor is kept verbatim.
struct Opaque {
  std::string descriptor;
  bool operator==(const Opaque&) const = default;
};

struct RegisterRef {
  std::string name;
  bool operator==(const RegisterRef&) const = default;
};

using Operand = std::variant<Literal, Opaque, RegisterRef>;

using InstrId = std::uint32_t;

struct Instruction;
using Block = std::vector<Instruction>;

struct NewBuilder {
  std::string dest;
  bool operator==(const NewBuilder&) const = default;
};
struct Append {
  std::string builder;
  Operand value;
  bool operator==(const Append&) const = default;
};
struct Format {
  std::string dest;
  std::string templ;
  std::vector<Operand> args;
  bool operator==(const Format&) const = default;
};
struct Copy {
  std::string dest;
  std::string src;
  bool operator==(const Copy&) const = default;
};
struct ToString {
  std::string dest;
  std::string builder;
  bool operator==(const ToString&) const = default;
};
struct Request {
  std::string reg;
  bool operator==(const Request&) const = default;
};
/// Branch on an abstract condition; both arms are always considered.
struct If {
  Block then_block;
  Block else_block;
  bool operator==(const If&) const;
};
struct Loop {
  Block body;
  bool operator==(const Loop&) const;
};

struct Instruction {
  InstrId id = 0;  // preorder index within the method
  std::variant<NewBuilder, Append, Format, Copy, ToString, If, Loop, Request> op;

  bool operator==(const Instruction&) const = default;

  bool is_structured() const noexcept {
    return std::holds_alternative<If>(op) || std::holds_alternative<Loop>(op);
  }
};

inline bool If::operator==(const If& o) const {
  return then_block == o.then_block && else_block == o.else_block;
}
inline bool Loop::operator==(const Loop& o) const { return body == o.body; }

// ---------------------------------------------------------------------------
// Control-flow graph

using BlockId = std::uint32_t;

enum class EdgeKind : std::uint8_t {
  Normal,
  LoopSkip,  // loop head straight to loop exit (zero iterations)
  BackEdge,  // end of loop body back to its head; never followed by strana
};

struct CfgEdge {
  BlockId block;  // target for successor lists, source for predecessor lists
  EdgeKind kind = EdgeKind::Normal;
  bool operator==(const CfgEdge&) const = default;
};

/// Basic block holding copies of the non-structured instructions it runs.
struct BasicBlock {
  BlockId id = 0;
  std::vector<Instruction> instrs;
  std::vector<CfgEdge> succs;
  std::vector<CfgEdge> preds;
  bool operator==(const BasicBlock&) const = default;
};

/// Blocks are numbered so that every non-back edge goes from a lower to a
/// higher id; iterating `blocks` in order is a topological traversal.
struct Cfg {
  std::vector<BasicBlock> blocks;
  BlockId entry = 0;
  BlockId exit = 0;
  bool operator==(const Cfg&) const = default;
};

struct MethodIR {
  std::string name;
  std::vector<std::string> params;
  Block body;
  Cfg cfg;
  std::size_t instruction_count = 0;  // including if/loop instructions

  bool operator==(const MethodIR&) const = default;
};

struct ProgramIR {
  std::vector<MethodIR> methods;
  std::string source_name;

  bool operator==(const ProgramIR&) const = default;
};

/// Parses SIR text. Throws SyntaxError, UndefinedRegister, DuplicateMethod or
/// NestingTooDeep. Every returned method has its cfg populated.
ProgramIR parse_program(std::string_view source, std::string source_name = {});

/// Renumbers instruction ids in preorder and derives the control-flow graph.
MethodIR build_cfg(MethodIR method);

/// Renders a program in the canonical textual form accepted by parse_program.
std::string print_program(const ProgramIR& program);

std::size_t nesting_depth(const Block& block);

/// Checks that every register use is dominated by a definition. Throws
/// UndefinedRegister.
void check_registers(const MethodIR& method);

/// Visits every instruction of a block tree in preorder.
template <class F>
void for_each_instruction(const Block& block, F&& fn) {
  for (const auto& ins : block) {
    fn(ins);
    if (const auto* br = std::get_if<If>(&ins.op)) {
      for_each_instruction(br->then_block, fn);
      for_each_instruction(br->else_block, fn);
    } else if (const auto* lp = std::get_if<Loop>(&ins.op)) {
      for_each_instruction(lp->body, fn);
    }
  }
}

}  // namespace urlweaver::sir
