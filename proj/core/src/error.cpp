#include "urlweaver/error.hpp"

#include <utility>

namespace urlweaver {

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::string expected)
    : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) +
            ": expected " + expected),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

UndefinedRegister::UndefinedRegister(std::string reg, std::string method)
    : Error("register '" + reg + "' is not defined on every path in method '" + method + "'"),
      reg_(std::move(reg)),
      method_(std::move(method)) {}

DuplicateMethod::DuplicateMethod(std::string method)
    : Error("duplicate method '" + method + "'"), method_(std::move(method)) {}

NestingTooDeep::NestingTooDeep(std::size_t depth)
    : Error("block nesting depth " + std::to_string(depth) + " exceeds the limit") {}

UnknownBuilder::UnknownBuilder(std::string reg, std::string method)
    : Error("register '" + reg + "' in method '" + method + "' does not refer to a builder"),
      reg_(std::move(reg)) {}

FrontierExplosion::FrontierExplosion(std::size_t states, std::size_t limit)
    : Error("automaton frontier reached " + std::to_string(states) + " states (limit " +
            std::to_string(limit) + ")") {}

ArityMismatch::ArityMismatch(std::size_t specifiers, std::size_t args)
    : Error("format template has " + std::to_string(specifiers) + " specifiers but " +
            std::to_string(args) + " arguments") {}

UnknownSpecifier::UnknownSpecifier(char spec, std::size_t offset)
    : Error((spec == '\0' ? std::string("dangling '%'")
                           : std::string("unknown format specifier '%") + spec + "'") +
            " at offset " + std::to_string(offset)) {}

Unparseable::Unparseable(std::size_t position, std::string reason)
    : Error("unparseable URL at " + std::to_string(position) + ": " + reason),
      position_(position),
      reason_(std::move(reason)) {}

}  // namespace urlweaver
