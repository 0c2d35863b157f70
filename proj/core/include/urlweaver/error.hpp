#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace urlweaver {

/// Base of every error raised by the analysis core.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::string expected);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

class UndefinedRegister : public Error {
 public:
  UndefinedRegister(std::string reg, std::string method);

  const std::string& reg() const noexcept { return reg_; }
  const std::string& method() const noexcept { return method_; }

 private:
  std::string reg_;
  std::string method_;
};

class DuplicateMethod : public Error {
 public:
  explicit DuplicateMethod(std::string method);
  const std::string& method() const noexcept { return method_; }

 private:
  std::string method_;
};

class NestingTooDeep : public Error {
 public:
  explicit NestingTooDeep(std::size_t depth);
};

class UnknownBuilder : public Error {
 public:
  UnknownBuilder(std::string reg, std::string method);
  const std::string& reg() const noexcept { return reg_; }

 private:
  std::string reg_;
};

class FrontierExplosion : public Error {
 public:
  FrontierExplosion(std::size_t states, std::size_t limit);
};

class ArityMismatch : public Error {
 public:
  ArityMismatch(std::size_t specifiers, std::size_t args);
};

class UnknownSpecifier : public Error {
 public:
  UnknownSpecifier(char spec, std::size_t offset);
};

class Unparseable : public Error {
 public:
  Unparseable(std::size_t position, std::string reason);

  std::size_t position() const noexcept { return position_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t position_;
  std::string reason_;
};

}  // namespace urlweaver
