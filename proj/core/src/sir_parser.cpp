#include <cctype>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>

#include "urlweaver/error.hpp"
#include "urlweaver/sir.hpp"

namespace urlweaver::sir {
namespace {

enum class Tok {
  Ident,
  String,
  Field,  // @dotted.ident
  LParen,
  RParen,
  LBrace,
  RBrace,
  Equals,
  Comma,
  Star,
  Newline,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

const std::unordered_set<std::string_view>& keywords() {
  static const std::unordered_set<std::string_view> kw = {
      "method", "newbuilder", "append", "format", "copy", "tostring",
      "request", "if", "else", "loop", "call"};
  return kw;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        out.push_back({Tok::Newline, {}, line_, col_});
        advance();
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '"') {
        out.push_back(string_token());
      } else if (c == '@') {
        out.push_back(field_token());
      } else if (ident_start(c)) {
        std::size_t l = line_, co = col_, start = pos_;
        while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
        out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), l, co});
      } else {
        Tok k;
        switch (c) {
          case '(': k = Tok::LParen; break;
          case ')': k = Tok::RParen; break;
          case '{': k = Tok::LBrace; break;
          case '}': k = Tok::RBrace; break;
          case '=': k = Tok::Equals; break;
          case ',': k = Tok::Comma; break;
          case '*': k = Tok::Star; break;
          default:
            throw SyntaxError(line_, col_, "a statement, identifier or punctuation");
        }
        out.push_back({k, std::string(1, c), line_, col_});
        advance();
      }
    }
    out.push_back({Tok::End, {}, line_, col_});
    return out;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Token string_token() {
    Token t{Tok::String, {}, line_, col_};
    advance();  // opening quote
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n')
        throw SyntaxError(line_, col_, "closing '\"'");
      char c = src_[pos_];
      if (c == '"') {
        advance();
        return t;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) throw SyntaxError(line_, col_, "escape character");
        char e = src_[pos_];
        if (e == '"' || e == '\\') {
          t.text.push_back(e);
        } else if (e == 'n') {
          t.text.push_back('\n');
        } else {
          throw SyntaxError(line_, col_, "one of the escapes \\\" \\\\ \\n");
        }
        advance();
        continue;
      }
      t.text.push_back(c);
      advance();
    }
  }

  Token field_token() {
    Token t{Tok::Field, {}, line_, col_};
    advance();
    while (true) {
      if (pos_ >= src_.size() || !ident_start(src_[pos_]))
        throw SyntaxError(line_, col_, "identifier after '@' or '.'");
      std::size_t start = pos_;
      while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
      t.text.append(src_.substr(start, pos_ - start));
      if (pos_ < src_.size() && src_[pos_] == '.') {
        t.text.push_back('.');
        advance();
        continue;
      }
      return t;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "'" + t.text + "'";
    case Tok::String: return "string literal";
    case Tok::Field: return "'@" + t.text + "'";
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of input";
    default: return "'" + t.text + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ProgramIR program(std::string source_name) {
    ProgramIR prog;
    prog.source_name = std::move(source_name);
    std::set<std::string, std::less<>> names;
    skip_newlines();
    while (peek().kind != Tok::End) {
      MethodIR m = method();
      if (!names.insert(m.name).second) throw DuplicateMethod(m.name);
      check_registers(m);
      prog.methods.push_back(build_cfg(std::move(m)));
      skip_newlines();
    }
    return prog;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  void skip_newlines() {
    while (peek().kind == Tok::Newline) ++pos_;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    throw SyntaxError(t.line, t.column, expected + ", found " + describe(t));
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(what);
    return next();
  }

  bool at_keyword(std::string_view kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }

  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail("'" + std::string(kw) + "'");
    ++pos_;
  }

  std::string ident(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || keywords().count(t.text)) fail(what);
    ++pos_;
    return t.text;
  }

  MethodIR method() {
    MethodIR m;
    expect_keyword("method");
    m.name = ident("method name");
    expect(Tok::LParen, "'('");
    if (peek().kind != Tok::RParen) {
      m.params.push_back(ident("parameter name"));
      while (peek().kind == Tok::Comma) {
        ++pos_;
        m.params.push_back(ident("parameter name"));
      }
    }
    expect(Tok::RParen, "')'");
    skip_newlines();
    m.body = block(0);
    return m;
  }

  // '{' stmt* '}'
  Block block(std::size_t depth) {
    expect(Tok::LBrace, "'{'");
    Block out;
    while (true) {
      skip_newlines();
      if (peek().kind == Tok::RBrace) {
        ++pos_;
        return out;
      }
      out.push_back(statement(depth));
      // statements end at a newline or the closing brace
      if (peek().kind != Tok::Newline && peek().kind != Tok::RBrace) fail("end of statement");
    }
  }

  Instruction statement(std::size_t depth) {
    Instruction ins;
    if (at_keyword("append")) {
      ++pos_;
      Append a;
      a.builder = ident("builder register");
      a.value = operand();
      ins.op = std::move(a);
    } else if (at_keyword("request")) {
      ++pos_;
      ins.op = Request{ident("register")};
    } else if (at_keyword("if")) {
      ++pos_;
      if (depth + 1 > kMaxNesting) throw NestingTooDeep(depth + 1);
      expect(Tok::LParen, "'(*)'");
      expect(Tok::Star, "'*' (conditions are abstract)");
      expect(Tok::RParen, "')'");
      skip_newlines();
      If br;
      br.then_block = block(depth + 1);
      std::size_t save = pos_;
      skip_newlines();
      if (at_keyword("else")) {
        ++pos_;
        skip_newlines();
        br.else_block = block(depth + 1);
      } else {
        pos_ = save;
      }
      ins.op = std::move(br);
    } else if (at_keyword("loop")) {
      ++pos_;
      if (depth + 1 > kMaxNesting) throw NestingTooDeep(depth + 1);
      skip_newlines();
      ins.op = Loop{block(depth + 1)};
    } else {
      std::string dest = ident("a statement");
      expect(Tok::Equals, "'='");
      if (at_keyword("newbuilder")) {
        ++pos_;
        ins.op = NewBuilder{std::move(dest)};
      } else if (at_keyword("copy")) {
        ++pos_;
        ins.op = Copy{std::move(dest), ident("source register")};
      } else if (at_keyword("tostring")) {
        ++pos_;
        ins.op = ToString{std::move(dest), ident("builder register")};
      } else if (at_keyword("format")) {
        ++pos_;
        Format f;
        f.dest = std::move(dest);
        f.templ = expect(Tok::String, "format template string").text;
        if (f.templ.empty()) {
          --pos_;
          fail("non-empty format template");
        }
        while (peek().kind != Tok::Newline && peek().kind != Tok::RBrace &&
               peek().kind != Tok::End)
          f.args.push_back(operand());
        ins.op = std::move(f);
      } else {
        fail("'newbuilder', 'copy', 'tostring' or 'format'");
      }
    }
    return ins;
  }

  Operand operand() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::String:
        ++pos_;
        return Literal{t.text};
      case Tok::Field:
        ++pos_;
        return Opaque{t.text};
      case Tok::Ident:
        if (t.text == "call") {
          ++pos_;
          std::string fn = ident("callee name");
          expect(Tok::LParen, "'('");
          expect(Tok::RParen, "')'");
          return Opaque{fn + "()"};
        }
        return RegisterRef{ident("operand")};
      default:
        fail("operand");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Must-defined register sets over the structured body.
class DefinednessChecker {
 public:
  explicit DefinednessChecker(const MethodIR& m) : method_(m) {}

  void run() {
    std::set<std::string> defined(method_.params.begin(), method_.params.end());
    walk(method_.body, defined);
  }

 private:
  void use(const std::set<std::string>& defined, const std::string& reg) const {
    if (!defined.count(reg)) throw UndefinedRegister(reg, method_.name);
  }
  void use(const std::set<std::string>& defined, const Operand& op) const {
    if (const auto* r = std::get_if<RegisterRef>(&op)) use(defined, r->name);
  }

  void walk(const Block& block, std::set<std::string>& defined) const {
    for (const auto& ins : block) {
      std::visit(
          [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, NewBuilder>) {
              defined.insert(op.dest);
            } else if constexpr (std::is_same_v<T, Append>) {
              use(defined, op.builder);
              use(defined, op.value);
            } else if constexpr (std::is_same_v<T, Format>) {
              for (const auto& a : op.args) use(defined, a);
              defined.insert(op.dest);
            } else if constexpr (std::is_same_v<T, Copy>) {
              use(defined, op.src);
              defined.insert(op.dest);
            } else if constexpr (std::is_same_v<T, ToString>) {
              use(defined, op.builder);
              defined.insert(op.dest);
            } else if constexpr (std::is_same_v<T, Request>) {
              use(defined, op.reg);
            } else if constexpr (std::is_same_v<T, If>) {
              auto then_defs = defined;
              auto else_defs = defined;
              walk(op.then_block, then_defs);
              walk(op.else_block, else_defs);
              std::set<std::string> both;
              for (const auto& r : then_defs)
                if (else_defs.count(r)) both.insert(r);
              defined = std::move(both);
            } else if constexpr (std::is_same_v<T, Loop>) {
              auto body_defs = defined;
              walk(op.body, body_defs);
            }
          },
          ins.op);
    }
  }

  const MethodIR& method_;
};

}  // namespace

void check_registers(const MethodIR& method) { DefinednessChecker(method).run(); }

ProgramIR parse_program(std::string_view source, std::string source_name) {
  Parser p(Lexer(source).run());
  return p.program(std::move(source_name));
}

}  // namespace urlweaver::sir
