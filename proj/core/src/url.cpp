#include "urlweaver/url.hpp"

#include <cctype>
#include <set>
#include <string_view>

#include "urlweaver/error.hpp"
#include "urlweaver/strana.hpp"

namespace urlweaver::urlmodel {

std::string_view protocol_name(Protocol p) { return p == Protocol::Https ? "https" : "http"; }

std::string UrlPattern::render() const {
  std::string out(protocol_name(protocol));
  out += "://";
  out += urlweaver::render(domain);
  for (const auto& seg : path) {
    out += '/';
    out += urlweaver::render(seg);
  }
  for (std::size_t i = 0; i < query.size(); ++i) {
    out += i == 0 ? '?' : '&';
    out += urlweaver::render(query[i].key);
    out += '=';
    out += urlweaver::render(query[i].value);
  }
  return out;
}

std::vector<std::string> UrlPattern::holes() const {
  std::vector<std::string> out;
  auto collect = [&](const TokenSeq& seq) {
    for (const auto& t : seq)
      if (t.is_hole()) out.push_back(t.text);
  };
  collect(domain);
  for (const auto& seg : path) collect(seg);
  for (const auto& q : query) {
    collect(q.key);
    collect(q.value);
  }
  return out;
}

bool UrlPattern::has_holes() const {
  auto any = [](const TokenSeq& s) {
    for (const auto& t : s)
      if (t.is_hole()) return true;
    return false;
  };
  if (any(domain)) return true;
  for (const auto& seg : path)
    if (any(seg)) return true;
  for (const auto& q : query)
    if (any(q.key) || any(q.value)) return true;
  return false;
}

bool operator==(const UrlPattern& a, const UrlPattern& b) {
  if (a.protocol != b.protocol || !same_shape(a.domain, b.domain)) return false;
  if (a.path.size() != b.path.size() || a.query.size() != b.query.size()) return false;
  for (std::size_t i = 0; i < a.path.size(); ++i)
    if (!same_shape(a.path[i], b.path[i])) return false;
  for (std::size_t i = 0; i < a.query.size(); ++i)
    if (!same_shape(a.query[i].key, b.query[i].key) ||
        !same_shape(a.query[i].value, b.query[i].value))
      return false;
  return true;
}

namespace {

struct Atom {
  const EdgeLabel* hole = nullptr;  // non-null for a placeholder
  char c = 0;
  std::size_t pos = 0;  // offset in the rendered text

  bool is(char ch) const { return !hole && c == ch; }
};

bool is_unreserved(unsigned char c) {
  return std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~';
}
bool is_subdelim(unsigned char c) {
  return std::string_view("!$&'()*+,;=").find(static_cast<char>(c)) != std::string_view::npos;
}
bool is_pchar(unsigned char c) { return is_unreserved(c) || is_subdelim(c) || c == ':' || c == '@'; }

struct ParseFailure {
  std::size_t position = 0;
  std::string reason;
};

bool fail(ParseFailure* err, std::size_t position, std::string_view reason) {
  if (err) *err = {position, std::string(reason)};
  return false;
}

bool reject(ParseFailure* err, const Atom& a, std::string_view component) {
  if (!err) return false;
  auto c = static_cast<unsigned char>(a.c);
  if (c == '%') return fail(err, a.pos, "percent-encoding is not supported");
  if (c >= 0x80) return fail(err, a.pos, "non-ASCII characters are not supported");
  std::string shown = std::isprint(c) ? std::string(1, a.c) : "\\x" + std::to_string(c);
  return fail(err, a.pos, "invalid character '" + shown + "' in " + std::string(component));
}

void push(TokenSeq& seq, const Atom& a, bool lower = false) {
  if (a.hole) {
    seq.push_back(*a.hole);
    return;
  }
  char c = lower ? static_cast<char>(std::tolower(static_cast<unsigned char>(a.c))) : a.c;
  if (seq.empty() || !seq.back().is_lit()) seq.push_back(EdgeLabel::lit({}));
  seq.back().text.push_back(c);
}

// Fills `p`; on failure returns false and, if `err` is set, says why.
bool parse_into(const TokenSeq& tokens, UrlPattern& p, ParseFailure* err) {
  if (tokens.empty() || !tokens.front().is_lit() || !has_url_prefix(tokens.front().text))
    return fail(err, 0, "must start with http:// or https://");

  std::vector<Atom> atoms;
  std::size_t pos = 0;
  std::size_t chars = 0;
  for (const auto& t : tokens) chars += t.is_hole() ? 1 : t.text.size();
  atoms.reserve(chars);
  for (const auto& t : tokens) {
    if (t.is_hole()) {
      atoms.push_back(Atom{&t, 0, pos});
      pos += kHoleText.size();
    } else {
      for (char c : t.text) atoms.push_back(Atom{nullptr, c, pos++});
    }
  }

  const bool secure = std::tolower(static_cast<unsigned char>(tokens.front().text[4])) == 's';
  p.protocol = secure ? Protocol::Https : Protocol::Http;
  std::size_t i = secure ? 8 : 7;
  auto at_end = [&] { return i >= atoms.size(); };

  // authority
  const std::size_t auth_start = i;
  std::size_t colon = std::string::npos;
  bool port_hole = false;
  for (; !at_end() && !atoms[i].is('/') && !atoms[i].is('?') && !atoms[i].is('#'); ++i) {
    const Atom& a = atoms[i];
    if (a.hole) {
      if (colon != std::string::npos) port_hole = true;
      continue;
    }
    auto c = static_cast<unsigned char>(a.c);
    if (c == '@') return fail(err, a.pos, "userinfo in authority is not supported");
    if (c == '[' || c == ']') return fail(err, a.pos, "IPv6 literals are not supported");
    if (c == ':') {
      if (colon != std::string::npos) return fail(err, a.pos, "more than one ':' in authority");
      colon = i;
      continue;
    }
    if (!(std::isalnum(c) || c == '.' || c == '-')) return reject(err, a, "authority");
    if (colon != std::string::npos && !std::isdigit(c))
      return fail(err, a.pos, "port must be numeric");
  }
  if (i == auth_start) return fail(err, auth_start < atoms.size() ? atoms[auth_start].pos : pos,
                                         "empty authority");
  if (colon != std::string::npos) {
    if (colon == auth_start) return fail(err, atoms[colon].pos, "empty host before port");
    if (colon + 1 == i) return fail(err, atoms[colon].pos, "empty port");
    if (port_hole) return fail(err, atoms[colon].pos, "port must be numeric");
  }
  for (std::size_t k = auth_start; k < i; ++k) push(p.domain, atoms[k], true);

  // path
  if (!at_end() && atoms[i].is('/')) {
    p.path.emplace_back();
    for (++i; !at_end() && !atoms[i].is('?') && !atoms[i].is('#'); ++i) {
      const Atom& a = atoms[i];
      if (a.is('/')) {
        p.path.emplace_back();
        continue;
      }
      if (!a.hole && !is_pchar(static_cast<unsigned char>(a.c))) return reject(err, a, "path");
      push(p.path.back(), a);
    }
  }

  // query
  if (!at_end() && atoms[i].is('?')) {
    ++i;
    QueryPair cur;
    bool in_value = false, any = false;
    auto flush = [&] {
      if (any) p.query.push_back(std::move(cur));
      cur = QueryPair{};
      in_value = any = false;
    };
    for (; !at_end() && !atoms[i].is('#'); ++i) {
      const Atom& a = atoms[i];
      if (a.is('&')) {
        flush();
        continue;
      }
      any = true;
      if (a.is('=') && !in_value) {
        in_value = true;
        continue;
      }
      if (!a.hole) {
        auto c = static_cast<unsigned char>(a.c);
        if (!(is_pchar(c) || c == '/' || c == '?')) return reject(err, a, "query");
      }
      push(in_value ? cur.value : cur.key, a);
    }
    flush();
  }
  // anything left starts with '#': the fragment is dropped
  return true;
}

}  // namespace

UrlPattern parse_pattern(const TokenSeq& tokens) {
  UrlPattern p;
  ParseFailure f;
  if (!parse_into(tokens, p, &f)) throw Unparseable(f.position, f.reason);
  return p;
}

UrlPattern parse_pattern_text(std::string_view text) {
  TokenSeq seq;
  std::size_t start = 0;
  while (true) {
    std::size_t h = text.find(kHoleText, start);
    append_fused(seq, EdgeLabel::lit(std::string(text.substr(start, h - start))));
    if (h == std::string_view::npos) break;
    seq.push_back(EdgeLabel::hole(""));
    start = h + kHoleText.size();
  }
  return parse_pattern(seq);
}

namespace {

// Depth-first search over literal prefixes of at most 8 characters.
bool url_prefix_from(const std::vector<std::vector<const strana::Edge*>>& adj,
                     strana::StateId s, const std::string& acc) {
  static constexpr std::string_view kHttp = "http://", kHttps = "https://";
  for (const strana::Edge* e : adj[s]) {
    if (e->label.is_hole()) return true;
    std::string next = acc;
    for (char c : e->label.text) {
      next.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      if (next.size() >= kHttps.size()) break;
    }
    if (next.rfind(kHttp, 0) == 0 || next.rfind(kHttps, 0) == 0) return true;
    bool viable = kHttp.rfind(next, 0) == 0 || kHttps.rfind(next, 0) == 0;
    if (viable && url_prefix_from(adj, e->to, next)) return true;
  }
  return false;
}

}  // namespace

bool may_be_url(const strana::StringAutomaton& a) {
  return url_prefix_from(a.adjacency(), a.entry(), {});
}

std::vector<strana::StringAutomaton> filter_url_automata(
    const std::vector<strana::StringAutomaton>& automata) {
  std::vector<strana::StringAutomaton> kept;
  for (const auto& a : automata)
    if (may_be_url(a)) kept.push_back(a);
  return kept;
}

PatternSet patterns_of(const strana::StringAutomaton& a, std::size_t cap) {
  PatternSet out;
  auto lang = strana::language_of(a, cap);
  out.truncated = lang.truncated;
  for (auto& seq : lang.sequences) {
    UrlPattern p;
    if (!parse_into(seq, p, nullptr)) {
      ++out.discarded;
      continue;
    }
    out.patterns.push_back(std::move(p));
    out.sources.push_back(std::move(seq));
  }
  return out;
}

std::vector<std::pair<sir::InstrId, std::string>> url_literals(const sir::MethodIR& method) {
  std::vector<std::pair<sir::InstrId, std::string>> out;
  auto consider = [&](sir::InstrId id, const std::string& text) {
    if (has_url_prefix(text)) out.emplace_back(id, text);
  };
  sir::for_each_instruction(method.body, [&](const sir::Instruction& ins) {
    if (const auto* ap = std::get_if<sir::Append>(&ins.op)) {
      if (const auto* lit = std::get_if<sir::Literal>(&ap->value)) consider(ins.id, lit->text);
    } else if (const auto* fm = std::get_if<sir::Format>(&ins.op)) {
      try {
        for (const auto& piece : strana::split_format(fm->templ))
          if (const auto* text = std::get_if<std::string>(&piece)) consider(ins.id, *text);
      } catch (const UnknownSpecifier&) {
        consider(ins.id, fm->templ);
      }
      for (const auto& arg : fm->args)
        if (const auto* lit = std::get_if<sir::Literal>(&arg)) consider(ins.id, lit->text);
    }
  });
  return out;
}

ConstantSet extract_constants(const sir::ProgramIR& program) {
  ConstantSet out;
  for (const auto& m : program.methods) {
    for (auto& [id, text] : url_literals(m)) {
      try {
        out.constants.push_back({m.name, id, parse_pattern({EdgeLabel::lit(text)}), text});
      } catch (const Unparseable&) {
        ++out.discarded;
      }
    }
  }
  return out;
}

}  // namespace urlweaver::urlmodel
