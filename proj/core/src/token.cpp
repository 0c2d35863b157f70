#include "urlweaver/token.hpp"

#include <cctype>

namespace urlweaver {

void append_fused(TokenSeq& seq, const EdgeLabel& label) {
  if (label.is_lit()) {
    if (label.text.empty()) return;
    if (!seq.empty() && seq.back().is_lit()) {
      seq.back().text += label.text;
      return;
    }
  }
  seq.push_back(label);
}

TokenSeq fused(const TokenSeq& seq) {
  TokenSeq out;
  out.reserve(seq.size());
  for (const auto& t : seq) append_fused(out, t);
  return out;
}

std::string render(const TokenSeq& seq) {
  std::string out;
  for (const auto& t : seq) out += t.is_hole() ? std::string(kHoleText) : t.text;
  return out;
}

std::string render_verbose(const TokenSeq& seq) {
  std::string out;
  for (const auto& t : seq) out += t.is_hole() ? "[" + t.text + "]" : t.text;
  return out;
}

bool same_shape(const TokenSeq& a, const TokenSeq& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].kind != b[i].kind) return false;
    if (a[i].is_lit() && a[i].text != b[i].text) return false;
  }
  return true;
}

namespace {
bool iprefix(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(text[i])) != prefix[i]) return false;
  return true;
}
}  // namespace

bool has_url_prefix(std::string_view text) {
  return iprefix(text, "http://") || iprefix(text, "https://");
}

}  // namespace urlweaver
