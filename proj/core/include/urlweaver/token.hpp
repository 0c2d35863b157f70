#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace urlweaver {

/// Rendering of every placeholder in patterns and component keys.
inline constexpr std::string_view kHoleText = "[ ]";

/// Edge label of a string automaton and token of a pattern: either literal
/// text or a placeholder carrying the descriptor of the value it stands for.
struct EdgeLabel {
  enum class Kind : std::uint8_t { Lit, Hole };

  Kind kind = Kind::Lit;
  std::string text;  // literal text, or hole descriptor

  static EdgeLabel lit(std::string s) { return {Kind::Lit, std::move(s)}; }
  static EdgeLabel hole(std::string d) { return {Kind::Hole, std::move(d)}; }

  bool is_hole() const noexcept { return kind == Kind::Hole; }
  bool is_lit() const noexcept { return kind == Kind::Lit; }

  auto operator<=>(const EdgeLabel&) const = default;
  bool operator==(const EdgeLabel&) const = default;
};

using TokenSeq = std::vector<EdgeLabel>;

/// Appends a label, merging it into a trailing literal when both are literal.
/// Empty literals are dropped.
void append_fused(TokenSeq& seq, const EdgeLabel& label);

TokenSeq fused(const TokenSeq& seq);

/// Holes render as "[ ]".
std::string render(const TokenSeq& seq);

/// Descriptor-sensitive rendering used in diagnostics: holes render as "[desc]".
std::string render_verbose(const TokenSeq& seq);

/// Token equality that treats every hole as the same value.
bool same_shape(const TokenSeq& a, const TokenSeq& b);

/// Case-insensitive "http://" or "https://" prefix test.
bool has_url_prefix(std::string_view text);

}  // namespace urlweaver
