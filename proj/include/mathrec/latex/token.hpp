#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mathrec::latex {

// Byte offsets into the source string, half-open [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Span&) const = default;
};

enum class TokenKind {
  Command,      // \frac, \alpha — name stored without the backslash
  OpenBrace,    // {
  CloseBrace,   // }
  Superscript,  // ^
  Subscript,    // _
  Ampersand,    // &
  RowBreak,     // "\\"
  Symbol,       // single character, UTF-8 codepoint, or escaped char like \{
  BeginEnv,     // \begin{name} — name stored
  EndEnv,       // \end{name}
};

struct MathToken {
  TokenKind kind = TokenKind::Symbol;
  // Command/BeginEnv/EndEnv: the name; Symbol: the lexeme as written.
  std::string text;
  Span span;
  // True when whitespace or a comment was consumed immediately before
  // this token. Used to reconstruct text content and cleaned strings.
  bool space_before = false;

  // The token as it appears in source: "\frac", "{", "\begin{gather}", "x".
  std::string surface() const {
    switch (kind) {
      case TokenKind::Command: return "\\" + text;
      case TokenKind::OpenBrace: return "{";
      case TokenKind::CloseBrace: return "}";
      case TokenKind::Superscript: return "^";
      case TokenKind::Subscript: return "_";
      case TokenKind::Ampersand: return "&";
      case TokenKind::RowBreak: return "\\\\";
      case TokenKind::BeginEnv: return "\\begin{" + text + "}";
      case TokenKind::EndEnv: return "\\end{" + text + "}";
      case TokenKind::Symbol: return text;
    }
    return text;
  }

  bool operator==(const MathToken&) const = default;
};

using TokenStream = std::vector<MathToken>;

// Total: never fails. Comments (% to end of line) are stripped, runs of
// whitespace collapse into the next token's space_before flag, unknown
// bytes become Symbol tokens.
TokenStream lex(const std::string& input);

}  // namespace mathrec::latex
