#include <cctype>

#include "mathrec/latex/token.hpp"

namespace mathrec::latex {

namespace {

bool is_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_env_name_char(char c) {
  return is_letter(c) || (c >= '0' && c <= '9') || c == '*';
}

// Length of the UTF-8 sequence starting at s[i]; 1 for invalid lead bytes.
std::size_t codepoint_len(const std::string& s, std::size_t i) {
  unsigned char b = static_cast<unsigned char>(s[i]);
  std::size_t n = 1;
  if ((b & 0xE0) == 0xC0) n = 2;
  else if ((b & 0xF0) == 0xE0) n = 3;
  else if ((b & 0xF8) == 0xF0) n = 4;
  if (i + n > s.size()) return 1;
  for (std::size_t k = 1; k < n; ++k) {
    if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 1;
  }
  return n;
}

}  // namespace

TokenStream lex(const std::string& input) {
  TokenStream out;
  std::size_t i = 0;
  const std::size_t n = input.size();
  bool pending_space = false;

  auto push = [&](TokenKind kind, std::string text, std::size_t begin, std::size_t end) {
    MathToken tok;
    tok.kind = kind;
    tok.text = std::move(text);
    tok.span = Span{begin, end};
    tok.space_before = pending_space && !out.empty();
    pending_space = false;
    out.push_back(std::move(tok));
  };

  while (i < n) {
    char c = input[i];
    if (c == '%') {
      while (i < n && input[i] != '\n') ++i;
      pending_space = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      pending_space = true;
      continue;
    }
    switch (c) {
      case '{': push(TokenKind::OpenBrace, "{", i, i + 1); ++i; continue;
      case '}': push(TokenKind::CloseBrace, "}", i, i + 1); ++i; continue;
      case '^': push(TokenKind::Superscript, "^", i, i + 1); ++i; continue;
      case '_': push(TokenKind::Subscript, "_", i, i + 1); ++i; continue;
      case '&': push(TokenKind::Ampersand, "&", i, i + 1); ++i; continue;
      default: break;
    }
    if (c == '\\') {
      if (i + 1 >= n) {
        push(TokenKind::Symbol, "\\", i, i + 1);
        ++i;
        continue;
      }
      char next = input[i + 1];
      if (next == '\\') {
        push(TokenKind::RowBreak, "\\\\", i, i + 2);
        i += 2;
        continue;
      }
      if (!is_letter(next)) {
        // Escaped single character: \{ \} \, \% \& ...
        push(TokenKind::Symbol, input.substr(i, 2), i, i + 2);
        i += 2;
        continue;
      }
      std::size_t j = i + 1;
      while (j < n && is_letter(input[j])) ++j;
      std::string name = input.substr(i + 1, j - i - 1);
      if (name == "begin" || name == "end") {
        std::size_t k = j;
        while (k < n && std::isspace(static_cast<unsigned char>(input[k]))) ++k;
        if (k < n && input[k] == '{') {
          std::size_t m = k + 1;
          while (m < n && is_env_name_char(input[m])) ++m;
          if (m < n && m > k + 1 && input[m] == '}') {
            push(name == "begin" ? TokenKind::BeginEnv : TokenKind::EndEnv,
                 input.substr(k + 1, m - k - 1), i, m + 1);
            i = m + 1;
            continue;
          }
        }
      }
      push(TokenKind::Command, std::move(name), i, j);
      i = j;
      continue;
    }
    std::size_t len = codepoint_len(input, i);
    push(TokenKind::Symbol, input.substr(i, len), i, i + len);
    i += len;
  }
  return out;
}

}  // namespace mathrec::latex
