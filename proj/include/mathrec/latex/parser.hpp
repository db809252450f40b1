#pragma once

#include <span>
#include <string>
#include <vector>

#include "mathrec/common/error.hpp"
#include "mathrec/latex/ast.hpp"
#include "mathrec/latex/tables.hpp"
#include "mathrec/latex/token.hpp"

namespace mathrec::latex {

enum class ParseMode { Strict, Lenient };

// One repair performed by the Lenient parser. The code is the error the
// Strict parser would have raised at the same place.
struct Diagnostic {
  std::string code;     // UnbalancedBrace | UnclosedEnvironment | MissingArgument | DanglingScript
  std::string message;
  Span span;

  bool operator==(const Diagnostic&) const = default;
};

class ParseError : public DomainError {
public:
  ParseError(std::string code, const std::string& message, Span span)
      : DomainError(std::move(code), message), span_(span) {}
  Span span() const { return span_; }

private:
  Span span_;
};

struct ParseResult {
  ExprNode root;
  std::vector<Diagnostic> diagnostics;  // empty iff Strict parse would succeed
};

// Strict mode throws ParseError; Lenient mode always succeeds and records
// every repair as a diagnostic.
ParseResult parse(std::span<const MathToken> tokens, ParseMode mode,
                  const CommandTables& tables = CommandTables::defaults());

ParseResult parse(const std::string& input, ParseMode mode,
                  const CommandTables& tables = CommandTables::defaults());

std::string diagnostics_to_json(const std::vector<Diagnostic>& diags);

}  // namespace mathrec::latex
