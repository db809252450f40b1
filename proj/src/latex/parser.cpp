#include <cassert>

#include "mathrec/latex/parser.hpp"

#include "nlohmann/json.hpp"

namespace mathrec::latex {

namespace {

// Terminators a sequence stops at (without consuming them).
struct StopSet {
  bool close_brace = false;
  bool ampersand = false;
  bool row_break = false;
  bool end_env = false;
  bool right_delim = false;
  bool close_bracket = false;  // Symbol "]"
};

class Parser {
public:
  Parser(std::span<const MathToken> tokens, ParseMode mode, const CommandTables& tables)
      : toks_(tokens), mode_(mode), tables_(tables) {}

  ParseResult run() {
    ParseResult result;
    auto atoms = parse_sequence(StopSet{});
    // Anything left is a stray close brace at top level, handled inside
    // parse_sequence; reaching here means we consumed everything.
    result.root = wrap_sequence(std::move(atoms));
    result.diagnostics = std::move(diags_);
    return result;
  }

private:
  std::span<const MathToken> toks_;
  std::size_t pos_ = 0;
  ParseMode mode_;
  const CommandTables& tables_;
  std::vector<Diagnostic> diags_;

  bool eof() const { return pos_ >= toks_.size(); }
  const MathToken& cur() const { return toks_[pos_]; }
  Span here() const {
    if (!eof()) return cur().span;
    if (!toks_.empty()) return Span{toks_.back().span.end, toks_.back().span.end};
    return Span{0, 0};
  }

  // In Strict mode throws; in Lenient mode records a repair diagnostic.
  void report(const std::string& code, const std::string& message, Span span) {
    if (mode_ == ParseMode::Strict) throw ParseError(code, message, span);
    diags_.push_back(Diagnostic{code, message, span});
  }

  static ExprNode wrap_sequence(std::vector<ExprNode> atoms) {
    if (atoms.size() == 1) return std::move(atoms.front());
    return seq(std::move(atoms));
  }

  bool stops_here(const StopSet& stop) const {
    if (eof()) return true;
    switch (cur().kind) {
      case TokenKind::CloseBrace: return stop.close_brace;
      case TokenKind::Ampersand: return stop.ampersand;
      case TokenKind::RowBreak: return stop.row_break;
      case TokenKind::EndEnv: return stop.end_env;
      case TokenKind::Command:
        return stop.right_delim && cur().text == "right";
      case TokenKind::Symbol:
        return stop.close_bracket && cur().text == "]";
      default: return false;
    }
  }

  std::vector<ExprNode> parse_sequence(const StopSet& stop) {
    std::vector<ExprNode> atoms;
    while (!stops_here(stop)) {
      const MathToken& t = cur();
      if (t.kind == TokenKind::Superscript || t.kind == TokenKind::Subscript) {
        attach_script(atoms, stop);
        continue;
      }
      if (t.kind == TokenKind::CloseBrace) {
        // Stray close brace (not a terminator in this scope).
        report("UnbalancedBrace", "unmatched '}'", t.span);
        ++pos_;  // Lenient: drop it
        continue;
      }
      if (t.kind == TokenKind::EndEnv) {
        report("UnclosedEnvironment", "\\end{" + t.text + "} without matching \\begin",
               t.span);
        ++pos_;  // Lenient: drop it
        continue;
      }
      if (t.kind == TokenKind::Command && t.text == "right") {
        report("UnbalancedBrace", "\\right without matching \\left", t.span);
        ++pos_;
        if (!eof() && is_delimiter_token(cur())) ++pos_;
        continue;
      }
      atoms.push_back(parse_primary(stop));
    }
    return atoms;
  }

  static bool is_delimiter_token(const MathToken& t) {
    return t.kind == TokenKind::Symbol || t.kind == TokenKind::Command;
  }

  void attach_script(std::vector<ExprNode>& atoms, const StopSet& stop) {
    const MathToken op = cur();
    const bool is_sup = op.kind == TokenKind::Superscript;
    ++pos_;
    ExprNode operand = parse_script_operand(op, stop);

    if (atoms.empty()) {
      report("DanglingScript", std::string("leading '") + (is_sup ? "^" : "_") +
                                   "' with no preceding atom", op.span);
      atoms.push_back(script(group({}), is_sup ? std::nullopt : std::make_optional(operand),
                             is_sup ? std::make_optional(operand) : std::nullopt));
      return;
    }
    ExprNode& last = atoms.back();
    if (!last.is<ScriptNode>()) {
      ExprNode base = std::move(last);
      last = script(std::move(base),
                    is_sup ? std::nullopt : std::make_optional(std::move(operand)),
                    is_sup ? std::make_optional(std::move(operand)) : std::nullopt);
      return;
    }
    auto& sc = last.as<ScriptNode>();
    auto& slot = is_sup ? sc.superscript : sc.subscript;
    if (slot.has_value()) {
      report("DanglingScript", std::string("duplicate ") + (is_sup ? "superscript" : "subscript") +
                                   " on one base", op.span);
      // Lenient keeps the last occurrence per slot.
    }
    slot = Box<ExprNode>(std::move(operand));
  }

  // Script operand: a braced group is unwrapped while it has exactly one
  // child, so `x^{2}` and `x^2` parse identically.
  ExprNode parse_script_operand(const MathToken& op, const StopSet& stop) {
    if (stops_here(stop) || eof()) {
      report("MissingArgument", std::string("'") + (op.kind == TokenKind::Superscript ? "^" : "_") +
                                    "' without operand", op.span);
      return group({});
    }
    ExprNode node = parse_primary(stop);
    while (node.is<GroupNode>() && node.as<GroupNode>().children.size() == 1) {
      ExprNode child = std::move(node.as<GroupNode>().children.front());
      node = std::move(child);
    }
    return node;
  }

  // One required command argument: `{...}` becomes the Group as-is, a single
  // unbraced atom is wrapped into a Group.
  ExprNode parse_argument(const std::string& owner, Span owner_span, const StopSet& stop) {
    if (stops_here(stop) || eof() || cur().kind == TokenKind::Superscript ||
        cur().kind == TokenKind::Subscript) {
      report("MissingArgument", "missing argument of \\" + owner, owner_span);
      return group({});
    }
    if (cur().kind == TokenKind::OpenBrace) return parse_group();
    return group({parse_primary(stop)});
  }

  // Optional leading [...] argument; content wrapped in a Group.
  std::optional<ExprNode> parse_optional_argument(const StopSet& outer) {
    if (eof() || cur().kind != TokenKind::Symbol || cur().text != "[") return std::nullopt;
    ++pos_;
    StopSet stop = outer;
    stop.close_bracket = true;
    auto items = parse_sequence(stop);
    if (!eof() && cur().kind == TokenKind::Symbol && cur().text == "]") {
      ++pos_;
    } else {
      report("UnbalancedBrace", "unterminated optional argument", here());
    }
    return group(std::move(items));
  }

  ExprNode parse_group() {
    assert(cur().kind == TokenKind::OpenBrace);
    Span open = cur().span;
    ++pos_;
    StopSet stop;
    stop.close_brace = true;
    auto children = parse_sequence(stop);
    if (!eof() && cur().kind == TokenKind::CloseBrace) {
      ++pos_;
    } else {
      report("UnbalancedBrace", "unclosed '{'", open);
    }
    return group(std::move(children));
  }

  ExprNode parse_primary(const StopSet& stop) {
    const MathToken& t = cur();
    switch (t.kind) {
      case TokenKind::OpenBrace:
        return parse_group();
      case TokenKind::Symbol:
        ++pos_;
        return sym(t.text);
      case TokenKind::Ampersand:
        ++pos_;
        return sym("&");
      case TokenKind::RowBreak:
        ++pos_;
        return sym("\\\\");
      case TokenKind::BeginEnv:
        return parse_environment();
      case TokenKind::Command:
        return parse_command(stop);
      default:
        // CloseBrace / EndEnv handled by caller; defensive fallthrough.
        ++pos_;
        return sym(t.surface());
    }
  }

  ExprNode parse_command(const StopSet& stop) {
    const MathToken t = cur();
    ++pos_;
    const std::string& name = t.text;

    if (name == "frac") {
      auto num = parse_argument(name, t.span, stop);
      auto den = parse_argument(name, t.span, stop);
      return frac(std::move(num), std::move(den));
    }
    if (name == "sqrt") {
      auto idx = parse_optional_argument(stop);
      auto rad = parse_argument(name, t.span, stop);
      return radical(std::move(idx), std::move(rad));
    }
    if (name == "left") return parse_delimited(t.span, stop);
    if (name == "text") return parse_text(t.span);

    if (!tables_.knows(name)) {
      // Unknown command: an arity-0 leaf. A following braced group parses as
      // an independent sibling.
      return sym("\\" + name);
    }
    int arity = tables_.arity_of(name);
    std::optional<ExprNode> opt;
    if (arity >= 1) opt = parse_optional_argument(stop);
    std::vector<ExprNode> args;
    args.reserve(static_cast<std::size_t>(arity));
    for (int k = 0; k < arity; ++k) args.push_back(parse_argument(name, t.span, stop));
    return command(name, std::move(args), std::move(opt));
  }

  ExprNode parse_delimited(Span left_span, const StopSet& outer) {
    std::string left = ".";
    if (!eof() && is_delimiter_token(cur())) {
      left = cur().surface();
      ++pos_;
    } else {
      report("MissingArgument", "\\left without delimiter", left_span);
    }
    StopSet stop = outer;
    stop.right_delim = true;
    auto body = parse_sequence(stop);
    std::string right = ".";
    if (!eof() && cur().kind == TokenKind::Command && cur().text == "right") {
      ++pos_;
      if (!eof() && is_delimiter_token(cur())) {
        right = cur().surface();
        ++pos_;
      } else {
        report("MissingArgument", "\\right without delimiter", here());
      }
    } else {
      report("UnbalancedBrace", "\\left without matching \\right", left_span);
    }
    return delimited(std::move(left), wrap_sequence(std::move(body)), std::move(right));
  }

  // \text{...}: content captured lexically (any tokens, balanced braces) and
  // normalized to single spaces.
  ExprNode parse_text(Span cmd_span) {
    if (eof()) {
      report("MissingArgument", "\\text without argument", cmd_span);
      return text("");
    }
    if (cur().kind != TokenKind::OpenBrace) {
      // TeX-style single-token argument.
      std::string content = cur().surface();
      ++pos_;
      return text(std::move(content));
    }
    Span open = cur().span;
    ++pos_;
    std::string content;
    int depth = 0;
    bool closed = false;
    while (!eof()) {
      const MathToken& t = cur();
      if (t.kind == TokenKind::CloseBrace && depth == 0) {
        ++pos_;
        closed = true;
        break;
      }
      if (t.kind == TokenKind::OpenBrace) ++depth;
      if (t.kind == TokenKind::CloseBrace) --depth;
      if (t.space_before && !content.empty()) content += ' ';
      content += t.surface();
      ++pos_;
    }
    if (!closed) report("UnbalancedBrace", "unclosed '{' in \\text", open);
    return text(std::move(content));
  }

  ExprNode parse_environment() {
    const MathToken begin = cur();
    ++pos_;
    std::vector<RowNode> rows;
    std::vector<ExprNode> cells;
    StopSet stop;
    stop.ampersand = true;
    stop.row_break = true;
    stop.end_env = true;

    auto flush_cell = [&](std::vector<ExprNode> atoms) {
      cells.push_back(wrap_sequence(std::move(atoms)));
    };
    auto flush_row = [&]() {
      rows.push_back(RowNode{std::move(cells)});
      cells.clear();
    };

    bool done = false;
    while (!done) {
      auto atoms = parse_sequence(stop);
      if (eof()) {
        report("UnclosedEnvironment", "\\begin{" + begin.text + "} never closed", begin.span);
        flush_cell(std::move(atoms));
        flush_row();
        break;
      }
      const MathToken& t = cur();
      switch (t.kind) {
        case TokenKind::Ampersand:
          ++pos_;
          flush_cell(std::move(atoms));
          break;
        case TokenKind::RowBreak:
          ++pos_;
          flush_cell(std::move(atoms));
          flush_row();
          break;
        case TokenKind::EndEnv: {
          if (t.text != begin.text) {
            report("UnclosedEnvironment",
                   "\\begin{" + begin.text + "} closed by \\end{" + t.text + "}", t.span);
          }
          ++pos_;
          flush_cell(std::move(atoms));
          flush_row();
          done = true;
          break;
        }
        default:
          // parse_sequence only stops on the cases above or EOF.
          assert(false);
          done = true;
          break;
      }
    }
    // Drop a trailing empty row produced by a trailing row break.
    auto row_is_empty = [](const RowNode& r) {
      return r.cells.size() == 1 && r.cells[0].is<SequenceNode>() &&
             r.cells[0].as<SequenceNode>().children.empty();
    };
    if (rows.size() > 1 && row_is_empty(rows.back())) rows.pop_back();
    return environment(begin.text, std::move(rows));
  }
};

}  // namespace

ParseResult parse(std::span<const MathToken> tokens, ParseMode mode,
                  const CommandTables& tables) {
  return Parser(tokens, mode, tables).run();
}

ParseResult parse(const std::string& input, ParseMode mode, const CommandTables& tables) {
  auto tokens = lex(input);
  return parse(std::span<const MathToken>(tokens), mode, tables);
}

std::string diagnostics_to_json(const std::vector<Diagnostic>& diags) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : diags) {
    arr.push_back({{"code", d.code},
                   {"message", d.message},
                   {"span", {d.span.begin, d.span.end}}});
  }
  return arr.dump();
}

}  // namespace mathrec::latex
