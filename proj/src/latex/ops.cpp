#include <algorithm>

#include "mathrec/latex/ops.hpp"

#include "mathrec/common/error.hpp"
#include "nlohmann/json.hpp"

namespace mathrec::latex {

namespace {

bool is_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Appends chunks, inserting a guard space when the output ends in a command
// word and the next chunk starts with a letter (so `\sum x` never fuses into
// `\sumx` on re-lexing).
class Emitter {
public:
  void put(const std::string& chunk) {
    if (chunk.empty()) return;
    if (needs_guard() && is_letter(chunk.front())) out_ += ' ';
    out_ += chunk;
  }
  std::string take() { return std::move(out_); }

private:
  bool needs_guard() const {
    if (out_.empty() || !is_letter(out_.back())) return false;
    std::size_t i = out_.size();
    while (i > 0 && is_letter(out_[i - 1])) --i;
    if (i == 0 || out_[i - 1] != '\\') return false;
    // An even run of backslashes before the word means the backslash belongs
    // to a row break (`\\`), not a command.
    std::size_t slashes = 0;
    while (i > 0 && out_[i - 1] == '\\') { --i; ++slashes; }
    return slashes % 2 == 1;
  }

  std::string out_;
};

void render_node(const ExprNode& n, Emitter& e);

void render_children(const std::vector<ExprNode>& children, Emitter& e) {
  for (const auto& c : children) render_node(c, e);
}

// `{...}` where a Group contributes its children (the braces stand for the
// group itself).
void render_braced(const ExprNode& n, Emitter& e) {
  e.put("{");
  if (n.is<GroupNode>()) {
    render_children(n.as<GroupNode>().children, e);
  } else {
    render_node(n, e);
  }
  e.put("}");
}

void render_spliced(const ExprNode& n, Emitter& e) {
  if (n.is<SequenceNode>()) {
    render_children(n.as<SequenceNode>().children, e);
  } else {
    render_node(n, e);
  }
}

void render_node(const ExprNode& n, Emitter& e) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SymbolNode>) {
          e.put(v.lexeme);
        } else if constexpr (std::is_same_v<T, CommandNode>) {
          e.put("\\" + v.name);
          if (v.opt) {
            e.put("[");
            if ((**v.opt).template is<GroupNode>()) {
              render_children((**v.opt).template as<GroupNode>().children, e);
            } else {
              render_node(**v.opt, e);
            }
            e.put("]");
          }
          for (const auto& a : v.args) render_braced(a, e);
        } else if constexpr (std::is_same_v<T, GroupNode>) {
          e.put("{");
          render_children(v.children, e);
          e.put("}");
        } else if constexpr (std::is_same_v<T, FractionNode>) {
          e.put("\\frac");
          render_braced(*v.numerator, e);
          render_braced(*v.denominator, e);
        } else if constexpr (std::is_same_v<T, RadicalNode>) {
          e.put("\\sqrt");
          if (v.index) {
            e.put("[");
            if ((**v.index).template is<GroupNode>()) {
              render_children((**v.index).template as<GroupNode>().children, e);
            } else {
              render_node(**v.index, e);
            }
            e.put("]");
          }
          render_braced(*v.radicand, e);
        } else if constexpr (std::is_same_v<T, ScriptNode>) {
          render_node(*v.base, e);
          if (v.subscript) {
            e.put("_");
            render_braced(**v.subscript, e);
          }
          if (v.superscript) {
            e.put("^");
            render_braced(**v.superscript, e);
          }
        } else if constexpr (std::is_same_v<T, EnvironmentNode>) {
          e.put("\\begin{" + v.name + "}");
          for (std::size_t r = 0; r < v.rows.size(); ++r) {
            if (r > 0) e.put("\\\\");
            const auto& cells = v.rows[r].cells;
            for (std::size_t c = 0; c < cells.size(); ++c) {
              if (c > 0) e.put("&");
              render_spliced(cells[c], e);
            }
          }
          e.put("\\end{" + v.name + "}");
        } else if constexpr (std::is_same_v<T, TextNode>) {
          e.put("\\text{" + v.content + "}");
        } else if constexpr (std::is_same_v<T, DelimitedNode>) {
          e.put("\\left");
          e.put(v.left);
          render_spliced(*v.body, e);
          e.put("\\right");
          e.put(v.right);
        } else if constexpr (std::is_same_v<T, SequenceNode>) {
          render_children(v.children, e);
        }
      },
      n.value);
}

}  // namespace

std::string render(const ExprNode& tree) {
  Emitter e;
  render_node(tree, e);
  return e.take();
}

// ---------------------------------------------------------------------------
// normalize

namespace {

std::optional<ExprNode> norm(const ExprNode& n, bool is_arg, const CommandTables& t);

// Argument positions keep their Group wrapper; a dropped argument becomes an
// empty group.
ExprNode norm_arg(const ExprNode& n, const CommandTables& t) {
  auto r = norm(n, /*is_arg=*/true, t);
  return r ? std::move(*r) : group({});
}

ExprNode norm_slot(const ExprNode& n, const CommandTables& t) {
  auto r = norm(n, /*is_arg=*/false, t);
  return r ? std::move(*r) : group({});
}

ExprNode norm_cell(const ExprNode& n, const CommandTables& t) {
  auto r = norm(n, /*is_arg=*/false, t);
  return r ? std::move(*r) : seq({});
}

std::vector<ExprNode> norm_list(const std::vector<ExprNode>& children, const CommandTables& t) {
  std::vector<ExprNode> out;
  out.reserve(children.size());
  for (const auto& c : children) {
    if (auto r = norm(c, /*is_arg=*/false, t)) out.push_back(std::move(*r));
  }
  return out;
}

std::optional<ExprNode> norm(const ExprNode& n, bool is_arg, const CommandTables& t) {
  return std::visit(
      [&](const auto& v) -> std::optional<ExprNode> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SymbolNode>) {
          if (t.drops.count(v.lexeme)) return std::nullopt;
          auto it = t.synonyms.find(v.lexeme);
          return sym(it == t.synonyms.end() ? v.lexeme : it->second);
        } else if constexpr (std::is_same_v<T, CommandNode>) {
          std::string surface = "\\" + v.name;
          if (t.drops.count(surface)) return std::nullopt;
          std::string name = v.name;
          if (auto it = t.synonyms.find(surface); it != t.synonyms.end()) {
            name = it->second.substr(1);
          }
          std::vector<ExprNode> args;
          args.reserve(v.args.size());
          for (const auto& a : v.args) args.push_back(norm_arg(a, t));
          if (name == "frac" && args.size() == 2 && !v.opt) {
            return frac(std::move(args[0]), std::move(args[1]));
          }
          std::optional<ExprNode> opt;
          if (v.opt) opt = norm_arg(**v.opt, t);
          return command(std::move(name), std::move(args), std::move(opt));
        } else if constexpr (std::is_same_v<T, GroupNode>) {
          auto children = norm_list(v.children, t);
          if (!is_arg && children.size() == 1) return std::move(children.front());
          return group(std::move(children));
        } else if constexpr (std::is_same_v<T, SequenceNode>) {
          auto children = norm_list(v.children, t);
          if (children.size() == 1) return std::move(children.front());
          return seq(std::move(children));
        } else if constexpr (std::is_same_v<T, FractionNode>) {
          return frac(norm_arg(*v.numerator, t), norm_arg(*v.denominator, t));
        } else if constexpr (std::is_same_v<T, RadicalNode>) {
          std::optional<ExprNode> idx;
          if (v.index) idx = norm_arg(**v.index, t);
          return radical(std::move(idx), norm_arg(*v.radicand, t));
        } else if constexpr (std::is_same_v<T, ScriptNode>) {
          std::optional<ExprNode> sub, sup;
          if (v.subscript) sub = norm_slot(**v.subscript, t);
          if (v.superscript) sup = norm_slot(**v.superscript, t);
          return script(norm_slot(*v.base, t), std::move(sub), std::move(sup));
        } else if constexpr (std::is_same_v<T, EnvironmentNode>) {
          std::vector<RowNode> rows;
          rows.reserve(v.rows.size());
          for (const auto& row : v.rows) {
            RowNode r;
            r.cells.reserve(row.cells.size());
            for (const auto& cell : row.cells) r.cells.push_back(norm_cell(cell, t));
            rows.push_back(std::move(r));
          }
          return environment(v.name, std::move(rows));
        } else if constexpr (std::is_same_v<T, TextNode>) {
          return ExprNode(v);
        } else if constexpr (std::is_same_v<T, DelimitedNode>) {
          auto body = norm(*v.body, /*is_arg=*/false, t);
          return delimited(v.left, body ? std::move(*body) : seq({}), v.right);
        }
      },
      n.value);
}

}  // namespace

ExprNode normalize(const ExprNode& tree, const CommandTables& tables) {
  auto r = norm(tree, /*is_arg=*/false, tables);
  return r ? std::move(*r) : seq({});
}

// ---------------------------------------------------------------------------
// depth / count_lines

int depth(const ExprNode& tree) {
  return std::visit(
      [&](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        auto over = [](const std::vector<ExprNode>& children) {
          int d = -1;
          for (const auto& c : children) d = std::max(d, depth(c));
          return d;  // -1 when empty
        };
        if constexpr (std::is_same_v<T, SymbolNode> || std::is_same_v<T, TextNode>) {
          return 0;
        } else if constexpr (std::is_same_v<T, GroupNode> || std::is_same_v<T, SequenceNode>) {
          return v.children.empty() ? 0 : 1 + over(v.children);
        } else if constexpr (std::is_same_v<T, CommandNode>) {
          int d = -1;
          for (const auto& a : v.args) d = std::max(d, depth(a));
          if (v.opt) d = std::max(d, depth(**v.opt));
          return d < 0 ? 0 : 1 + d;
        } else if constexpr (std::is_same_v<T, FractionNode>) {
          return 1 + std::max(depth(*v.numerator), depth(*v.denominator));
        } else if constexpr (std::is_same_v<T, RadicalNode>) {
          int d = depth(*v.radicand);
          if (v.index) d = std::max(d, depth(**v.index));
          return 1 + d;
        } else if constexpr (std::is_same_v<T, ScriptNode>) {
          int d = depth(*v.base);
          if (v.subscript) d = std::max(d, depth(**v.subscript));
          if (v.superscript) d = std::max(d, depth(**v.superscript));
          return 1 + d;
        } else if constexpr (std::is_same_v<T, EnvironmentNode>) {
          int d = 0;
          for (const auto& row : v.rows)
            for (const auto& cell : row.cells) d = std::max(d, depth(cell));
          return 2 + d;  // environment -> row -> cell
        } else if constexpr (std::is_same_v<T, DelimitedNode>) {
          return 1 + depth(*v.body);
        }
      },
      tree.value);
}

namespace {

int lines_walk(const ExprNode& n, const CommandTables& t) {
  return std::visit(
      [&](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EnvironmentNode>) {
          // Outermost environment decides; nested content is opaque.
          if (t.is_multiline_env(v.name)) return static_cast<int>(v.rows.size());
          return 1;
        } else if constexpr (std::is_same_v<T, SymbolNode> || std::is_same_v<T, TextNode>) {
          return 1;
        } else if constexpr (std::is_same_v<T, GroupNode> || std::is_same_v<T, SequenceNode>) {
          int m = 1;
          for (const auto& c : v.children) m = std::max(m, lines_walk(c, t));
          return m;
        } else if constexpr (std::is_same_v<T, CommandNode>) {
          int m = 1;
          for (const auto& a : v.args) m = std::max(m, lines_walk(a, t));
          if (v.opt) m = std::max(m, lines_walk(**v.opt, t));
          return m;
        } else if constexpr (std::is_same_v<T, FractionNode>) {
          return std::max(lines_walk(*v.numerator, t), lines_walk(*v.denominator, t));
        } else if constexpr (std::is_same_v<T, RadicalNode>) {
          int m = lines_walk(*v.radicand, t);
          if (v.index) m = std::max(m, lines_walk(**v.index, t));
          return m;
        } else if constexpr (std::is_same_v<T, ScriptNode>) {
          int m = lines_walk(*v.base, t);
          if (v.subscript) m = std::max(m, lines_walk(**v.subscript, t));
          if (v.superscript) m = std::max(m, lines_walk(**v.superscript, t));
          return m;
        } else if constexpr (std::is_same_v<T, DelimitedNode>) {
          return lines_walk(*v.body, t);
        }
      },
      n.value);
}

}  // namespace

int count_lines(const ExprNode& tree, const CommandTables& tables) {
  return lines_walk(tree, tables);
}

// ---------------------------------------------------------------------------
// AST <-> JSON

namespace {

using nlohmann::json;

json node_to_json(const ExprNode& n) {
  return std::visit(
      [&](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SymbolNode>) {
          return json{{"kind", "symbol"}, {"lexeme", v.lexeme}};
        } else if constexpr (std::is_same_v<T, CommandNode>) {
          json j{{"kind", "command"}, {"name", v.name}};
          json args = json::array();
          for (const auto& a : v.args) args.push_back(node_to_json(a));
          j["args"] = std::move(args);
          if (v.opt) j["opt"] = node_to_json(**v.opt);
          return j;
        } else if constexpr (std::is_same_v<T, GroupNode>) {
          json c = json::array();
          for (const auto& x : v.children) c.push_back(node_to_json(x));
          return json{{"kind", "group"}, {"children", std::move(c)}};
        } else if constexpr (std::is_same_v<T, SequenceNode>) {
          json c = json::array();
          for (const auto& x : v.children) c.push_back(node_to_json(x));
          return json{{"kind", "sequence"}, {"children", std::move(c)}};
        } else if constexpr (std::is_same_v<T, FractionNode>) {
          return json{{"kind", "frac"},
                      {"num", node_to_json(*v.numerator)},
                      {"den", node_to_json(*v.denominator)}};
        } else if constexpr (std::is_same_v<T, RadicalNode>) {
          json j{{"kind", "sqrt"}, {"radicand", node_to_json(*v.radicand)}};
          if (v.index) j["index"] = node_to_json(**v.index);
          return j;
        } else if constexpr (std::is_same_v<T, ScriptNode>) {
          json j{{"kind", "script"}, {"base", node_to_json(*v.base)}};
          if (v.subscript) j["sub"] = node_to_json(**v.subscript);
          if (v.superscript) j["sup"] = node_to_json(**v.superscript);
          return j;
        } else if constexpr (std::is_same_v<T, EnvironmentNode>) {
          json rows = json::array();
          for (const auto& row : v.rows) {
            json cells = json::array();
            for (const auto& cell : row.cells) cells.push_back(node_to_json(cell));
            rows.push_back(std::move(cells));
          }
          return json{{"kind", "environment"}, {"name", v.name}, {"rows", std::move(rows)}};
        } else if constexpr (std::is_same_v<T, TextNode>) {
          return json{{"kind", "text"}, {"content", v.content}};
        } else if constexpr (std::is_same_v<T, DelimitedNode>) {
          return json{{"kind", "delimited"},
                      {"left", v.left},
                      {"right", v.right},
                      {"body", node_to_json(*v.body)}};
        }
      },
      n.value);
}

[[noreturn]] void bad_ast(const std::string& what) {
  throw DomainError("BadAstJson", "malformed AST JSON: " + what);
}

ExprNode node_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) bad_ast("missing kind");
  const std::string kind = j["kind"].get<std::string>();
  auto str = [&](const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_string()) bad_ast(kind + " missing " + key);
    return j[key].get<std::string>();
  };
  auto node = [&](const char* key) -> ExprNode {
    if (!j.contains(key)) bad_ast(kind + " missing " + key);
    return node_from_json(j[key]);
  };
  auto list = [&](const char* key) -> std::vector<ExprNode> {
    if (!j.contains(key) || !j[key].is_array()) bad_ast(kind + " missing " + key);
    std::vector<ExprNode> out;
    for (const auto& e : j[key]) out.push_back(node_from_json(e));
    return out;
  };

  if (kind == "symbol") return sym(str("lexeme"));
  if (kind == "command") {
    std::optional<ExprNode> opt;
    if (j.contains("opt")) opt = node_from_json(j["opt"]);
    return command(str("name"), list("args"), std::move(opt));
  }
  if (kind == "group") return group(list("children"));
  if (kind == "sequence") return seq(list("children"));
  if (kind == "frac") return frac(node("num"), node("den"));
  if (kind == "sqrt") {
    std::optional<ExprNode> idx;
    if (j.contains("index")) idx = node_from_json(j["index"]);
    return radical(std::move(idx), node("radicand"));
  }
  if (kind == "script") {
    std::optional<ExprNode> sub, sup;
    if (j.contains("sub")) sub = node_from_json(j["sub"]);
    if (j.contains("sup")) sup = node_from_json(j["sup"]);
    if (!sub && !sup) bad_ast("script without sub or sup");
    return script(node("base"), std::move(sub), std::move(sup));
  }
  if (kind == "environment") {
    if (!j.contains("rows") || !j["rows"].is_array() || j["rows"].empty()) {
      bad_ast("environment needs rows");
    }
    std::vector<RowNode> rows;
    for (const auto& r : j["rows"]) {
      if (!r.is_array() || r.empty()) bad_ast("row needs cells");
      RowNode row;
      for (const auto& c : r) row.cells.push_back(node_from_json(c));
      rows.push_back(std::move(row));
    }
    return environment(str("name"), std::move(rows));
  }
  if (kind == "text") return text(str("content"));
  if (kind == "delimited") return delimited(str("left"), node("body"), str("right"));
  bad_ast("unknown kind '" + kind + "'");
}

}  // namespace

std::string ast_to_json(const ExprNode& tree) { return node_to_json(tree).dump(); }

ExprNode ast_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DomainError("BadAstJson", e.what());
  }
  return node_from_json(j);
}

}  // namespace mathrec::latex
