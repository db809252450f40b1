#include <array>
#include <cctype>

#include "mathrec/sml/sml.hpp"

#include "mathrec/latex/ops.hpp"
#include "nlohmann/json.hpp"

namespace mathrec::sml {

using latex::Box;
using latex::ExprNode;

namespace {

const char* kind_name(RoleKind k) {
  switch (k) {
    case RoleKind::Frac: return "frac";
    case RoleKind::Num: return "num";
    case RoleKind::Den: return "den";
    case RoleKind::Rad: return "rad";
    case RoleKind::Idx: return "idx";
    case RoleKind::Body: return "body";
    case RoleKind::Scr: return "scr";
    case RoleKind::Base: return "base";
    case RoleKind::Sub: return "sub";
    case RoleKind::Sup: return "sup";
    case RoleKind::Grp: return "grp";
    case RoleKind::Seq: return "seq";
    case RoleKind::Env: return "env";
    case RoleKind::Row: return "row";
    case RoleKind::Cell: return "cell";
    case RoleKind::Cmd: return "cmd";
    case RoleKind::Opt: return "opt";
    case RoleKind::Text: return "text";
    case RoleKind::Delim: return "delim";
  }
  return "?";
}

Role role(RoleKind k) { return Role{k, "", ""}; }
Role env_role(std::string name) { return Role{RoleKind::Env, std::move(name), ""}; }
Role cmd_role(std::string name) { return Role{RoleKind::Cmd, std::move(name), ""}; }
Role delim_role(std::string l, std::string r) {
  return Role{RoleKind::Delim, std::move(l), std::move(r)};
}

// Payload escaping keeps role spellings free of ':', '<', '>', '%' and
// whitespace so the text form stays whitespace-splittable.
bool payload_needs_escape(char c) {
  return c == ':' || c == '%' || c == '<' || c == '>' ||
         std::isspace(static_cast<unsigned char>(c));
}

std::string escape_payload(const std::string& s) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : s) {
    if (payload_needs_escape(static_cast<char>(c))) {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::optional<std::string> unescape_payload(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%') {
      if (i + 2 >= s.size()) return std::nullopt;
      int hi = hex_digit(s[i + 1]), lo = hex_digit(s[i + 2]);
      if (hi < 0 || lo < 0) return std::nullopt;
      out += static_cast<char>(hi * 16 + lo);
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

}  // namespace

std::string role_text(const Role& r) {
  switch (r.kind) {
    case RoleKind::Env:
    case RoleKind::Cmd:
      return std::string(kind_name(r.kind)) + ":" + escape_payload(r.payload_a);
    case RoleKind::Delim:
      return std::string(kind_name(r.kind)) + ":" + escape_payload(r.payload_a) + ":" +
             escape_payload(r.payload_b);
    default:
      return kind_name(r.kind);
  }
}

const std::vector<std::string>& fixed_structural_tokens() {
  static const std::vector<std::string> toks = [] {
    std::vector<std::string> v;
    for (RoleKind k : {RoleKind::Frac, RoleKind::Num, RoleKind::Den, RoleKind::Rad,
                       RoleKind::Idx, RoleKind::Body, RoleKind::Scr, RoleKind::Base,
                       RoleKind::Sub, RoleKind::Sup, RoleKind::Grp, RoleKind::Seq,
                       RoleKind::Row, RoleKind::Cell, RoleKind::Opt, RoleKind::Text}) {
      v.push_back(std::string("<") + kind_name(k) + ">");
      v.push_back(std::string("</") + kind_name(k) + ">");
    }
    return v;
  }();
  return toks;
}

std::string env_open_token(const std::string& env_name) {
  return "<" + role_text(env_role(env_name)) + ">";
}
std::string env_close_token(const std::string& env_name) {
  return "</" + role_text(env_role(env_name)) + ">";
}
std::string cmd_open_token(const std::string& command_name) {
  return "<" + role_text(cmd_role(command_name)) + ">";
}
std::string cmd_close_token(const std::string& command_name) {
  return "</" + role_text(cmd_role(command_name)) + ">";
}

// ---------------------------------------------------------------------------
// encode

namespace {

void emit_node(const ExprNode& n, SmlSequence& out);

// Argument slots absorb their Group wrapper: the scope brackets stand for it.
void emit_group_content(const ExprNode& n, SmlSequence& out) {
  if (n.is<latex::GroupNode>()) {
    for (const auto& c : n.as<latex::GroupNode>().children) emit_node(c, out);
  } else {
    emit_node(n, out);
  }
}

// Sequence positions (cells, delimited bodies) absorb a Sequence wrapper.
void emit_seq_content(const ExprNode& n, SmlSequence& out) {
  if (n.is<latex::SequenceNode>()) {
    for (const auto& c : n.as<latex::SequenceNode>().children) emit_node(c, out);
  } else {
    emit_node(n, out);
  }
}

void emit_scope(Role r, const ExprNode& content, bool splice_group, SmlSequence& out) {
  out.push_back(SmlToken::open(r));
  if (splice_group) {
    emit_group_content(content, out);
  } else {
    emit_seq_content(content, out);
  }
  out.push_back(SmlToken::close(std::move(r)));
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

void emit_node(const ExprNode& n, SmlSequence& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, latex::SymbolNode>) {
          out.push_back(SmlToken::leaf(v.lexeme));
        } else if constexpr (std::is_same_v<T, latex::GroupNode>) {
          out.push_back(SmlToken::open(role(RoleKind::Grp)));
          for (const auto& c : v.children) emit_node(c, out);
          out.push_back(SmlToken::close(role(RoleKind::Grp)));
        } else if constexpr (std::is_same_v<T, latex::SequenceNode>) {
          out.push_back(SmlToken::open(role(RoleKind::Seq)));
          for (const auto& c : v.children) emit_node(c, out);
          out.push_back(SmlToken::close(role(RoleKind::Seq)));
        } else if constexpr (std::is_same_v<T, latex::FractionNode>) {
          out.push_back(SmlToken::open(role(RoleKind::Frac)));
          emit_scope(role(RoleKind::Num), *v.numerator, true, out);
          emit_scope(role(RoleKind::Den), *v.denominator, true, out);
          out.push_back(SmlToken::close(role(RoleKind::Frac)));
        } else if constexpr (std::is_same_v<T, latex::RadicalNode>) {
          out.push_back(SmlToken::open(role(RoleKind::Rad)));
          if (v.index) emit_scope(role(RoleKind::Idx), **v.index, true, out);
          emit_scope(role(RoleKind::Body), *v.radicand, true, out);
          out.push_back(SmlToken::close(role(RoleKind::Rad)));
        } else if constexpr (std::is_same_v<T, latex::ScriptNode>) {
          out.push_back(SmlToken::open(role(RoleKind::Scr)));
          // The base keeps its exact node (no splicing): `{x}^2` and `x^2`
          // have different bases.
          out.push_back(SmlToken::open(role(RoleKind::Base)));
          emit_node(*v.base, out);
          out.push_back(SmlToken::close(role(RoleKind::Base)));
          if (v.subscript) emit_scope(role(RoleKind::Sub), **v.subscript, true, out);
          if (v.superscript) emit_scope(role(RoleKind::Sup), **v.superscript, true, out);
          out.push_back(SmlToken::close(role(RoleKind::Scr)));
        } else if constexpr (std::is_same_v<T, latex::EnvironmentNode>) {
          out.push_back(SmlToken::open(env_role(v.name)));
          for (const auto& row : v.rows) {
            out.push_back(SmlToken::open(role(RoleKind::Row)));
            for (const auto& cell : row.cells) {
              emit_scope(role(RoleKind::Cell), cell, false, out);
            }
            out.push_back(SmlToken::close(role(RoleKind::Row)));
          }
          out.push_back(SmlToken::close(env_role(v.name)));
        } else if constexpr (std::is_same_v<T, latex::CommandNode>) {
          out.push_back(SmlToken::open(cmd_role(v.name)));
          if (v.opt) emit_scope(role(RoleKind::Opt), **v.opt, true, out);
          for (const auto& a : v.args) emit_scope(role(RoleKind::Grp), a, true, out);
          out.push_back(SmlToken::close(cmd_role(v.name)));
        } else if constexpr (std::is_same_v<T, latex::TextNode>) {
          out.push_back(SmlToken::open(role(RoleKind::Text)));
          for (auto& w : split_words(v.content)) out.push_back(SmlToken::leaf(std::move(w)));
          out.push_back(SmlToken::close(role(RoleKind::Text)));
        } else if constexpr (std::is_same_v<T, latex::DelimitedNode>) {
          Role r = delim_role(v.left, v.right);
          out.push_back(SmlToken::open(r));
          emit_seq_content(*v.body, out);
          out.push_back(SmlToken::close(std::move(r)));
        }
      },
      n.value);
}

}  // namespace

SmlSequence encode_sml(const ExprNode& tree) {
  SmlSequence out;
  // The top level is a sequence position.
  emit_seq_content(tree, out);
  return out;
}

// ---------------------------------------------------------------------------
// decode

namespace {

class Decoder {
public:
  explicit Decoder(const SmlSequence& seq) : seq_(seq) {}

  ExprNode run() {
    auto items = parse_items();
    if (!eof()) fail("UnbalancedSml", "close without matching open", pos_);
    return wrap_seq(std::move(items));
  }

private:
  const SmlSequence& seq_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const char* code, const std::string& msg, std::size_t at) {
    throw SmlError(code, msg + " at token " + std::to_string(at), at);
  }

  bool eof() const { return pos_ >= seq_.size(); }
  const SmlToken& cur() const { return seq_[pos_]; }

  static ExprNode wrap_seq(std::vector<ExprNode> items) {
    if (items.size() == 1) return std::move(items.front());
    return latex::seq(std::move(items));
  }

  // 0 items -> empty Group, 1 item -> the node, else Group of items.
  static ExprNode wrap_slot(std::vector<ExprNode> items) {
    if (items.size() == 1) return std::move(items.front());
    return latex::group(std::move(items));
  }

  void expect_close(const Role& r, std::size_t open_at) {
    if (eof()) fail("UnbalancedSml", "scope <" + role_text(r) + "> never closed", open_at);
    if (cur().type != SmlToken::Type::Close || !(cur().role == r)) {
      fail("UnbalancedSml", "expected </" + role_text(r) + ">", pos_);
    }
    ++pos_;
  }

  // Items until a Close token (not consumed) or end of input.
  std::vector<ExprNode> parse_items() {
    std::vector<ExprNode> items;
    while (!eof() && cur().type != SmlToken::Type::Close) items.push_back(parse_item());
    return items;
  }

  ExprNode parse_item() {
    const SmlToken& t = cur();
    if (t.type == SmlToken::Type::Leaf) {
      ++pos_;
      return latex::sym(t.text);
    }
    if (t.type == SmlToken::Type::Close) {
      fail("UnbalancedSml", "close without matching open", pos_);
    }
    return parse_scope();
  }

  // Scope whose content is a plain item list.
  std::vector<ExprNode> parse_list_scope(const Role& r) {
    std::size_t open_at = pos_;
    ++pos_;
    auto items = parse_items();
    expect_close(r, open_at);
    return items;
  }

  // Expects Open(kind) right here; returns its items.
  std::vector<ExprNode> require_scope(RoleKind kind, const Role& parent, std::size_t parent_at) {
    if (eof() || cur().type != SmlToken::Type::Open || cur().role.kind != kind) {
      if (!eof() && cur().type == SmlToken::Type::Open) {
        fail("RoleOrderViolation",
             "<" + role_text(parent) + "> expects <" + kind_name(kind) + ">, found <" +
                 role_text(cur().role) + ">", pos_);
      }
      if (!eof() && cur().type == SmlToken::Type::Leaf) {
        fail("RoleOrderViolation",
             "<" + role_text(parent) + "> expects <" + kind_name(kind) + ">, found leaf", pos_);
      }
      fail("EmptyRequiredScope",
           "<" + role_text(parent) + "> is missing its <" + kind_name(kind) + "> scope",
           eof() ? parent_at : pos_);
    }
    return parse_list_scope(cur().role);
  }

  bool at_open(RoleKind kind) const {
    return !eof() && cur().type == SmlToken::Type::Open && cur().role.kind == kind;
  }

  ExprNode parse_scope() {
    const std::size_t open_at = pos_;
    const Role r = cur().role;
    switch (r.kind) {
      case RoleKind::Grp:
        return latex::group(parse_list_scope(r));
      case RoleKind::Seq:
        return latex::seq(parse_list_scope(r));
      case RoleKind::Text: {
        ++pos_;
        std::string content;
        while (!eof() && cur().type == SmlToken::Type::Leaf) {
          if (!content.empty()) content += ' ';
          content += cur().text;
          ++pos_;
        }
        if (!eof() && cur().type == SmlToken::Type::Open) {
          fail("RoleOrderViolation", "<text> may contain only leaves", pos_);
        }
        expect_close(r, open_at);
        return latex::text(std::move(content));
      }
      case RoleKind::Delim: {
        ++pos_;
        auto items = parse_items();
        expect_close(r, open_at);
        return latex::delimited(r.payload_a, wrap_seq(std::move(items)), r.payload_b);
      }
      case RoleKind::Frac: {
        ++pos_;
        auto num = require_scope(RoleKind::Num, r, open_at);
        auto den = require_scope(RoleKind::Den, r, open_at);
        if (!eof() && cur().type != SmlToken::Type::Close) {
          fail("RoleOrderViolation", "unexpected content in <frac>", pos_);
        }
        expect_close(r, open_at);
        return latex::frac(latex::group(std::move(num)), latex::group(std::move(den)));
      }
      case RoleKind::Rad: {
        ++pos_;
        std::optional<ExprNode> idx;
        if (at_open(RoleKind::Idx)) idx = latex::group(parse_list_scope(cur().role));
        auto body = require_scope(RoleKind::Body, r, open_at);
        if (!eof() && cur().type != SmlToken::Type::Close) {
          fail("RoleOrderViolation", "unexpected content in <rad>", pos_);
        }
        expect_close(r, open_at);
        return latex::radical(std::move(idx), latex::group(std::move(body)));
      }
      case RoleKind::Scr: {
        ++pos_;
        auto base_items = require_scope(RoleKind::Base, r, open_at);
        if (base_items.empty()) {
          fail("EmptyRequiredScope", "<base> must contain exactly one item", open_at);
        }
        if (base_items.size() > 1) {
          fail("RoleOrderViolation", "<base> must contain exactly one item", open_at);
        }
        std::optional<ExprNode> sub, sup;
        if (at_open(RoleKind::Sub)) sub = wrap_slot(parse_list_scope(cur().role));
        if (at_open(RoleKind::Sup)) sup = wrap_slot(parse_list_scope(cur().role));
        if (at_open(RoleKind::Sub)) {
          fail("RoleOrderViolation", "<sub> must precede <sup>", pos_);
        }
        if (!eof() && cur().type != SmlToken::Type::Close) {
          fail("RoleOrderViolation", "unexpected content in <scr>", pos_);
        }
        if (!sub && !sup) {
          fail("EmptyRequiredScope", "<scr> needs a <sub> or <sup> scope", open_at);
        }
        expect_close(r, open_at);
        return latex::script(std::move(base_items.front()), std::move(sub), std::move(sup));
      }
      case RoleKind::Env: {
        ++pos_;
        std::vector<latex::RowNode> rows;
        while (at_open(RoleKind::Row)) {
          std::size_t row_at = pos_;
          Role row_role = cur().role;
          ++pos_;
          latex::RowNode row;
          while (at_open(RoleKind::Cell)) {
            row.cells.push_back(wrap_seq(parse_list_scope(cur().role)));
          }
          if (row.cells.empty()) {
            if (!eof() && cur().type != SmlToken::Type::Close) {
              fail("RoleOrderViolation", "<row> may contain only <cell> scopes", pos_);
            }
            fail("EmptyRequiredScope", "<row> needs at least one <cell>", row_at);
          }
          if (!eof() && cur().type != SmlToken::Type::Close) {
            fail("RoleOrderViolation", "<row> may contain only <cell> scopes", pos_);
          }
          expect_close(row_role, row_at);
          rows.push_back(std::move(row));
        }
        if (rows.empty()) {
          if (!eof() && cur().type != SmlToken::Type::Close) {
            fail("RoleOrderViolation", "<env> may contain only <row> scopes", pos_);
          }
          fail("EmptyRequiredScope", "<env:" + r.payload_a + "> needs at least one <row>",
               open_at);
        }
        if (!eof() && cur().type != SmlToken::Type::Close) {
          fail("RoleOrderViolation", "<env> may contain only <row> scopes", pos_);
        }
        expect_close(r, open_at);
        return latex::environment(r.payload_a, std::move(rows));
      }
      case RoleKind::Cmd: {
        ++pos_;
        std::optional<ExprNode> opt;
        if (at_open(RoleKind::Opt)) opt = latex::group(parse_list_scope(cur().role));
        std::vector<ExprNode> args;
        while (at_open(RoleKind::Grp)) {
          args.push_back(latex::group(parse_list_scope(cur().role)));
        }
        if (!eof() && cur().type != SmlToken::Type::Close) {
          if (at_open(RoleKind::Opt)) {
            fail("RoleOrderViolation", "<opt> must come before argument groups", pos_);
          }
          fail("RoleOrderViolation", "<cmd> may contain only <opt> and <grp> scopes", pos_);
        }
        expect_close(r, open_at);
        return latex::command(r.payload_a, std::move(args), std::move(opt));
      }
      // Slot scopes are only legal inside their parents, which consume them
      // directly; reaching one here is a containment violation.
      case RoleKind::Num: case RoleKind::Den: case RoleKind::Idx: case RoleKind::Body:
      case RoleKind::Base: case RoleKind::Sub: case RoleKind::Sup: case RoleKind::Row:
      case RoleKind::Cell: case RoleKind::Opt:
        fail("RoleOrderViolation",
             "<" + role_text(r) + "> requires its enclosing scope", pos_);
    }
    fail("UnbalancedSml", "unreachable", pos_);
  }
};

}  // namespace

latex::ExprNode decode_sml(const SmlSequence& seq) { return Decoder(seq).run(); }

std::optional<Violation> validate_sml(const SmlSequence& seq) {
  try {
    (void)decode_sml(seq);
    return std::nullopt;
  } catch (const SmlError& e) {
    return Violation{e.code(), e.what(), e.position()};
  }
}

// ---------------------------------------------------------------------------
// text form

namespace {

// Structural spelling parser; nullopt when the word is not a reserved token.
std::optional<SmlToken> parse_structural(const std::string& word) {
  if (word.size() < 3 || word.front() != '<' || word.back() != '>') return std::nullopt;
  bool is_close = word[1] == '/';
  std::string inner = word.substr(is_close ? 2 : 1, word.size() - (is_close ? 3 : 2));
  if (inner.empty()) return std::nullopt;

  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto colon = inner.find(':', start);
    if (colon == std::string::npos) {
      parts.push_back(inner.substr(start));
      break;
    }
    parts.push_back(inner.substr(start, colon - start));
    start = colon + 1;
  }

  static const std::array<RoleKind, 19> kinds = {
      RoleKind::Frac, RoleKind::Num,  RoleKind::Den,  RoleKind::Rad, RoleKind::Idx,
      RoleKind::Body, RoleKind::Scr,  RoleKind::Base, RoleKind::Sub, RoleKind::Sup,
      RoleKind::Grp,  RoleKind::Seq,  RoleKind::Env,  RoleKind::Row, RoleKind::Cell,
      RoleKind::Cmd,  RoleKind::Opt,  RoleKind::Text, RoleKind::Delim};
  RoleKind kind{};
  bool found = false;
  for (RoleKind k : kinds) {
    if (parts[0] == kind_name(k)) {
      kind = k;
      found = true;
      break;
    }
  }
  if (!found) return std::nullopt;

  Role r{kind, "", ""};
  if (kind == RoleKind::Env || kind == RoleKind::Cmd) {
    if (parts.size() != 2) return std::nullopt;
    auto p = unescape_payload(parts[1]);
    if (!p || p->empty()) return std::nullopt;
    r.payload_a = std::move(*p);
  } else if (kind == RoleKind::Delim) {
    if (parts.size() != 3) return std::nullopt;
    auto a = unescape_payload(parts[1]);
    auto b = unescape_payload(parts[2]);
    if (!a || !b || a->empty() || b->empty()) return std::nullopt;
    r.payload_a = std::move(*a);
    r.payload_b = std::move(*b);
  } else if (parts.size() != 1) {
    return std::nullopt;
  }
  return is_close ? SmlToken::close(std::move(r)) : SmlToken::open(std::move(r));
}

bool leaf_needs_escape(const std::string& lexeme) {
  if (lexeme.empty()) return true;
  for (char c : lexeme) {
    if (std::isspace(static_cast<unsigned char>(c))) return true;
  }
  if (lexeme.rfind("<leaf:", 0) == 0) return true;
  return parse_structural(lexeme).has_value();
}

std::string hex_encode(const std::string& s) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : s) {
    out += hex[c >> 4];
    out += hex[c & 15];
  }
  return out;
}

std::optional<std::string> hex_decode(const std::string& s) {
  if (s.size() % 2 != 0) return std::nullopt;
  std::string out;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    int hi = hex_digit(s[i]), lo = hex_digit(s[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out += static_cast<char>(hi * 16 + lo);
  }
  return out;
}

std::string token_to_text(const SmlToken& t) {
  switch (t.type) {
    case SmlToken::Type::Open: return "<" + role_text(t.role) + ">";
    case SmlToken::Type::Close: return "</" + role_text(t.role) + ">";
    case SmlToken::Type::Leaf:
      if (leaf_needs_escape(t.text)) return "<leaf:" + hex_encode(t.text) + ">";
      return t.text;
  }
  return {};
}

}  // namespace

std::string to_text(const SmlSequence& seq) {
  std::string out;
  for (const auto& t : seq) {
    if (!out.empty()) out += ' ';
    out += token_to_text(t);
  }
  return out;
}

SmlSequence from_text(const std::string& text) {
  SmlSequence out;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    if (word.rfind("<leaf:", 0) == 0 && word.back() == '>') {
      auto decoded = hex_decode(word.substr(6, word.size() - 7));
      if (!decoded) {
        throw SmlError("UnbalancedSml", "malformed <leaf:...> token '" + word + "'", out.size());
      }
      out.push_back(SmlToken::leaf(std::move(*decoded)));
    } else if (auto structural = parse_structural(word)) {
      out.push_back(std::move(*structural));
    } else {
      out.push_back(SmlToken::leaf(word));
    }
    word.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      word += c;
    }
  }
  flush();
  return out;
}

std::string to_json(const SmlSequence& seq) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : seq) {
    switch (t.type) {
      case SmlToken::Type::Open:
        arr.push_back({{"t", "open"}, {"r", role_text(t.role)}});
        break;
      case SmlToken::Type::Close:
        arr.push_back({{"t", "close"}, {"r", role_text(t.role)}});
        break;
      case SmlToken::Type::Leaf:
        arr.push_back({{"t", "leaf"}, {"v", t.text}});
        break;
    }
  }
  return arr.dump();
}

SmlSequence from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("BadSmlJson", e.what());
  }
  if (!j.is_array()) throw DomainError("BadSmlJson", "expected a JSON array");
  SmlSequence out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (!e.is_object() || !e.contains("t") || !e["t"].is_string()) {
      throw DomainError("BadSmlJson", "entry " + std::to_string(i) + " malformed");
    }
    std::string t = e["t"].get<std::string>();
    if (t == "leaf") {
      if (!e.contains("v") || !e["v"].is_string()) {
        throw DomainError("BadSmlJson", "leaf entry " + std::to_string(i) + " missing v");
      }
      out.push_back(SmlToken::leaf(e["v"].get<std::string>()));
      continue;
    }
    if (t != "open" && t != "close") {
      throw DomainError("BadSmlJson", "entry " + std::to_string(i) + " has unknown t");
    }
    if (!e.contains("r") || !e["r"].is_string()) {
      throw DomainError("BadSmlJson", "entry " + std::to_string(i) + " missing r");
    }
    std::string spelled = (t == "open" ? "<" : "</") + e["r"].get<std::string>() + ">";
    auto structural = parse_structural(spelled);
    if (!structural) {
      throw DomainError("BadSmlJson", "entry " + std::to_string(i) + " has bad role '" +
                                          e["r"].get<std::string>() + "'");
    }
    out.push_back(std::move(*structural));
  }
  return out;
}

SmlSequence latex_to_sml(const std::string& input, latex::ParseMode mode) {
  return encode_sml(latex::parse(input, mode).root);
}

std::string sml_to_latex(const SmlSequence& seq) { return latex::render(decode_sml(seq)); }

}  // namespace mathrec::sml
