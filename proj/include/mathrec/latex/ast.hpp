#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mathrec::latex {

struct ExprNode;

// Heap-allocated child with value semantics: copies deep-copy, equality
// compares the pointed-to values.
template <typename T>
class Box {
public:
  Box() : ptr_(std::make_unique<T>()) {}
  explicit Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

private:
  std::unique_ptr<T> ptr_;
};

struct SymbolNode {
  std::string lexeme;
  bool operator==(const SymbolNode&) const = default;
};

struct GroupNode {
  std::vector<ExprNode> children;
  bool operator==(const GroupNode&) const;
};

struct SequenceNode {
  std::vector<ExprNode> children;
  bool operator==(const SequenceNode&) const;
};

struct CommandNode {
  std::string name;  // without backslash
  std::vector<ExprNode> args;
  std::optional<Box<ExprNode>> opt;  // leading [...] argument
  bool operator==(const CommandNode&) const;
};

struct FractionNode {
  Box<ExprNode> numerator;
  Box<ExprNode> denominator;
  bool operator==(const FractionNode&) const;
};

struct RadicalNode {
  std::optional<Box<ExprNode>> index;  // \sqrt[index]{...}
  Box<ExprNode> radicand;
  bool operator==(const RadicalNode&) const;
};

struct ScriptNode {
  Box<ExprNode> base;
  std::optional<Box<ExprNode>> subscript;
  std::optional<Box<ExprNode>> superscript;
  bool operator==(const ScriptNode&) const;
};

struct RowNode {
  std::vector<ExprNode> cells;  // at least one
  bool operator==(const RowNode&) const;
};

struct EnvironmentNode {
  std::string name;
  std::vector<RowNode> rows;  // at least one
  bool operator==(const EnvironmentNode&) const;
};

struct TextNode {
  std::string content;  // single-space normalized
  bool operator==(const TextNode&) const = default;
};

struct DelimitedNode {
  std::string left;   // "(", "\{", "\langle", "."
  std::string right;
  Box<ExprNode> body;
  bool operator==(const DelimitedNode&) const;
};

struct ExprNode {
  using Variant = std::variant<SymbolNode, CommandNode, GroupNode, FractionNode,
                               RadicalNode, ScriptNode, EnvironmentNode, TextNode,
                               DelimitedNode, SequenceNode>;
  Variant value;

  ExprNode() : value(SequenceNode{}) {}
  ExprNode(Variant v) : value(std::move(v)) {}  // NOLINT: implicit by design

  template <typename T>
  bool is() const { return std::holds_alternative<T>(value); }
  template <typename T>
  T& as() { return std::get<T>(value); }
  template <typename T>
  const T& as() const { return std::get<T>(value); }

  bool operator==(const ExprNode&) const = default;
};

inline bool GroupNode::operator==(const GroupNode& o) const { return children == o.children; }
inline bool SequenceNode::operator==(const SequenceNode& o) const { return children == o.children; }
inline bool CommandNode::operator==(const CommandNode& o) const {
  return name == o.name && args == o.args && opt == o.opt;
}
inline bool FractionNode::operator==(const FractionNode& o) const {
  return numerator == o.numerator && denominator == o.denominator;
}
inline bool RadicalNode::operator==(const RadicalNode& o) const {
  return index == o.index && radicand == o.radicand;
}
inline bool ScriptNode::operator==(const ScriptNode& o) const {
  return base == o.base && subscript == o.subscript && superscript == o.superscript;
}
inline bool RowNode::operator==(const RowNode& o) const { return cells == o.cells; }
inline bool EnvironmentNode::operator==(const EnvironmentNode& o) const {
  return name == o.name && rows == o.rows;
}
inline bool DelimitedNode::operator==(const DelimitedNode& o) const {
  return left == o.left && right == o.right && body == o.body;
}

// Construction helpers, mostly for tests and generators.

inline ExprNode sym(std::string lexeme) { return ExprNode(SymbolNode{std::move(lexeme)}); }

inline ExprNode group(std::vector<ExprNode> children) {
  return ExprNode(GroupNode{std::move(children)});
}

inline ExprNode seq(std::vector<ExprNode> children) {
  return ExprNode(SequenceNode{std::move(children)});
}

inline ExprNode frac(ExprNode num, ExprNode den) {
  return ExprNode(FractionNode{Box<ExprNode>(std::move(num)), Box<ExprNode>(std::move(den))});
}

inline ExprNode radical(std::optional<ExprNode> index, ExprNode radicand) {
  RadicalNode r{std::nullopt, Box<ExprNode>(std::move(radicand))};
  if (index) r.index = Box<ExprNode>(std::move(*index));
  return ExprNode(std::move(r));
}

inline ExprNode script(ExprNode base, std::optional<ExprNode> sub, std::optional<ExprNode> sup) {
  ScriptNode s{Box<ExprNode>(std::move(base)), std::nullopt, std::nullopt};
  if (sub) s.subscript = Box<ExprNode>(std::move(*sub));
  if (sup) s.superscript = Box<ExprNode>(std::move(*sup));
  return ExprNode(std::move(s));
}

inline ExprNode command(std::string name, std::vector<ExprNode> args,
                        std::optional<ExprNode> opt = std::nullopt) {
  CommandNode c{std::move(name), std::move(args), std::nullopt};
  if (opt) c.opt = Box<ExprNode>(std::move(*opt));
  return ExprNode(std::move(c));
}

inline ExprNode environment(std::string name, std::vector<RowNode> rows) {
  return ExprNode(EnvironmentNode{std::move(name), std::move(rows)});
}

inline ExprNode text(std::string content) { return ExprNode(TextNode{std::move(content)}); }

inline ExprNode delimited(std::string left, ExprNode body, std::string right) {
  return ExprNode(DelimitedNode{std::move(left), std::move(right), Box<ExprNode>(std::move(body))});
}

}  // namespace mathrec::latex
