#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mathrec/common/error.hpp"
#include "mathrec/latex/ast.hpp"
#include "mathrec/latex/parser.hpp"

namespace mathrec::sml {

// Structural roles of the tree serialization. Env/Cmd/Delim carry payloads.
enum class RoleKind {
  Frac, Num, Den,          // fraction and its two slots
  Rad, Idx, Body,          // radical, optional index, radicand
  Scr, Base, Sub, Sup,     // script container and its slots
  Grp, Seq,                // group / juxtaposition sequence
  Env, Row, Cell,          // environment grid
  Cmd, Opt,                // generic command, optional argument
  Text,                    // text content scope
  Delim,                   // \left...\right pair
};

struct Role {
  RoleKind kind = RoleKind::Grp;
  std::string payload_a;  // Env/Cmd name; Delim left
  std::string payload_b;  // Delim right

  bool operator==(const Role&) const = default;
};

struct SmlToken {
  enum class Type { Open, Close, Leaf };
  Type type = Type::Leaf;
  Role role;          // Open/Close only
  std::string text;   // Leaf only

  bool operator==(const SmlToken&) const = default;

  static SmlToken open(Role r) { return SmlToken{Type::Open, std::move(r), {}}; }
  static SmlToken close(Role r) { return SmlToken{Type::Close, std::move(r), {}}; }
  static SmlToken leaf(std::string lexeme) {
    return SmlToken{Type::Leaf, {}, std::move(lexeme)};
  }
};

using SmlSequence = std::vector<SmlToken>;

class SmlError : public DomainError {
public:
  SmlError(std::string code, const std::string& message, std::size_t position)
      : DomainError(std::move(code), message), position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

struct Violation {
  std::string code;  // UnbalancedSml | RoleOrderViolation | EmptyRequiredScope
  std::string message;
  std::size_t position = 0;
};

// Pre-order serialization; the output always passes validate_sml and has
// length = leaf count + 2 * structural scope count.
SmlSequence encode_sml(const latex::ExprNode& tree);

// Exact inverse of encode_sml on canonical trees. Throws SmlError.
latex::ExprNode decode_sml(const SmlSequence& seq);

// nullopt when the sequence is well formed, otherwise the earliest violation.
std::optional<Violation> validate_sml(const SmlSequence& seq);

// Whitespace-separated text form with reserved angle-bracket structural
// tokens (`<frac>`, `</frac>`, `<env:gather>`, ...). Leaves that would
// collide with a reserved token (or contain whitespace) round-trip through
// a `<leaf:hex>` escape.
std::string to_text(const SmlSequence& seq);
SmlSequence from_text(const std::string& text);

// JSON array form: [{"t":"open"|"close","r":role}, {"t":"leaf","v":lexeme}].
std::string to_json(const SmlSequence& seq);
SmlSequence from_json(const std::string& json_text);

// Canonical surface spelling of a role ("frac", "env:gather", "delim:(:)").
std::string role_text(const Role& role);

// Fixed (non-parameterized) structural token strings, open and close forms.
const std::vector<std::string>& fixed_structural_tokens();
std::string env_open_token(const std::string& env_name);
std::string env_close_token(const std::string& env_name);
std::string cmd_open_token(const std::string& command_name);
std::string cmd_close_token(const std::string& command_name);

// parse + encode_sml / decode_sml + render.
SmlSequence latex_to_sml(const std::string& input, latex::ParseMode mode);
std::string sml_to_latex(const SmlSequence& seq);

}  // namespace mathrec::sml
