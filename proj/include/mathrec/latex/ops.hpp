#pragma once

#include <string>

#include "mathrec/latex/ast.hpp"
#include "mathrec/latex/tables.hpp"

namespace mathrec::latex {

// Canonical LaTeX form: scripts always braced with subscript before
// superscript, command arguments always braced, a single guard space after a
// command word when a letter follows. Re-parsing the output in Strict mode
// yields a structurally identical tree.
std::string render(const ExprNode& tree);

// Applies the synonym table, removes spacing-only commands, flattens
// redundant single-child groups outside argument positions. Idempotent.
ExprNode normalize(const ExprNode& tree,
                   const CommandTables& tables = CommandTables::defaults());

// Maximum root-to-leaf edge count; a lone Symbol has depth 0.
int depth(const ExprNode& tree);

// Rows of the outermost multi-line-family environment (max across sibling
// branches); matrix-family and unknown environments count as single-line
// content. 1 when there is no multi-line environment.
int count_lines(const ExprNode& tree,
                const CommandTables& tables = CommandTables::defaults());

// AST <-> JSON for the CLI parse/render round trip.
std::string ast_to_json(const ExprNode& tree);
ExprNode ast_from_json(const std::string& json_text);

}  // namespace mathrec::latex
