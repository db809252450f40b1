#pragma once

#include <string>
#include <vector>

#include "mathrec/latex/tables.hpp"

namespace mathrec {

// The default atomic-token list for the tokenizer: every arity-table command,
// \left/\right, \begin{env}/\end{env} for the supported environments, and the
// structural tokens of the tree serialization (fixed roles plus env/cmd
// forms). Order is deterministic; shipped as data/specials.txt.
std::vector<std::string> default_special_tokens(
    const latex::CommandTables& tables = latex::CommandTables::defaults());

// One token per line, trailing newline.
std::string default_specials_file_content(
    const latex::CommandTables& tables = latex::CommandTables::defaults());

std::vector<std::string> load_specials_file(const std::string& path);

}  // namespace mathrec
