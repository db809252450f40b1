#include <fstream>

#include "mathrec/default_specials.hpp"

#include "mathrec/common/error.hpp"
#include "mathrec/sml/sml.hpp"

namespace mathrec {

std::vector<std::string> default_special_tokens(const latex::CommandTables& tables) {
  std::vector<std::string> out;
  for (const auto& name : tables.arity_order) out.push_back("\\" + name);
  out.push_back("\\left");
  out.push_back("\\right");
  for (const auto& env : tables.env_order) {
    out.push_back("\\begin{" + env + "}");
    out.push_back("\\end{" + env + "}");
  }
  for (const auto& tok : sml::fixed_structural_tokens()) out.push_back(tok);
  for (const auto& env : tables.env_order) {
    out.push_back(sml::env_open_token(env));
    out.push_back(sml::env_close_token(env));
  }
  for (const auto& name : tables.arity_order) {
    out.push_back(sml::cmd_open_token(name));
    out.push_back(sml::cmd_close_token(name));
  }
  return out;
}

std::string default_specials_file_content(const latex::CommandTables& tables) {
  std::string out;
  for (const auto& tok : default_special_tokens(tables)) {
    out += tok;
    out += '\n';
  }
  return out;
}

std::vector<std::string> load_specials_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace mathrec
