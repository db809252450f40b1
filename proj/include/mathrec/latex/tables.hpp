#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace mathrec::latex {

// Command arity and rewrite tables. Shipped as TSV data files (data/arity.tsv,
// data/synonyms.tsv) with identical compiled-in defaults so binaries are
// relocatable. Lines: `\name<TAB>arity` and `\from<TAB>\to` (an empty target
// means the command is dropped by normalize, together with its arguments).
struct CommandTables {
  // name (without backslash) -> required argument count
  std::map<std::string, int> arity;
  std::vector<std::string> arity_order;  // file order, drives the specials list

  // surface form ("\dfrac") -> replacement surface form ("\frac")
  std::map<std::string, std::string> synonyms;
  // surface forms removed entirely by normalize ("\,", "\quad", "\hspace")
  std::set<std::string> drops;

  std::set<std::string> multiline_envs;
  std::set<std::string> matrix_envs;
  std::vector<std::string> env_order;

  bool knows(const std::string& name) const { return arity.count(name) != 0; }
  int arity_of(const std::string& name) const {
    auto it = arity.find(name);
    return it == arity.end() ? 0 : it->second;
  }
  bool is_multiline_env(const std::string& name) const {
    return multiline_envs.count(name) != 0;
  }

  static const CommandTables& defaults();

  // Parses the TSV formats above. Throws DomainError on malformed lines.
  static CommandTables from_strings(const std::string& arity_tsv,
                                    const std::string& synonyms_tsv);
  static CommandTables load_files(const std::string& arity_path,
                                  const std::string& synonyms_path);
};

// Exact content of the shipped data files.
const std::string& default_arity_tsv();
const std::string& default_synonyms_tsv();

}  // namespace mathrec::latex
