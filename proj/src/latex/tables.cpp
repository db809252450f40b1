#include <fstream>
#include <sstream>

#include "mathrec/common/error.hpp"
#include "mathrec/latex/tables.hpp"

namespace mathrec::latex {

namespace {

// Kept byte-identical to data/arity.tsv (checked by a unit test).
const char* const kArityTsv =
    "\\frac\t2\n"
    "\\dfrac\t2\n"
    "\\tfrac\t2\n"
    "\\cfrac\t2\n"
    "\\binom\t2\n"
    "\\overset\t2\n"
    "\\underset\t2\n"
    "\\stackrel\t2\n"
    "\\sqrt\t1\n"
    "\\hat\t1\n"
    "\\bar\t1\n"
    "\\vec\t1\n"
    "\\dot\t1\n"
    "\\tilde\t1\n"
    "\\overline\t1\n"
    "\\underline\t1\n"
    "\\text\t1\n"
    "\\mathrm\t1\n"
    "\\mathbf\t1\n"
    "\\mathcal\t1\n"
    "\\mathbb\t1\n"
    "\\operatorname\t1\n"
    "\\hspace\t1\n"
    "\\vspace\t1\n"
    "\\sum\t0\n"
    "\\prod\t0\n"
    "\\coprod\t0\n"
    "\\int\t0\n"
    "\\oint\t0\n"
    "\\iint\t0\n"
    "\\iiint\t0\n"
    "\\bigcup\t0\n"
    "\\bigcap\t0\n"
    "\\bigoplus\t0\n"
    "\\bigotimes\t0\n"
    "\\bigodot\t0\n"
    "\\biguplus\t0\n"
    "\\bigvee\t0\n"
    "\\bigwedge\t0\n"
    "\\lim\t0\n"
    "\\limsup\t0\n"
    "\\liminf\t0\n";

// Kept byte-identical to data/synonyms.tsv. An empty right column marks a
// spacing command that normalize drops together with its arguments.
const char* const kSynonymsTsv =
    "\\dfrac\t\\frac\n"
    "\\tfrac\t\\frac\n"
    "\\cfrac\t\\frac\n"
    "\\le\t\\leq\n"
    "\\ge\t\\geq\n"
    "\\ne\t\\neq\n"
    "\\to\t\\rightarrow\n"
    "\\,\t\n"
    "\\;\t\n"
    "\\:\t\n"
    "\\!\t\n"
    "\\quad\t\n"
    "\\qquad\t\n"
    "\\hspace\t\n"
    "\\vspace\t\n"
    "\\displaystyle\t\n"
    "\\limits\t\n"
    "\\nolimits\t\n";

const char* const kMultilineEnvs[] = {
    "gather", "gather*", "align", "align*", "aligned", "alignat",
    "eqnarray", "multline", "split", "cases", "array",
};

const char* const kMatrixEnvs[] = {
    "matrix", "pmatrix", "bmatrix", "Bmatrix", "vmatrix", "Vmatrix", "smallmatrix",
};

std::string strip_backslash(const std::string& s, const char* file, int lineno) {
  if (s.empty() || s[0] != '\\') {
    throw DomainError("BadTable", std::string(file) + " line " + std::to_string(lineno) +
                                      ": entry must start with a backslash");
  }
  return s.substr(1);
}

}  // namespace

const std::string& default_arity_tsv() {
  static const std::string s = kArityTsv;
  return s;
}

const std::string& default_synonyms_tsv() {
  static const std::string s = kSynonymsTsv;
  return s;
}

CommandTables CommandTables::from_strings(const std::string& arity_tsv,
                                          const std::string& synonyms_tsv) {
  CommandTables t;
  {
    std::istringstream in(arity_tsv);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw DomainError("BadTable", "arity table line " + std::to_string(lineno) +
                                          ": expected name<TAB>arity");
      }
      std::string name = strip_backslash(line.substr(0, tab), "arity table", lineno);
      int arity = 0;
      try {
        arity = std::stoi(line.substr(tab + 1));
      } catch (const std::exception&) {
        throw DomainError("BadTable",
                          "arity table line " + std::to_string(lineno) + ": bad arity");
      }
      if (arity < 0) {
        throw DomainError("BadTable",
                          "arity table line " + std::to_string(lineno) + ": negative arity");
      }
      if (t.arity.emplace(name, arity).second) t.arity_order.push_back(name);
    }
  }
  {
    std::istringstream in(synonyms_tsv);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw DomainError("BadTable", "synonym table line " + std::to_string(lineno) +
                                          ": expected from<TAB>to");
      }
      std::string from = line.substr(0, tab);
      std::string to = line.substr(tab + 1);
      if (from.empty()) {
        throw DomainError("BadTable",
                          "synonym table line " + std::to_string(lineno) + ": empty source");
      }
      if (to.empty()) {
        t.drops.insert(from);
      } else {
        t.synonyms[from] = to;
      }
    }
  }
  for (const char* e : kMultilineEnvs) {
    t.multiline_envs.insert(e);
    t.env_order.push_back(e);
  }
  for (const char* e : kMatrixEnvs) {
    t.matrix_envs.insert(e);
    t.env_order.push_back(e);
  }
  return t;
}

CommandTables CommandTables::load_files(const std::string& arity_path,
                                        const std::string& synonyms_path) {
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  return from_strings(slurp(arity_path), slurp(synonyms_path));
}

const CommandTables& CommandTables::defaults() {
  static const CommandTables t = from_strings(default_arity_tsv(), default_synonyms_tsv());
  return t;
}

}  // namespace mathrec::latex
