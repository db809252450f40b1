#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mathrec/bpe/bpe.hpp"

#include "nlohmann/json.hpp"

namespace mathrec::bpe {

namespace {

constexpr const char* kVersion = "bpe-math/1";

std::uint64_t pack(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

[[noreturn]] void corrupt(const std::string& what) {
  throw DomainError("CorruptModel", "corrupt tokenizer model: " + what);
}

}  // namespace

void TokenizerModel::rebuild_index() {
  special_id.clear();
  specials_by_first.fill({});
  merge_rank.clear();
  piece_id.clear();
  merge_results.clear();

  for (std::size_t i = 0; i < specials.size(); ++i) {
    const std::string& s = specials[i];
    if (s.empty()) corrupt("empty special token");
    if (!special_id.emplace(s, static_cast<int>(i)).second) {
      corrupt("duplicate special token '" + s + "'");
    }
    specials_by_first[static_cast<unsigned char>(s[0])].push_back(static_cast<int>(i));
  }
  for (auto& bucket : specials_by_first) {
    std::sort(bucket.begin(), bucket.end(), [&](int a, int b) {
      if (specials[a].size() != specials[b].size()) return specials[a].size() > specials[b].size();
      return a < b;
    });
  }

  const int base = static_cast<int>(specials.size());
  for (int b = 0; b < 256; ++b) {
    piece_id.emplace(std::string(1, static_cast<char>(b)), base + b);
  }
  merge_results.reserve(merges.size());
  for (std::size_t m = 0; m < merges.size(); ++m) {
    const auto& [left, right] = merges[m];
    auto li = piece_id.find(left);
    auto ri = piece_id.find(right);
    if (li == piece_id.end() || ri == piece_id.end()) {
      corrupt("merge " + std::to_string(m) + " references an underivable token");
    }
    std::string result = left + right;
    if (special_id.count(result)) {
      corrupt("merge " + std::to_string(m) + " produces special token '" + result + "'");
    }
    int id = base + 256 + static_cast<int>(m);
    merge_rank.emplace(pack(li->second, ri->second), static_cast<int>(m));
    merge_results.push_back(result);
    piece_id.emplace(std::move(result), id);  // first id wins on duplicates
  }
}

const std::string& TokenizerModel::token_string(int id) const {
  static const std::array<std::string, 256>& byte_strings = [] {
    static std::array<std::string, 256> arr;
    for (int b = 0; b < 256; ++b) arr[b] = std::string(1, static_cast<char>(b));
    return arr;
  }();
  if (id < 0 || static_cast<std::size_t>(id) >= vocab_size()) {
    throw DomainError("UnknownId", "token id " + std::to_string(id) + " out of range (vocab " +
                                       std::to_string(vocab_size()) + ")");
  }
  std::size_t i = static_cast<std::size_t>(id);
  if (i < specials.size()) return specials[i];
  i -= specials.size();
  if (i < 256) return byte_strings[i];
  return merge_results[i - 256];
}

std::string escape_token_bytes(const std::string& raw) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c >= 0x20 && c <= 0x7E) {
      out += static_cast<char>(c);
    } else {
      out += "\\x";
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

std::string unescape_token_bytes(const std::string& escaped) {
  auto hexv = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    char c = escaped[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    if (i + 1 >= escaped.size()) corrupt("dangling escape in token string");
    char n = escaped[++i];
    if (n == '\\') {
      out += '\\';
    } else if (n == 'x') {
      if (i + 2 >= escaped.size()) corrupt("truncated \\x escape");
      int hi = hexv(escaped[i + 1]), lo = hexv(escaped[i + 2]);
      if (hi < 0 || lo < 0) corrupt("bad \\x escape digits");
      out += static_cast<char>(hi * 16 + lo);
      i += 2;
    } else {
      corrupt("unknown escape '\\" + std::string(1, n) + "'");
    }
  }
  return out;
}

std::string save_model(const TokenizerModel& model) {
  nlohmann::json j;
  j["version"] = model.version;
  nlohmann::json specials = nlohmann::json::array();
  for (const auto& s : model.specials) specials.push_back(escape_token_bytes(s));
  j["specials"] = std::move(specials);
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& [l, r] : model.merges) {
    merges.push_back({escape_token_bytes(l), escape_token_bytes(r)});
  }
  j["merges"] = std::move(merges);
  return j.dump() + "\n";
}

void save_model(const TokenizerModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << save_model(model);
}

TokenizerModel load_model_from_string(const std::string& file_content) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(file_content);
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version") || !j["version"].is_string()) {
    corrupt("missing version field");
  }
  if (j["version"].get<std::string>() != kVersion) {
    throw DomainError("FormatVersionMismatch",
                      "model version '" + j["version"].get<std::string>() + "', expected '" +
                          kVersion + "'");
  }
  if (!j.contains("specials") || !j["specials"].is_array()) corrupt("missing specials array");
  if (!j.contains("merges") || !j["merges"].is_array()) corrupt("missing merges array");

  TokenizerModel model;
  for (const auto& s : j["specials"]) {
    if (!s.is_string()) corrupt("special is not a string");
    model.specials.push_back(unescape_token_bytes(s.get<std::string>()));
  }
  for (const auto& m : j["merges"]) {
    if (!m.is_array() || m.size() != 2 || !m[0].is_string() || !m[1].is_string()) {
      corrupt("merge entry is not a [left,right] pair");
    }
    model.merges.emplace_back(unescape_token_bytes(m[0].get<std::string>()),
                              unescape_token_bytes(m[1].get<std::string>()));
  }
  model.rebuild_index();
  return model;
}

TokenizerModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_model_from_string(ss.str());
}

}  // namespace mathrec::bpe
