#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mathrec/common/error.hpp"

namespace mathrec::bpe {

// Byte-level BPE with atomic special tokens. Ids are positional: specials in
// list order, then the 256 byte values, then one id per merge.
struct TokenizerModel {
  std::string version = "bpe-math/1";
  std::vector<std::string> specials;
  std::vector<std::pair<std::string, std::string>> merges;

  std::size_t vocab_size() const { return specials.size() + 256 + merges.size(); }
  int byte_id(unsigned char b) const { return static_cast<int>(specials.size()) + b; }

  // Validates invariants and rebuilds lookup structures. Throws
  // DomainError("CorruptModel") on violations.
  void rebuild_index();

  const std::string& token_string(int id) const;  // throws UnknownId

  // Derived state (filled by rebuild_index).
  std::vector<std::string> merge_results;                  // concat per merge
  std::unordered_map<std::string, int> special_id;
  std::array<std::vector<int>, 256> specials_by_first;     // indices, longest first
  std::unordered_map<std::uint64_t, int> merge_rank;       // packed id pair -> rank
  std::unordered_map<std::string, int> piece_id;           // token string -> id (bytes+merges)

  bool operator==(const TokenizerModel& o) const {
    return version == o.version && specials == o.specials && merges == o.merges;
  }
};

struct TrainOptions {
  std::size_t vocab_size = 0;
  std::vector<std::string> special_tokens;
};

// Deterministic: merges chosen by highest pair frequency; ties broken by the
// lexicographically smallest concatenated pair, then the smaller left token.
// Stops early when no adjacent pair occurs at least twice.
// Throws DomainError codes VocabTooSmall / EmptyCorpus / BadSpecials.
TokenizerModel train_bpe(const std::vector<std::string>& corpus, const TrainOptions& options);
TokenizerModel train_bpe(std::istream& corpus_lines, const TrainOptions& options);

// Total on arbitrary bytes; decode(encode(s)) == s.
std::vector<int> encode(const TokenizerModel& model, const std::string& input);
std::string decode(const TokenizerModel& model, const std::vector<int>& ids);

// Longest-match left-to-right segmentation used by both training and encode.
// Emits (is_special, begin, end) byte spans covering the whole input.
struct Segment {
  bool is_special = false;
  std::size_t begin = 0;
  std::size_t end = 0;
};
std::vector<Segment> split_on_specials(const TokenizerModel& model, const std::string& input);

// Versioned JSON model file; token strings escape non-printable bytes as
// lowercase \xNN and backslash as \\. Bit-exact round trip.
std::string save_model(const TokenizerModel& model);
void save_model(const TokenizerModel& model, const std::string& path);
TokenizerModel load_model_from_string(const std::string& file_content);
TokenizerModel load_model(const std::string& path);

std::string escape_token_bytes(const std::string& raw);
std::string unescape_token_bytes(const std::string& escaped);  // throws CorruptModel

}  // namespace mathrec::bpe
