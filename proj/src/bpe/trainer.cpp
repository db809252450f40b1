#include <istream>
#include <map>
#include <string>

#include "mathrec/bpe/bpe.hpp"

namespace mathrec::bpe {

namespace {

std::uint64_t pack(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

struct WorkSegment {
  std::vector<int> symbols;  // indices into the symbol string table
  long long count = 0;
};

}  // namespace

TokenizerModel train_bpe(const std::vector<std::string>& corpus, const TrainOptions& options) {
  TokenizerModel model;
  model.specials = options.special_tokens;
  try {
    model.rebuild_index();  // validates the special list
  } catch (const DomainError& e) {
    throw DomainError("BadSpecials", e.what());
  }

  const std::size_t floor = model.specials.size() + 256;
  if (options.vocab_size < floor) {
    throw DomainError("VocabTooSmall",
                      "vocab_size " + std::to_string(options.vocab_size) + " < specials+alphabet " +
                          std::to_string(floor));
  }
  if (corpus.empty()) throw DomainError("EmptyCorpus", "training corpus has no documents");

  // Collapse the corpus into distinct byte segments with occurrence counts.
  // Specials are removed up front so no merge can cross their boundaries.
  std::map<std::string, long long> segment_counts;
  for (const auto& doc : corpus) {
    for (const Segment& seg : split_on_specials(model, doc)) {
      if (!seg.is_special) segment_counts[doc.substr(seg.begin, seg.end - seg.begin)] += 1;
    }
  }

  // Local symbol table: 0..255 are bytes, later entries are merge results.
  std::vector<std::string> symbol_strings(256);
  for (int b = 0; b < 256; ++b) symbol_strings[b] = std::string(1, static_cast<char>(b));

  std::vector<WorkSegment> segments;
  segments.reserve(segment_counts.size());
  for (const auto& [bytes, count] : segment_counts) {
    WorkSegment ws;
    ws.count = count;
    ws.symbols.reserve(bytes.size());
    for (unsigned char c : bytes) ws.symbols.push_back(c);
    segments.push_back(std::move(ws));
  }

  const std::size_t target_merges = options.vocab_size - floor;
  while (model.merges.size() < target_merges) {
    std::unordered_map<std::uint64_t, long long> pair_counts;
    for (const auto& seg : segments) {
      for (std::size_t k = 0; k + 1 < seg.symbols.size(); ++k) {
        pair_counts[pack(seg.symbols[k], seg.symbols[k + 1])] += seg.count;
      }
    }

    // Highest count; ties by smallest concatenated string, then smaller left.
    // The explicit total order makes the result independent of hash order.
    bool have_best = false;
    long long best_count = 0;
    int best_left = 0, best_right = 0;
    std::string best_concat, best_left_str;
    for (const auto& [key, count] : pair_counts) {
      if (count < 2) continue;
      int left = static_cast<int>(key >> 32);
      int right = static_cast<int>(key & 0xFFFFFFFFu);
      std::string concat = symbol_strings[left] + symbol_strings[right];
      bool better = false;
      if (!have_best || count > best_count) {
        better = true;
      } else if (count == best_count) {
        if (concat < best_concat) {
          better = true;
        } else if (concat == best_concat && symbol_strings[left] < best_left_str) {
          better = true;
        }
      }
      if (better) {
        have_best = true;
        best_count = count;
        best_left = left;
        best_right = right;
        best_concat = std::move(concat);
        best_left_str = symbol_strings[left];
      }
    }
    if (!have_best) break;  // nothing occurs twice; further merges are pointless

    const int new_symbol = static_cast<int>(symbol_strings.size());
    symbol_strings.push_back(best_concat);
    model.merges.emplace_back(symbol_strings[best_left], symbol_strings[best_right]);

    for (auto& seg : segments) {
      auto& syms = seg.symbols;
      if (syms.size() < 2) continue;
      std::vector<int> next;
      next.reserve(syms.size());
      std::size_t k = 0;
      while (k < syms.size()) {
        if (k + 1 < syms.size() && syms[k] == best_left && syms[k + 1] == best_right) {
          next.push_back(new_symbol);
          k += 2;
        } else {
          next.push_back(syms[k]);
          ++k;
        }
      }
      syms = std::move(next);
    }
  }

  model.rebuild_index();
  return model;
}

TokenizerModel train_bpe(std::istream& corpus_lines, const TrainOptions& options) {
  std::vector<std::string> corpus;
  std::string line;
  while (std::getline(corpus_lines, line)) corpus.push_back(line);
  return train_bpe(corpus, options);
}

}  // namespace mathrec::bpe
