#include <limits>

#include "mathrec/bpe/bpe.hpp"

namespace mathrec::bpe {

namespace {

std::uint64_t pack(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

std::vector<Segment> split_on_specials(const TokenizerModel& model, const std::string& input) {
  std::vector<Segment> out;
  std::size_t i = 0;
  std::size_t plain_begin = 0;
  auto flush_plain = [&](std::size_t end) {
    if (end > plain_begin) out.push_back(Segment{false, plain_begin, end});
  };
  while (i < input.size()) {
    const auto& bucket = model.specials_by_first[static_cast<unsigned char>(input[i])];
    int matched = -1;
    for (int idx : bucket) {
      const std::string& s = model.specials[idx];
      if (s.size() <= input.size() - i && input.compare(i, s.size(), s) == 0) {
        matched = idx;
        break;  // bucket is sorted longest first
      }
    }
    if (matched >= 0) {
      flush_plain(i);
      out.push_back(Segment{true, i, i + model.specials[matched].size()});
      i += model.specials[matched].size();
      plain_begin = i;
    } else {
      ++i;
    }
  }
  flush_plain(input.size());
  return out;
}

namespace {

// Applies merges in rank order: repeatedly merge every occurrence of the
// lowest-rank adjacent pair, left to right. Equivalent to replaying the merge
// list pass by pass.
void merge_segment(const TokenizerModel& model, std::vector<int>& ids) {
  while (ids.size() >= 2) {
    int best_rank = std::numeric_limits<int>::max();
    for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
      auto it = model.merge_rank.find(pack(ids[k], ids[k + 1]));
      if (it != model.merge_rank.end() && it->second < best_rank) best_rank = it->second;
    }
    if (best_rank == std::numeric_limits<int>::max()) break;
    const int merged_id = static_cast<int>(model.specials.size()) + 256 + best_rank;
    std::vector<int> next;
    next.reserve(ids.size());
    std::size_t k = 0;
    while (k < ids.size()) {
      if (k + 1 < ids.size()) {
        auto it = model.merge_rank.find(pack(ids[k], ids[k + 1]));
        if (it != model.merge_rank.end() && it->second == best_rank) {
          next.push_back(merged_id);
          k += 2;
          continue;
        }
      }
      next.push_back(ids[k]);
      ++k;
    }
    ids = std::move(next);
  }
}

}  // namespace

std::vector<int> encode(const TokenizerModel& model, const std::string& input) {
  std::vector<int> out;
  for (const Segment& seg : split_on_specials(model, input)) {
    if (seg.is_special) {
      out.push_back(model.special_id.at(input.substr(seg.begin, seg.end - seg.begin)));
      continue;
    }
    std::vector<int> ids;
    ids.reserve(seg.end - seg.begin);
    for (std::size_t i = seg.begin; i < seg.end; ++i) {
      ids.push_back(model.byte_id(static_cast<unsigned char>(input[i])));
    }
    merge_segment(model, ids);
    out.insert(out.end(), ids.begin(), ids.end());
  }
  return out;
}

std::string decode(const TokenizerModel& model, const std::vector<int>& ids) {
  std::string out;
  for (int id : ids) out += model.token_string(id);
  return out;
}

}  // namespace mathrec::bpe
