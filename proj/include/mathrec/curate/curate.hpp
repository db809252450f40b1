#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mathrec/latex/tables.hpp"
#include "mathrec/metrics/metrics.hpp"

namespace mathrec::curate {

using metrics::Tier;

struct SampleStats {
  int token_len = 0;
  int line_count = 1;
  int depth = 0;
  int distinct_commands = 0;
};

struct Sample {
  std::string id;
  std::string latex;
  std::optional<std::string> image_ref;
  std::optional<SampleStats> stats;
  std::optional<Tier> tier;
  std::vector<std::string> diagnostics;
};

struct CurationConfig {
  std::vector<std::string> strip_tags = {"cite", "label", "ref",
                                         "eqref", "tag", "footnote", "index"};
  int min_tokens = 3;
  int max_tokens = 1 << 20;
  bool require_strict_parse = true;
  std::vector<int> length_bucket_edges = {20, 150, 300, 450};
  std::vector<int> line_bucket_edges = {1, 2, 3, 4, 5};
  enum class LengthUnit { LexerTokens, Chars } length_unit = LengthUnit::LexerTokens;

  void validate() const;  // throws DomainError("BadConfig")
};

struct DifficultyProfile {
  double w_len = 0.4, w_lines = 0.3, w_depth = 0.2, w_vocab = 0.1;
  double len_cap = 450, lines_cap = 5, depth_cap = 8, vocab_cap = 40;
  double easy_below = 0.25, moderate_below = 0.55;

  void validate() const;  // throws DomainError("InvalidProfile")
};

// Removes each strip-tag command with its bracketed/braced arguments and
// collapses the surrounding whitespace. Inputs with no strip tags pass
// through byte-identical; regions where an argument cannot be matched are
// left untouched and reported in `diagnostics`.
std::string clean(const std::string& latex_input, const CurationConfig& config,
                  std::vector<std::string>* diagnostics = nullptr);

struct ValidationResult {
  bool ok = true;
  std::vector<std::string> reasons;  // Malformed / TooSimplistic / TooLong
};

ValidationResult is_valid(const std::string& cleaned_latex, const CurationConfig& config);

// Measured length in the configured unit (lexer tokens by default).
int measured_length(const std::string& latex_input, const CurationConfig& config);

// FNV-1a 64 over the canonical form render(normalize(parse_lenient(x))),
// printed as 16 hex digits.
std::string dedup_key(const std::string& latex_input);

SampleStats compute_stats(const std::string& latex_input, const CurationConfig& config);

double difficulty_score(const SampleStats& stats, const DifficultyProfile& profile);
Tier assign_tier(double score, const DifficultyProfile& profile);

// Bucketing. domain_min is 0 for token lengths and 1 for line counts; upper
// edges are inclusive and anything above the last edge lands in ">edge".
std::string bucket_label(int value, const std::vector<int>& edges, int domain_min);
std::size_t bucket_index(int value, const std::vector<int>& edges);
std::vector<std::string> bucket_labels(const std::vector<int>& edges, int domain_min);

struct BucketTable {
  std::vector<std::string> labels;
  std::vector<long long> counts;
};

struct CorpusStats {
  BucketTable by_length;
  BucketTable by_lines;
  long long valid = 0;
  long long invalid = 0;  // undecodable manifest records

  long long total() const { return valid + invalid; }
  std::string to_json() const;
  std::string to_text() const;
};

// Single-pass accumulator with constant memory per bucket.
class StatsAccumulator {
public:
  explicit StatsAccumulator(const CurationConfig& config);
  void add(const SampleStats& stats);
  void add_invalid();
  CorpusStats finish() const;

private:
  CurationConfig config_;
  std::vector<long long> length_counts_;
  std::vector<long long> line_counts_;
  long long valid_ = 0;
  long long invalid_ = 0;
};

struct Provenance {
  std::string id;
  std::string stage;   // "validate" | "dedup"
  std::string reason;
};

struct PipelineOptions {
  CurationConfig config;
  DifficultyProfile profile;
  bool assign_tiers = true;
};

struct PipelineSummary {
  CorpusStats stats;                       // over kept samples
  std::map<std::string, long long> tier_counts;
  long long seen = 0;
  long long kept = 0;
};

// clean -> validate -> dedup (first occurrence wins) -> stats -> tier, in
// that order, deterministic in input order. Every dropped sample yields one
// provenance record. Throws DomainError("DuplicateId") on repeated ids.
class Pipeline {
public:
  Pipeline(PipelineOptions options, std::function<void(const Sample&)> emit,
           std::function<void(const Provenance&)> emit_drop);
  void feed(Sample sample);
  PipelineSummary finish();

private:
  PipelineOptions options_;
  std::function<void(const Sample&)> emit_;
  std::function<void(const Provenance&)> emit_drop_;
  std::map<std::string, std::string> key_to_id_;
  std::map<std::string, bool> seen_ids_;
  StatsAccumulator stats_;
  PipelineSummary summary_;
};

struct PipelineResult {
  std::vector<Sample> kept;
  std::vector<Provenance> dropped;
  PipelineSummary summary;
};

PipelineResult run_pipeline(const std::vector<Sample>& input, const PipelineOptions& options);

// Manifest JSONL: {"id","latex","image"?,"tier"?,"stats"?,"diagnostics"?}.
Sample sample_from_json_line(const std::string& line);  // DomainError("BadManifest")
std::string sample_to_json_line(const Sample& sample);

}  // namespace mathrec::curate
