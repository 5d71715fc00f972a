#ifndef FUSUM_PIPELINE_H_
#define FUSUM_PIPELINE_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fusum/anaphora.h"
#include "fusum/corpus.h"
#include "fusum/evaluate.h"
#include "fusum/fusion.h"
#include "fusum/ilp_model.h"
#include "fusum/ilp_solver.h"
#include "fusum/linearize.h"
#include "fusum/stats.h"
#include "json.hpp"

namespace fusum {

struct PipelineConfig {
  ModelConfig model;
  std::string lexicon_path;  // empty: built-in lexicon
  std::string chains_path;   // empty: heuristic antecedents only
  bool anaphora = true;
  int max_span = 5;
  PosColumn pos_column = PosColumn::kUpos;
  MultiReference multi_ref = MultiReference::kMean;
  bool stem = false;
  bool stopwords = false;
  long node_cap = 10'000'000;
  int jobs = 1;

  // Applies one key=value setting. Throws on unknown keys or bad values.
  void Set(std::string_view key, std::string_view value);
  // Flat "key = value" lines; '#' starts a comment.
  void LoadFile(const std::string &path);
  // FUSUM_<KEY> variables, e.g. FUSUM_MAX_NODES=12.
  void LoadEnvironment();
  void Validate() const;

  static const std::vector<std::string> &Keys();
};

struct StatsCaches {
  LabelStats labels;
  FrequencyModel frequencies;
};

std::string labels_path(const std::string &prefix);       // <prefix>.labels.tsv
std::string frequencies_path(const std::string &prefix);  // <prefix>.freq.tsv

StatsCaches build_stats(const BackgroundCorpus &corpus);
void write_stats(const StatsCaches &stats, const std::string &prefix);
StatsCaches load_stats(const std::string &prefix);

struct SegmentResult {
  SummarySentence sentence;
  nlohmann::json trace;
  std::string graph_dump;
  std::string model_dump;
};

// Anaphora -> fusion -> model -> solve -> linearize for one segment.
// Failures are rethrown with the segment id prefixed.
SegmentResult summarize_segment(const TopicSegment &segment, const StatsCaches &stats,
                                const PipelineConfig &config, const PronounLexicon &lexicon,
                                const CorefChains *chains);

struct SummaryRun {
  std::vector<SegmentResult> segments;  // manifest order
  std::string summary_text;             // one line per segment
  std::string trace_jsonl;              // one JSON object per segment
};

// Runs every segment, on config.jobs worker threads when > 1. Output order
// is the manifest order regardless of completion order.
SummaryRun summarize_all(const std::vector<TopicSegment> &segments, const StatsCaches &stats,
                         const PipelineConfig &config);

// Scores every candidate file against the same-named reference (a file,
// or a directory whose files are alternative references). Returns TSV
// "doc metric recall precision f1" rows plus MEAN rows.
std::string evaluate_directories(const std::string &candidates_dir,
                                 const std::string &references_dir,
                                 const RougeOptions &options);

}  // namespace fusum

#endif  // FUSUM_PIPELINE_H_
