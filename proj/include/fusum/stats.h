#ifndef FUSUM_STATS_H_
#define FUSUM_STATS_H_

#include <map>
#include <string>
#include <string_view>

#include "fusum/corpus.h"

namespace fusum {

struct GovernorKey {
  std::string word;  // lowercased
  std::string pos;

  auto operator<=>(const GovernorKey &) const = default;
};

// Key used for arcs governed by an utterance's ROOT. It never occurs as a
// token governor, so its lookups use the global label distribution.
GovernorKey root_governor_key();

// Outgoing-label counts per governor, plus the global label distribution
// used for unseen governors.
struct LabelStats {
  std::map<GovernorKey, std::map<std::string, long>> counts;
  std::map<std::string, long> global_label_counts;
  long total_global = 0;

  // Rows are "word<TAB>pos<TAB>label<TAB>count", sorted; global counts use
  // the reserved key "*<TAB>*".
  std::string Serialize() const;
  static LabelStats Parse(std::string_view text);

  // Adds all counts from `other` (shard merge).
  void Merge(const LabelStats &other);
};

struct FrequencyModel {
  std::map<std::string, long> word_counts;  // lowercased word -> F_w
  long total = 0;                           // F_A

  // "#total<TAB>F_A" then "word<TAB>count" rows, sorted.
  std::string Serialize() const;
  static FrequencyModel Parse(std::string_view text);
};

inline constexpr double kLabelProbabilityFloor = 1e-6;

LabelStats count_label_stats(const BackgroundCorpus &corpus);

// p(l|g): relative frequency of l among g's outgoing labels; the global
// distribution when g is unseen; kLabelProbabilityFloor when neither has l.
double label_probability(const LabelStats &stats, const GovernorKey &g,
                         std::string_view label);

FrequencyModel build_frequency_model(const BackgroundCorpus &corpus);

// f_seg * ln(F_A / F_w), with F_w = 1 for unseen words, clamped at 0.
double informativeness(const FrequencyModel &fm, std::string_view word,
                       long segment_frequency);

// p_x / N. Throws if p_x is outside 1..N.
double position_weight(int position, int segment_size);

}  // namespace fusum

#endif  // FUSUM_STATS_H_
