#ifndef FUSUM_EVALUATE_H_
#define FUSUM_EVALUATE_H_

#include <string>
#include <string_view>
#include <vector>

namespace fusum {

struct RougeScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;

  static RougeScore FromCounts(long matches, long candidate_units, long reference_units);
  static RougeScore FromRates(double recall, double precision);
};

enum class MultiReference { kMean, kMax };

struct RougeOptions {
  bool stem = false;
  bool remove_stopwords = false;
  MultiReference multi_reference = MultiReference::kMean;
};

// Lowercases and splits on every run of non-alphanumeric characters.
std::vector<std::string> tokenize_for_rouge(std::string_view text);

// Applies the stopword and stemming options to tokenized text.
std::vector<std::string> preprocess_tokens(std::vector<std::string> tokens,
                                           const RougeOptions &options);

std::string porter_stem(std::string_view word);
bool is_rouge_stopword(std::string_view word);

// Clipped n-gram overlap against each reference, combined across
// references by mean (recall and precision averaged, f1 recomputed) or by
// taking the reference with the best f1.
RougeScore rouge_n(const std::vector<std::string> &candidate,
                   const std::vector<std::vector<std::string>> &references, int n,
                   MultiReference mode = MultiReference::kMean);

// Skip-bigrams with at most `max_gap` words in between, plus unigrams.
RougeScore rouge_su(const std::vector<std::string> &candidate,
                    const std::vector<std::vector<std::string>> &references,
                    int max_gap = 4, MultiReference mode = MultiReference::kMean);

}  // namespace fusum

#endif  // FUSUM_EVALUATE_H_
