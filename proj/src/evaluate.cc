#include "fusum/evaluate.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <stdexcept>

namespace fusum {

namespace {

using UnitCounts = std::map<std::string, long>;

long total(const UnitCounts &units) {
  long n = 0;
  for (const auto &[unit, count] : units) n += count;
  return n;
}

long clipped_matches(const UnitCounts &candidate, const UnitCounts &reference) {
  long n = 0;
  for (const auto &[unit, count] : candidate) {
    auto it = reference.find(unit);
    if (it != reference.end()) n += std::min(count, it->second);
  }
  return n;
}

UnitCounts ngrams(const std::vector<std::string> &tokens, int n) {
  UnitCounts units;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) key += ' ' + tokens[i + k];
    ++units[key];
  }
  return units;
}

UnitCounts skip_units(const std::vector<std::string> &tokens, int max_gap) {
  UnitCounts units;
  for (size_t i = 0; i < tokens.size(); ++i) {
    ++units[tokens[i]];
    for (size_t j = i + 1; j < tokens.size() && j - i - 1 <= static_cast<size_t>(max_gap); ++j) {
      ++units[tokens[i] + ' ' + tokens[j]];
    }
  }
  return units;
}

template <typename UnitsFn>
RougeScore score_against(const std::vector<std::string> &candidate,
                         const std::vector<std::vector<std::string>> &references,
                         MultiReference mode, UnitsFn units_of) {
  if (references.empty()) return RougeScore{};
  const UnitCounts cand = units_of(candidate);
  const long cand_total = total(cand);
  std::vector<RougeScore> scores;
  for (const auto &reference : references) {
    const UnitCounts ref = units_of(reference);
    scores.push_back(RougeScore::FromCounts(clipped_matches(cand, ref), cand_total, total(ref)));
  }
  if (mode == MultiReference::kMax) {
    return *std::max_element(scores.begin(), scores.end(),
                             [](const RougeScore &a, const RougeScore &b) { return a.f1 < b.f1; });
  }
  double recall = 0.0;
  double precision = 0.0;
  for (const RougeScore &s : scores) {
    recall += s.recall;
    precision += s.precision;
  }
  return RougeScore::FromRates(recall / scores.size(), precision / scores.size());
}

// Short English stopword list, including meeting fillers.
constexpr std::array<std::string_view, 54> kStopwords = {
    "a",    "about", "an",    "and",   "are",  "as",    "at",   "be",   "been",
    "but",  "by",    "can",   "could", "did",  "do",    "does", "for",  "from",
    "had",  "has",   "have",  "he",    "her",  "his",   "i",    "if",   "in",
    "is",   "it",    "its",   "me",    "my",   "not",   "of",   "on",   "or",
    "our",  "she",   "so",    "that",  "the",  "their", "them", "they", "this",
    "to",   "um",    "uh",    "was",   "we",   "were",  "with", "you",  "your"};

}  // namespace

RougeScore RougeScore::FromCounts(long matches, long candidate_units, long reference_units) {
  const double recall =
      reference_units > 0 ? static_cast<double>(matches) / reference_units : 0.0;
  const double precision =
      candidate_units > 0 ? static_cast<double>(matches) / candidate_units : 0.0;
  return FromRates(recall, precision);
}

RougeScore RougeScore::FromRates(double recall, double precision) {
  const double denom = recall + precision;
  return RougeScore{recall, precision, denom > 0.0 ? 2.0 * precision * recall / denom : 0.0};
}

std::vector<std::string> tokenize_for_rouge(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      current += static_cast<char>(std::tolower(u));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool is_rouge_stopword(std::string_view word) {
  return std::find(kStopwords.begin(), kStopwords.end(), word) != kStopwords.end();
}

std::vector<std::string> preprocess_tokens(std::vector<std::string> tokens,
                                           const RougeOptions &options) {
  if (options.remove_stopwords) {
    std::erase_if(tokens, [](const std::string &t) { return is_rouge_stopword(t); });
  }
  if (options.stem) {
    for (std::string &t : tokens) t = porter_stem(t);
  }
  return tokens;
}

RougeScore rouge_n(const std::vector<std::string> &candidate,
                   const std::vector<std::vector<std::string>> &references, int n,
                   MultiReference mode) {
  if (n < 1) throw std::invalid_argument("rouge_n requires n >= 1");
  return score_against(candidate, references, mode,
                       [n](const std::vector<std::string> &t) { return ngrams(t, n); });
}

RougeScore rouge_su(const std::vector<std::string> &candidate,
                    const std::vector<std::vector<std::string>> &references, int max_gap,
                    MultiReference mode) {
  if (max_gap < 0) throw std::invalid_argument("rouge_su requires max_gap >= 0");
  return score_against(candidate, references, mode, [max_gap](const std::vector<std::string> &t) {
    return skip_units(t, max_gap);
  });
}

}  // namespace fusum
