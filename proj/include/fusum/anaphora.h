#ifndef FUSUM_ANAPHORA_H_
#define FUSUM_ANAPHORA_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>

#include "fusum/corpus.h"
#include "fusum/pos_tags.h"

namespace fusum {

// Third-person pronouns eligible for substitution, split by number.
struct PronounLexicon {
  std::set<std::string> singular;
  std::set<std::string> plural;

  // {it, its, this, that} and {they, them, their, these, those}.
  static PronounLexicon Default();

  // One "singular<TAB>word" or "plural<TAB>word" entry per line.
  static PronounLexicon Parse(std::string_view text);

  // Number class of the token if it is a substitutable pronoun. The
  // demonstratives only count when tagged as pronouns, so "this remote"
  // is left alone.
  std::optional<Number> classify(const Token &token) const;
};

struct AntecedentSpan {
  std::string utterance_id;
  int start = 0;  // inclusive token indices
  int end = 0;
  int head = 0;

  int length() const { return end - start + 1; }
  bool operator==(const AntecedentSpan &) const = default;
};

// Rightmost noun head in `previous` agreeing in number with the pronoun,
// widened leftwards over its determiner/adjective/noun-modifier dependents
// and clipped to the `max_span` tokens nearest the head.
std::optional<AntecedentSpan> find_antecedent(const Token &pronoun,
                                              const Utterance &previous,
                                              const PronounLexicon &lexicon,
                                              int max_span);

// Externally supplied antecedents keyed by (segment, utterance, token).
// Lines read "segment_id<TAB>utt_id:tok_idx<TAB>utt_id:start-end"; token
// indices refer to the utterances as parsed, before any substitution.
class CorefChains {
 public:
  static CorefChains Parse(std::string_view text);

  const AntecedentSpan *lookup(const std::string &segment_id,
                               const std::string &utterance_id,
                               int token_index) const;
  size_t size() const { return links_.size(); }

 private:
  std::map<std::tuple<std::string, std::string, int>, AntecedentSpan> links_;
};

// Replaces resolvable pronouns in utterances 2..N with copies of their
// antecedent spans from the preceding (already resolved) utterance. The
// pronoun's incoming arc moves to the copied span head and indices are
// renumbered. Unresolvable pronouns stay as they are.
TopicSegment resolve_segment(const TopicSegment &segment,
                             const PronounLexicon &lexicon, int max_span,
                             const CorefChains *chains = nullptr);

}  // namespace fusum

#endif  // FUSUM_ANAPHORA_H_
