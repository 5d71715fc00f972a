#ifndef FUSUM_POS_TAGS_H_
#define FUSUM_POS_TAGS_H_

#include <string_view>

namespace fusum {

// Tag predicates accept both Universal (UPOS) and Penn Treebank (XPOS)
// tag sets so either CoNLL-U column can drive the pipeline.

// Determiners, prepositions, conjunctions, pronouns, particles, punctuation.
bool is_closed_class(std::string_view pos);

bool is_noun(std::string_view pos);
bool is_pronoun_tag(std::string_view pos);
bool is_punctuation_tag(std::string_view pos);

enum class Number { kSingular, kPlural };

// Penn tags carry number directly (NNS, NNPS). UPOS does not, so a plural
// is guessed from an "-s" ending that is not "-ss".
Number noun_number(std::string_view pos, std::string_view surface);

// True if every character is ASCII punctuation.
bool is_punctuation_word(std::string_view surface);

}  // namespace fusum

#endif  // FUSUM_POS_TAGS_H_
