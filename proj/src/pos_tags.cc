#include "fusum/pos_tags.h"

#include <array>
#include <cctype>

namespace fusum {

namespace {

template <size_t N>
bool contains(const std::array<std::string_view, N> &set, std::string_view tag) {
  for (std::string_view t : set) {
    if (t == tag) return true;
  }
  return false;
}

constexpr std::array<std::string_view, 9> kPunctTags = {
    "PUNCT", ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "HYPH"};

constexpr std::array<std::string_view, 19> kClosedTags = {
    // UPOS
    "DET", "ADP", "CCONJ", "SCONJ", "CONJ", "PRON", "PART",
    // Penn
    "DT", "PDT", "WDT", "IN", "CC", "PRP", "PRP$", "WP", "WP$", "RP", "TO",
    "POS"};

}  // namespace

bool is_punctuation_tag(std::string_view pos) { return contains(kPunctTags, pos); }

bool is_closed_class(std::string_view pos) {
  return contains(kClosedTags, pos) || is_punctuation_tag(pos);
}

bool is_noun(std::string_view pos) {
  return pos == "NOUN" || pos == "PROPN" || pos == "NN" || pos == "NNS" ||
         pos == "NNP" || pos == "NNPS";
}

bool is_pronoun_tag(std::string_view pos) {
  return pos == "PRON" || pos == "PRP" || pos == "PRP$" || pos == "WP" ||
         pos == "WP$";
}

Number noun_number(std::string_view pos, std::string_view surface) {
  if (pos == "NNS" || pos == "NNPS") return Number::kPlural;
  if (pos == "NN" || pos == "NNP") return Number::kSingular;
  const size_t n = surface.size();
  if (n > 2 && (surface[n - 1] == 's' || surface[n - 1] == 'S') &&
      surface[n - 2] != 's' && surface[n - 2] != 'S') {
    return Number::kPlural;
  }
  return Number::kSingular;
}

bool is_punctuation_word(std::string_view surface) {
  if (surface.empty()) return false;
  for (char c : surface) {
    if (!std::ispunct(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace fusum
