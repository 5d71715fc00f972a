#include "fusum/anaphora.h"

#include <algorithm>
#include <charconv>

namespace fusum {

namespace {

bool is_demonstrative(std::string_view word) {
  return word == "this" || word == "that" || word == "these" || word == "those";
}

// Dependents that may be carried along with an antecedent noun.
bool is_np_modifier(std::string_view label) {
  return label == "det" || label == "predet" || label == "amod" ||
         label == "nn" || label == "compound" || label == "num" ||
         label == "nummod" || label == "poss" || label == "nmod:poss" ||
         label == "possessive" || label == "case" || label == "advmod";
}

bool parse_index(std::string_view s, int *out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

struct Replacement {
  const Utterance *source = nullptr;
  AntecedentSpan span;
};

// Span head = the one token whose governor lies outside the span.
int span_head(const Utterance &u, int start, int end) {
  int head = 0;
  for (int i = start; i <= end; ++i) {
    int h = u.token(i).head;
    if (h < start || h > end) {
      if (head != 0) return 0;
      head = i;
    }
  }
  return head;
}

Utterance substitute(const Utterance &u,
                     const std::map<int, Replacement> &replacements) {
  std::vector<int> new_index(u.size() + 1, 0);
  int next = 1;
  for (const Token &t : u.tokens) {
    auto it = replacements.find(t.index);
    if (it == replacements.end()) {
      new_index[t.index] = next++;
    } else {
      const AntecedentSpan &span = it->second.span;
      new_index[t.index] = next + (span.head - span.start);
      next += span.length();
    }
  }

  Utterance out = u;
  out.tokens.clear();
  for (const Token &t : u.tokens) {
    auto it = replacements.find(t.index);
    if (it == replacements.end()) {
      Token copy = t;
      copy.index = new_index[t.index];
      copy.head = t.head == 0 ? 0 : new_index[t.head];
      out.tokens.push_back(std::move(copy));
      continue;
    }
    const Utterance &src = *it->second.source;
    const AntecedentSpan &span = it->second.span;
    const int base = new_index[t.index] - (span.head - span.start);
    for (int i = span.start; i <= span.end; ++i) {
      Token copy = src.token(i);
      copy.index = base + (i - span.start);
      if (i == span.head) {
        copy.head = t.head == 0 ? 0 : new_index[t.head];
        copy.label = t.label;
      } else {
        copy.head = base + (copy.head - span.start);
      }
      out.tokens.push_back(std::move(copy));
    }
  }
  return out;
}

}  // namespace

PronounLexicon PronounLexicon::Default() {
  return PronounLexicon{{"it", "its", "this", "that"},
                        {"they", "them", "their", "these", "those"}};
}

PronounLexicon PronounLexicon::Parse(std::string_view text) {
  PronounLexicon lexicon;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> cols = split(line, '\t');
    if (cols.size() != 2 || cols[1].empty()) {
      throw ParseError("expected singular|plural<TAB>word", line_no);
    }
    std::string word = to_lower(cols[1]);
    if (cols[0] == "singular") {
      lexicon.singular.insert(word);
    } else if (cols[0] == "plural") {
      lexicon.plural.insert(word);
    } else {
      throw ParseError("unknown pronoun class '" + std::string(cols[0]) + "'",
                       line_no);
    }
    if (lexicon.singular.count(word) && lexicon.plural.count(word)) {
      throw ParseError("'" + word + "' listed as both singular and plural", line_no);
    }
  }
  return lexicon;
}

std::optional<Number> PronounLexicon::classify(const Token &token) const {
  const std::string word = to_lower(token.surface);
  std::optional<Number> number;
  if (singular.count(word)) number = Number::kSingular;
  else if (plural.count(word)) number = Number::kPlural;
  if (number && is_demonstrative(word) && !is_pronoun_tag(token.pos)) {
    return std::nullopt;
  }
  return number;
}

std::optional<AntecedentSpan> find_antecedent(const Token &pronoun,
                                              const Utterance &previous,
                                              const PronounLexicon &lexicon,
                                              int max_span) {
  std::optional<Number> wanted = lexicon.classify(pronoun);
  if (!wanted || max_span < 1) return std::nullopt;

  for (int i = previous.size(); i >= 1; --i) {
    const Token &cand = previous.token(i);
    if (!is_noun(cand.pos) || lexicon.classify(cand)) continue;
    // A noun modifying another noun is not a head ("remote" in "remote control").
    if ((cand.label == "nn" || cand.label == "compound") && cand.head != 0 &&
        is_noun(previous.token(cand.head).pos)) {
      continue;
    }
    if (noun_number(cand.pos, cand.surface) != *wanted) continue;

    int start = i;
    while (start > 1) {
      const Token &left = previous.token(start - 1);
      if (left.head < start || left.head > i) break;
      if (!is_np_modifier(left.label) || lexicon.classify(left)) break;
      --start;
    }
    start = std::max(start, i - max_span + 1);
    return AntecedentSpan{previous.id, start, i, i};
  }
  return std::nullopt;
}

CorefChains CorefChains::Parse(std::string_view text) {
  CorefChains chains;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> cols = split(line, '\t');
    if (cols.size() != 3) throw ParseError("expected 3 tab-separated columns", line_no);

    auto colon = [&](std::string_view field) {
      size_t c = field.rfind(':');
      if (c == std::string_view::npos || c == 0) {
        throw ParseError("expected utt_id:index in '" + std::string(field) + "'",
                         line_no);
      }
      return c;
    };
    size_t c1 = colon(cols[1]);
    int tok = 0;
    if (!parse_index(cols[1].substr(c1 + 1), &tok) || tok < 1) {
      throw ParseError("bad pronoun index in '" + std::string(cols[1]) + "'", line_no);
    }
    size_t c2 = colon(cols[2]);
    std::string_view range = cols[2].substr(c2 + 1);
    size_t dash = range.find('-');
    AntecedentSpan span;
    span.utterance_id = std::string(cols[2].substr(0, c2));
    bool ok = dash == std::string_view::npos
                  ? parse_index(range, &span.start) && parse_index(range, &span.end)
                  : parse_index(range.substr(0, dash), &span.start) &&
                        parse_index(range.substr(dash + 1), &span.end);
    if (!ok || span.start < 1 || span.end < span.start) {
      throw ParseError("bad antecedent range in '" + std::string(cols[2]) + "'",
                       line_no);
    }
    chains.links_[{std::string(cols[0]), std::string(cols[1].substr(0, c1)), tok}] =
        span;
  }
  return chains;
}

const AntecedentSpan *CorefChains::lookup(const std::string &segment_id,
                                          const std::string &utterance_id,
                                          int token_index) const {
  auto it = links_.find({segment_id, utterance_id, token_index});
  return it == links_.end() ? nullptr : &it->second;
}

TopicSegment resolve_segment(const TopicSegment &segment,
                             const PronounLexicon &lexicon, int max_span,
                             const CorefChains *chains) {
  TopicSegment out;
  out.id = segment.id;
  out.utterances.reserve(segment.utterances.size());

  for (size_t ui = 0; ui < segment.utterances.size(); ++ui) {
    const Utterance &u = segment.utterances[ui];
    std::map<int, Replacement> replacements;

    for (const Token &t : u.tokens) {
      const AntecedentSpan *linked =
          chains ? chains->lookup(segment.id, u.id, t.index) : nullptr;
      if (linked) {
        const Utterance *src = nullptr;
        for (size_t j = 0; j < ui; ++j) {
          if (segment.utterances[j].id == linked->utterance_id) {
            src = &segment.utterances[j];
          }
        }
        if (!src) {
          throw Error("coreference link for " + u.id + ":" + std::to_string(t.index) +
                      " names utterance " + linked->utterance_id +
                      ", which does not precede it in segment " + segment.id);
        }
        if (linked->end > src->size()) {
          throw Error("coreference span " + linked->utterance_id + ":" +
                      std::to_string(linked->start) + "-" +
                      std::to_string(linked->end) + " is out of range");
        }
        AntecedentSpan span = *linked;
        span.head = span_head(*src, span.start, span.end);
        if (span.head == 0) {
          throw Error("coreference span " + span.utterance_id + ":" +
                      std::to_string(span.start) + "-" + std::to_string(span.end) +
                      " is not a single subtree");
        }
        replacements[t.index] = Replacement{src, span};
        continue;
      }
      if (ui == 0) continue;
      const Utterance &previous = out.utterances[ui - 1];
      if (auto span = find_antecedent(t, previous, lexicon, max_span)) {
        replacements[t.index] = Replacement{&out.utterances[ui - 1], *span};
      }
    }

    if (replacements.empty()) {
      out.utterances.push_back(u);
    } else {
      // `replacements` may point into out.utterances; build before pushing.
      Utterance resolved = substitute(u, replacements);
      out.utterances.push_back(std::move(resolved));
    }
  }
  return out;
}

}  // namespace fusum
