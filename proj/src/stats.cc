#include "fusum/stats.h"

#include <charconv>
#include <cmath>

namespace fusum {

namespace {

constexpr std::string_view kGlobalWord = "*";

bool parse_count(std::string_view s, long *out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

GovernorKey root_governor_key() { return GovernorKey{"<root>", "ROOT"}; }

LabelStats count_label_stats(const BackgroundCorpus &corpus) {
  if (corpus.sentences.empty() || corpus.token_count == 0) {
    throw Error("background corpus is empty");
  }
  LabelStats stats;
  for (const Utterance &u : corpus.sentences) {
    for (const Token &t : u.tokens) {
      if (t.head != 0) {
        const Token &gov = u.token(t.head);
        ++stats.counts[GovernorKey{to_lower(gov.surface), gov.pos}][t.label];
      }
      ++stats.global_label_counts[t.label];
      ++stats.total_global;
    }
  }
  return stats;
}

double label_probability(const LabelStats &stats, const GovernorKey &g,
                         std::string_view label) {
  const std::string l(label);
  auto it = stats.counts.find(g);
  if (it != stats.counts.end()) {
    long sum = 0;
    for (const auto &[name, count] : it->second) sum += count;
    auto found = it->second.find(l);
    if (found == it->second.end()) return kLabelProbabilityFloor;
    return static_cast<double>(found->second) / static_cast<double>(sum);
  }
  auto global = stats.global_label_counts.find(l);
  if (global != stats.global_label_counts.end() && stats.total_global > 0) {
    return static_cast<double>(global->second) /
           static_cast<double>(stats.total_global);
  }
  return kLabelProbabilityFloor;
}

void LabelStats::Merge(const LabelStats &other) {
  for (const auto &[key, labels] : other.counts) {
    for (const auto &[label, count] : labels) counts[key][label] += count;
  }
  for (const auto &[label, count] : other.global_label_counts) {
    global_label_counts[label] += count;
  }
  total_global += other.total_global;
}

std::string LabelStats::Serialize() const {
  std::string out;
  for (const auto &[label, count] : global_label_counts) {
    out += "*\t*\t" + label + "\t" + std::to_string(count) + "\n";
  }
  for (const auto &[key, labels] : counts) {
    for (const auto &[label, count] : labels) {
      out += key.word + "\t" + key.pos + "\t" + label + "\t" +
             std::to_string(count) + "\n";
    }
  }
  return out;
}

LabelStats LabelStats::Parse(std::string_view text) {
  LabelStats stats;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> cols = split(line, '\t');
    long count = 0;
    if (cols.size() != 4 || !parse_count(cols[3], &count) || count < 1) {
      throw ParseError("expected word<TAB>pos<TAB>label<TAB>count", line_no);
    }
    if (cols[0] == kGlobalWord && cols[1] == kGlobalWord) {
      stats.global_label_counts[std::string(cols[2])] += count;
      stats.total_global += count;
    } else {
      stats.counts[GovernorKey{std::string(cols[0]), std::string(cols[1])}]
                  [std::string(cols[2])] += count;
    }
  }
  return stats;
}

FrequencyModel build_frequency_model(const BackgroundCorpus &corpus) {
  if (corpus.sentences.empty() || corpus.token_count == 0) {
    throw Error("background corpus is empty");
  }
  FrequencyModel fm;
  for (const Utterance &u : corpus.sentences) {
    for (const Token &t : u.tokens) {
      ++fm.word_counts[to_lower(t.surface)];
      ++fm.total;
    }
  }
  return fm;
}

std::string FrequencyModel::Serialize() const {
  std::string out = "#total\t" + std::to_string(total) + "\n";
  for (const auto &[word, count] : word_counts) {
    out += word + "\t" + std::to_string(count) + "\n";
  }
  return out;
}

FrequencyModel FrequencyModel::Parse(std::string_view text) {
  FrequencyModel fm;
  bool have_total = false;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> cols = split(line, '\t');
    long count = 0;
    if (cols.size() != 2 || !parse_count(cols[1], &count) || count < 1) {
      throw ParseError("expected word<TAB>count", line_no);
    }
    if (cols[0] == "#total") {
      fm.total = count;
      have_total = true;
    } else {
      fm.word_counts[std::string(cols[0])] = count;
    }
  }
  if (!have_total) throw ParseError("missing #total line", 0);
  for (const auto &[word, count] : fm.word_counts) {
    if (count > fm.total) throw ParseError("count for '" + word + "' exceeds #total", 0);
  }
  return fm;
}

double informativeness(const FrequencyModel &fm, std::string_view word,
                       long segment_frequency) {
  if (segment_frequency <= 0 || fm.total <= 0) return 0.0;
  auto it = fm.word_counts.find(to_lower(word));
  const double fw = it == fm.word_counts.end() ? 1.0 : static_cast<double>(it->second);
  const double score = static_cast<double>(segment_frequency) *
                       std::log(static_cast<double>(fm.total) / fw);
  return score > 0.0 ? score : 0.0;
}

double position_weight(int position, int segment_size) {
  if (segment_size < 1 || position < 1 || position > segment_size) {
    throw Error("utterance position " + std::to_string(position) +
                " outside 1.." + std::to_string(segment_size));
  }
  return static_cast<double>(position) / static_cast<double>(segment_size);
}

}  // namespace fusum
