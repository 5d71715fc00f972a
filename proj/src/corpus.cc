#include "fusum/corpus.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace fusum {

namespace {

bool parse_int(std::string_view field, int *out) {
  if (field.empty()) return false;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), *out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Reads "# key = value" comments.
bool comment_value(std::string_view line, std::string_view key,
                   std::string *value) {
  line.remove_prefix(1);
  line = trim(line);
  if (line.substr(0, key.size()) != key) return false;
  line.remove_prefix(key.size());
  line = trim(line);
  if (line.empty() || line.front() != '=') return false;
  line.remove_prefix(1);
  *value = std::string(trim(line));
  return true;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed: " + path);
}

BackgroundCorpus BackgroundCorpus::FromUtterances(
    std::vector<Utterance> sentences) {
  BackgroundCorpus corpus;
  for (const Utterance &u : sentences) corpus.token_count += u.size();
  corpus.sentences = std::move(sentences);
  return corpus;
}

std::vector<std::string> validate_utterance(const Utterance &u) {
  std::vector<std::string> violations;
  const int n = u.size();
  if (n == 0) {
    violations.push_back("empty utterance");
    return violations;
  }
  int roots = 0;
  bool heads_in_range = true;
  for (int i = 0; i < n; ++i) {
    const Token &t = u.tokens[i];
    const std::string where = "token " + std::to_string(i + 1);
    if (t.index != i + 1) {
      violations.push_back(where + ": index " + std::to_string(t.index) +
                           " out of sequence");
    }
    if (t.surface.empty()) violations.push_back(where + ": empty surface");
    if (t.pos.empty()) violations.push_back(where + ": empty pos");
    if (t.head < 0 || t.head > n) {
      violations.push_back(where + ": head out of range (" +
                           std::to_string(t.head) + ")");
      heads_in_range = false;
    } else if (t.head == i + 1) {
      violations.push_back(where + ": self-loop");
      heads_in_range = false;
    }
    if (t.head == 0) ++roots;
  }
  if (roots == 0) violations.push_back("no root");
  if (roots > 1) violations.push_back("multiple roots (" + std::to_string(roots) + ")");
  if (!heads_in_range) return violations;

  // Walk up from every token; revisiting a token on the current walk is a cycle.
  std::vector<int> state(n + 1, 0);  // 0 unvisited, 1 on path, 2 done
  bool cyclic = false;
  for (int start = 1; start <= n && !cyclic; ++start) {
    std::vector<int> path;
    int cur = start;
    while (cur != 0 && state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = u.tokens[cur - 1].head;
    }
    if (cur != 0 && state[cur] == 1) cyclic = true;
    for (int p : path) state[p] = 2;
  }
  if (cyclic) violations.push_back("cycle");
  return violations;
}

std::vector<Utterance> parse_conllu(std::string_view text, PosColumn pos_column) {
  std::vector<Utterance> utterances;
  Utterance current;
  int sentence_line = 0;
  int line_no = 0;

  auto finish = [&]() {
    if (current.tokens.empty()) {
      current = Utterance();
      return;
    }
    if (current.id.empty()) current.id = "s" + std::to_string(utterances.size() + 1);
    std::vector<std::string> violations = validate_utterance(current);
    if (!violations.empty()) {
      std::string msg = "sentence " + current.id + " (line " +
                        std::to_string(sentence_line) + "): ";
      for (size_t i = 0; i < violations.size(); ++i) {
        if (i) msg += "; ";
        msg += violations[i];
      }
      throw ValidationError(msg);
    }
    utterances.push_back(std::move(current));
    current = Utterance();
  };

  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (trim(line).empty()) {
      finish();
      continue;
    }
    if (line.front() == '#') {
      std::string value;
      if (comment_value(line, "sent_id", &value)) current.id = value;
      else if (comment_value(line, "speaker", &value)) current.speaker = value;
      continue;
    }
    std::vector<std::string_view> cols = split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError("expected 10 tab-separated columns, found " +
                           std::to_string(cols.size()), line_no);
    }
    if (cols[0].find('-') != std::string_view::npos ||
        cols[0].find('.') != std::string_view::npos) {
      continue;
    }
    Token t;
    if (!parse_int(cols[0], &t.index)) {
      throw ParseError("non-integer ID '" + std::string(cols[0]) + "'", line_no);
    }
    if (!parse_int(cols[6], &t.head)) {
      throw ParseError("non-integer HEAD '" + std::string(cols[6]) + "'", line_no);
    }
    if (current.tokens.empty()) sentence_line = line_no;
    t.surface = std::string(cols[1]);
    t.pos = std::string(pos_column == PosColumn::kUpos ? cols[3] : cols[4]);
    t.label = std::string(cols[7]);
    current.tokens.push_back(std::move(t));
  }
  finish();
  return utterances;
}

std::string write_conllu(const std::vector<Utterance> &utterances) {
  std::string out;
  for (const Utterance &u : utterances) {
    out += "# sent_id = " + u.id + "\n";
    if (!u.speaker.empty()) out += "# speaker = " + u.speaker + "\n";
    for (const Token &t : u.tokens) {
      out += std::to_string(t.index) + "\t" + t.surface + "\t_\t" + t.pos +
             "\t" + t.pos + "\t_\t" + std::to_string(t.head) + "\t" + t.label +
             "\t_\t_\n";
    }
    out += "\n";
  }
  return out;
}

std::vector<TopicSegment> load_segment_manifest(
    std::string_view manifest, const std::vector<Utterance> &utterances) {
  std::unordered_map<std::string, const Utterance *> by_id;
  for (const Utterance &u : utterances) by_id.emplace(u.id, &u);

  std::vector<TopicSegment> segments;
  std::unordered_map<std::string, size_t> segment_index;
  int line_no = 0;
  for (std::string_view line : split(manifest, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string_view> cols = split(line, '\t');
    if (cols.size() != 2) {
      throw ParseError("expected segment_id<TAB>utterance_id", line_no);
    }
    std::string seg_id(trim(cols[0]));
    std::string utt_id(trim(cols[1]));
    if (seg_id.empty()) throw ParseError("empty segment id", line_no);
    auto [it, inserted] = segment_index.emplace(seg_id, segments.size());
    if (inserted) segments.push_back(TopicSegment{seg_id, {}});
    if (utt_id.empty()) continue;
    auto found = by_id.find(utt_id);
    if (found == by_id.end()) {
      throw ParseError("unknown utterance " + utt_id, line_no);
    }
    TopicSegment &seg = segments[it->second];
    for (const Utterance &existing : seg.utterances) {
      if (existing.id == utt_id) {
        throw ParseError("utterance " + utt_id + " listed twice in segment " + seg_id,
                         line_no);
      }
    }
    Utterance u = *found->second;
    u.position = seg.size() + 1;
    seg.utterances.push_back(std::move(u));
  }
  for (const TopicSegment &seg : segments) {
    if (seg.utterances.empty()) throw Error("empty segment " + seg.id);
  }
  return segments;
}

}  // namespace fusum
