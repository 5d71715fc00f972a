#ifndef FUSUM_CORPUS_H_
#define FUSUM_CORPUS_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fusum {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string &message, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Structurally invalid dependency tree.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Which CoNLL-U column provides the part-of-speech tag.
enum class PosColumn { kUpos, kXpos };

struct Token {
  int index = 0;       // 1-based position within the utterance
  std::string surface;
  std::string pos;
  int head = 0;        // governor index, 0 = ROOT
  std::string label;

  bool operator==(const Token &) const = default;
};

struct Utterance {
  std::string id;
  std::string speaker;
  std::vector<Token> tokens;
  int position = 0;    // p_x within the owning segment, 0 if unassigned

  int size() const { return static_cast<int>(tokens.size()); }
  const Token &token(int index) const { return tokens[index - 1]; }
  bool operator==(const Utterance &) const = default;
};

struct TopicSegment {
  std::string id;
  std::vector<Utterance> utterances;

  int size() const { return static_cast<int>(utterances.size()); }
};

struct BackgroundCorpus {
  std::vector<Utterance> sentences;
  long token_count = 0;

  static BackgroundCorpus FromUtterances(std::vector<Utterance> sentences);
};

// Parses a CoNLL-U document. Sentence ids come from "# sent_id = ..."
// comments (falling back to "s<ordinal>"), speakers from "# speaker = ...".
// Multiword ranges and empty nodes are skipped. Every sentence is validated.
std::vector<Utterance> parse_conllu(std::string_view text,
                                    PosColumn pos_column = PosColumn::kUpos);

// Writes utterances back as CoNLL-U. The POS tag is written to both the
// UPOS and XPOS columns; LEMMA, FEATS, DEPS and MISC are "_".
std::string write_conllu(const std::vector<Utterance> &utterances);

// Returns human-readable violations; an empty result means the utterance
// is a well-formed single-root tree.
std::vector<std::string> validate_utterance(const Utterance &u);

// Builds segments from a manifest of "segment_id<TAB>utterance_id" lines.
// Segments appear in order of first mention; positions are assigned 1..N.
std::vector<TopicSegment> load_segment_manifest(
    std::string_view manifest, const std::vector<Utterance> &utterances);

// Lowercases ASCII letters; other bytes pass through unchanged.
std::string to_lower(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view content);

}  // namespace fusum

#endif  // FUSUM_CORPUS_H_
