#ifndef FUSUM_FUSION_H_
#define FUSUM_FUSION_H_

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "fusum/corpus.h"

namespace fusum {

enum class NodeKind { kStart, kEnd, kRoot, kLexical };

struct NodeKey {
  std::string word;   // lowercased
  std::string pos;
  int discriminator = 0;  // 0 for the first node with this (word, pos)
};

struct Occurrence {
  int utterance_position = 0;
  int token_index = 0;  // 0 for ROOT
  std::string surface;
  std::string label;    // incoming dependency label in the utterance
};

struct FusionNode {
  int id = 0;
  NodeKind kind = NodeKind::kLexical;
  NodeKey key;
  std::vector<Occurrence> occurrences;

  bool has_occurrence_in(int utterance_position) const;
};

struct FusionEdge {
  int id = 0;
  int governor = 0;
  int dependent = 0;
  std::string label;
  std::vector<int> sources;  // utterance positions, ascending
};

inline constexpr char kStartLabel[] = "start";
inline constexpr char kEndLabel[] = "end";

// Merged dependency structure of one segment. Node 0 is START and node 1
// is END; each utterance gets its own ROOT node.
class FusionGraph {
 public:
  FusionGraph();

  static constexpr int kStart = 0;
  static constexpr int kEnd = 1;

  const std::vector<FusionNode> &nodes() const { return nodes_; }
  const std::vector<FusionEdge> &edges() const { return edges_; }
  const FusionNode &node(int id) const { return nodes_[id]; }
  const FusionEdge &edge(int id) const { return edges_[id]; }

  int segment_size() const { return static_cast<int>(utterance_words_.size()); }
  int root_of(int utterance_position) const { return roots_[utterance_position - 1]; }
  int utterance_length(int utterance_position) const {
    return static_cast<int>(utterance_words_[utterance_position - 1].size());
  }
  // Lowercased surfaces of an added utterance, by token index - 1.
  const std::vector<std::string> &utterance_words(int utterance_position) const {
    return utterance_words_[utterance_position - 1];
  }

  int dropped_self_loops() const { return dropped_self_loops_; }
  int lexical_node_count() const;
  // Lexical nodes with open-class POS observed in more than one utterance.
  int merged_content_node_count() const;

  std::vector<int> incoming(int node) const;
  std::vector<int> outgoing(int node) const;

  // Registers an utterance (by its position) and creates its ROOT node.
  // Utterances must be added in position order starting at 1.
  int add_utterance(const Utterance &u);
  int add_lexical_node(const Token &token, int utterance_position);
  void add_occurrence(int node, const Token &token, int utterance_position);
  // Adds (g, d, l) or appends `source` to the existing edge. Returns its id.
  int add_edge(int governor, int dependent, const std::string &label, int source);
  void count_dropped_self_loop() { ++dropped_self_loops_; }

  // "NODE id word pos disc" and "EDGE id gov dep label s1,s2" lines.
  std::string Serialize() const;

 private:
  std::vector<FusionNode> nodes_;
  std::vector<FusionEdge> edges_;
  std::vector<int> roots_;
  std::vector<std::vector<std::string>> utterance_words_;
  std::map<std::tuple<int, int, std::string>, int> edge_index_;
  std::map<std::pair<std::string, std::string>, int> key_counts_;
  int dropped_self_loops_ = 0;
};

// Largest, over the candidate's occurrences, of shared left-context words
// plus shared right-context words with `token` in `utterance`.
int context_overlap(const FusionGraph &graph, const FusionNode &candidate,
                    const Token &token, const Utterance &utterance);

// Maps a token to an existing node or a fresh one and records the
// occurrence. Closed-class tokens also need a matching incoming label.
int assign_node(FusionGraph &graph, const Token &token, const Utterance &utterance);

FusionGraph build_fusion_graph(const TopicSegment &segment);

}  // namespace fusum

#endif  // FUSUM_FUSION_H_
