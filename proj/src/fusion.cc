#include "fusum/fusion.h"

#include <algorithm>
#include <set>

#include "fusum/pos_tags.h"

namespace fusum {

namespace {

std::set<std::string> context_words(const std::vector<std::string> &words,
                                    int begin, int end) {
  return std::set<std::string>(words.begin() + begin, words.begin() + end);
}

int intersection_size(const std::set<std::string> &a, const std::set<std::string> &b) {
  int n = 0;
  for (const std::string &w : a) n += static_cast<int>(b.count(w));
  return n;
}

}  // namespace

bool FusionNode::has_occurrence_in(int utterance_position) const {
  for (const Occurrence &o : occurrences) {
    if (o.utterance_position == utterance_position) return true;
  }
  return false;
}

FusionGraph::FusionGraph() {
  nodes_.push_back(FusionNode{kStart, NodeKind::kStart, {"<start>", "START", 0}, {}});
  nodes_.push_back(FusionNode{kEnd, NodeKind::kEnd, {"<end>", "END", 0}, {}});
}

int FusionGraph::lexical_node_count() const {
  int n = 0;
  for (const FusionNode &node : nodes_) n += node.kind == NodeKind::kLexical;
  return n;
}

int FusionGraph::merged_content_node_count() const {
  int n = 0;
  for (const FusionNode &node : nodes_) {
    if (node.kind == NodeKind::kLexical && node.occurrences.size() > 1 &&
        !is_closed_class(node.key.pos)) {
      ++n;
    }
  }
  return n;
}

std::vector<int> FusionGraph::incoming(int node) const {
  std::vector<int> ids;
  for (const FusionEdge &e : edges_) {
    if (e.dependent == node) ids.push_back(e.id);
  }
  return ids;
}

std::vector<int> FusionGraph::outgoing(int node) const {
  std::vector<int> ids;
  for (const FusionEdge &e : edges_) {
    if (e.governor == node) ids.push_back(e.id);
  }
  return ids;
}

int FusionGraph::add_utterance(const Utterance &u) {
  const int position = segment_size() + 1;
  if (u.position != position) {
    throw Error("utterance " + u.id + " has position " + std::to_string(u.position) +
                ", expected " + std::to_string(position));
  }
  std::vector<std::string> words;
  words.reserve(u.tokens.size());
  for (const Token &t : u.tokens) words.push_back(to_lower(t.surface));
  utterance_words_.push_back(std::move(words));

  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(FusionNode{id, NodeKind::kRoot, {"<root>", "ROOT", position - 1},
                              {Occurrence{position, 0, "ROOT", ""}}});
  roots_.push_back(id);
  return id;
}

int FusionGraph::add_lexical_node(const Token &token, int utterance_position) {
  const int id = static_cast<int>(nodes_.size());
  std::string word = to_lower(token.surface);
  int &seen = key_counts_[{word, token.pos}];
  nodes_.push_back(FusionNode{id, NodeKind::kLexical, {word, token.pos, seen}, {}});
  ++seen;
  add_occurrence(id, token, utterance_position);
  return id;
}

void FusionGraph::add_occurrence(int node, const Token &token, int utterance_position) {
  nodes_[node].occurrences.push_back(
      Occurrence{utterance_position, token.index, token.surface, token.label});
}

int FusionGraph::add_edge(int governor, int dependent, const std::string &label,
                          int source) {
  auto [it, inserted] = edge_index_.emplace(
      std::make_tuple(governor, dependent, label), static_cast<int>(edges_.size()));
  if (inserted) {
    edges_.push_back(FusionEdge{it->second, governor, dependent, label, {source}});
  } else {
    std::vector<int> &sources = edges_[it->second].sources;
    auto pos = std::lower_bound(sources.begin(), sources.end(), source);
    if (pos == sources.end() || *pos != source) sources.insert(pos, source);
  }
  return it->second;
}

std::string FusionGraph::Serialize() const {
  std::string out;
  for (const FusionNode &n : nodes_) {
    out += "NODE " + std::to_string(n.id) + " " + n.key.word + " " + n.key.pos + " " +
           std::to_string(n.key.discriminator) + "\n";
  }
  for (const FusionEdge &e : edges_) {
    out += "EDGE " + std::to_string(e.id) + " " + std::to_string(e.governor) + " " +
           std::to_string(e.dependent) + " " + e.label + " ";
    for (size_t i = 0; i < e.sources.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(e.sources[i]);
    }
    out += "\n";
  }
  return out;
}

int context_overlap(const FusionGraph &graph, const FusionNode &candidate,
                    const Token &token, const Utterance &utterance) {
  std::vector<std::string> words;
  words.reserve(utterance.tokens.size());
  for (const Token &t : utterance.tokens) words.push_back(to_lower(t.surface));
  const int n = static_cast<int>(words.size());
  const int i = token.index - 1;
  const auto left = context_words(words, 0, i);
  const auto right = context_words(words, i + 1, n);

  int best = 0;
  for (const Occurrence &occ : candidate.occurrences) {
    const std::vector<std::string> &other = graph.utterance_words(occ.utterance_position);
    const int j = occ.token_index - 1;
    const int m = static_cast<int>(other.size());
    const int score = intersection_size(context_words(other, 0, j), left) +
                      intersection_size(context_words(other, j + 1, m), right);
    best = std::max(best, score);
  }
  return best;
}

int assign_node(FusionGraph &graph, const Token &token, const Utterance &utterance) {
  const std::string word = to_lower(token.surface);
  const bool closed = is_closed_class(token.pos);

  std::vector<int> candidates;
  for (const FusionNode &node : graph.nodes()) {
    if (node.kind != NodeKind::kLexical || node.key.word != word ||
        node.key.pos != token.pos || node.has_occurrence_in(utterance.position)) {
      continue;
    }
    if (closed && node.occurrences.front().label != token.label) continue;
    candidates.push_back(node.id);
  }

  if (candidates.empty()) return graph.add_lexical_node(token, utterance.position);

  int chosen = candidates.front();
  if (candidates.size() > 1) {
    int best = -1;
    for (int id : candidates) {
      const int score = context_overlap(graph, graph.node(id), token, utterance);
      if (score > best) {
        best = score;
        chosen = id;
      }
    }
  }
  graph.add_occurrence(chosen, token, utterance.position);
  return chosen;
}

FusionGraph build_fusion_graph(const TopicSegment &segment) {
  if (segment.utterances.empty()) throw Error("segment " + segment.id + " is empty");
  FusionGraph graph;
  for (const Utterance &u : segment.utterances) {
    const int root = graph.add_utterance(u);
    std::vector<int> node_of(u.tokens.size() + 1, root);
    for (const Token &t : u.tokens) node_of[t.index] = assign_node(graph, t, u);

    graph.add_edge(FusionGraph::kStart, root, kStartLabel, u.position);
    for (const Token &t : u.tokens) {
      const int gov = node_of[t.head];
      const int dep = node_of[t.index];
      if (gov == dep) {
        graph.count_dropped_self_loop();
        continue;
      }
      graph.add_edge(gov, dep, t.label, u.position);
    }
  }
  for (const FusionNode &node : graph.nodes()) {
    if (node.kind != NodeKind::kLexical) continue;
    for (const Occurrence &o : node.occurrences) {
      graph.add_edge(node.id, FusionGraph::kEnd, kEndLabel, o.utterance_position);
    }
  }
  return graph;
}

}  // namespace fusum
