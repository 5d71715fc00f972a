#include "fusum/linearize.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "fusum/pos_tags.h"

namespace fusum {

namespace {

constexpr double kKeyEpsilon = 1e-12;

bool is_terminal(const std::string &s) {
  return is_punctuation_word(s) &&
         (s.back() == '.' || s.back() == '?' || s.back() == '!');
}

}  // namespace

SelectedTree extract_tree(const Solution &solution, const FusionGraph &graph) {
  if (solution.status != SolveStatus::kOptimal) {
    throw ShapeError("cannot extract a tree from an infeasible solution");
  }
  SelectedTree tree;
  const int n = static_cast<int>(graph.nodes().size());
  std::vector<int> parent_edge(n, -1);
  std::vector<std::vector<int>> children(n);
  int start_edges = 0;
  int end_edges = 0;
  std::vector<char> covered(n, 0);

  for (int id : solution.selected) {
    if (id < 0 || id >= static_cast<int>(graph.edges().size())) {
      throw ShapeError("selected variable " + std::to_string(id) + " has no edge");
    }
    const FusionEdge &e = graph.edge(id);
    tree.edges.push_back(id);
    if (e.governor == FusionGraph::kStart) {
      ++start_edges;
      tree.root = e.dependent;
    }
    if (e.dependent == FusionGraph::kEnd) {
      ++end_edges;
      covered[e.governor] = 1;
      continue;
    }
    covered[e.governor] = 1;
    covered[e.dependent] = 1;
    if (parent_edge[e.dependent] >= 0) {
      throw ShapeError("node " + std::to_string(e.dependent) +
                       " has more than one incoming edge");
    }
    parent_edge[e.dependent] = id;
    children[e.governor].push_back(e.dependent);
  }
  std::sort(tree.edges.begin(), tree.edges.end());
  if (start_edges != 1) {
    throw ShapeError("expected one start edge, found " + std::to_string(start_edges));
  }
  if (end_edges != 1) {
    throw ShapeError("expected one end edge, found " + std::to_string(end_edges));
  }

  // Everything covered must hang off START; a walk from START that never
  // revisits a node also rules out cycles among reached nodes.
  std::vector<char> reached(n, 0);
  std::vector<int> stack{FusionGraph::kStart};
  reached[FusionGraph::kStart] = 1;
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    for (int child : children[node]) {
      if (reached[child]) throw ShapeError("cycle through node " + std::to_string(child));
      reached[child] = 1;
      stack.push_back(child);
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!covered[v] || v == FusionGraph::kEnd) continue;
    if (!reached[v]) {
      throw ShapeError("node " + std::to_string(v) + " is not reachable from START");
    }
    if (v != FusionGraph::kStart && parent_edge[v] < 0) {
      throw ShapeError("node " + std::to_string(v) + " has no incoming edge");
    }
    if (graph.node(v).kind == NodeKind::kLexical) tree.lexical_nodes.push_back(v);
  }
  return tree;
}

std::vector<OrderedToken> order_nodes(const SelectedTree &tree, const FusionGraph &graph) {
  std::vector<OrderedToken> ordered;
  for (int id : tree.lexical_nodes) {
    const FusionNode &node = graph.node(id);
    double sum = 0.0;
    const Occurrence *earliest = &node.occurrences.front();
    for (const Occurrence &o : node.occurrences) {
      sum += static_cast<double>(o.token_index) /
             static_cast<double>(graph.utterance_length(o.utterance_position));
      if (o.utterance_position < earliest->utterance_position) earliest = &o;
    }
    ordered.push_back(OrderedToken{
        id, *earliest, sum / static_cast<double>(node.occurrences.size())});
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const OrderedToken &a, const OrderedToken &b) {
                     if (std::abs(a.key - b.key) > kKeyEpsilon) return a.key < b.key;
                     if (a.occurrence.utterance_position != b.occurrence.utterance_position) {
                       return a.occurrence.utterance_position < b.occurrence.utterance_position;
                     }
                     return a.occurrence.token_index < b.occurrence.token_index;
                   });
  return ordered;
}

std::string render(const std::vector<std::string> &surfaces) {
  size_t begin = 0;
  size_t end = surfaces.size();
  while (begin < end && is_punctuation_word(surfaces[begin])) ++begin;
  while (end > begin && is_punctuation_word(surfaces[end - 1]) &&
         !is_terminal(surfaces[end - 1])) {
    --end;
  }
  if (begin == end) {
    begin = 0;
    end = surfaces.size();
  }

  std::string text;
  const bool terminal = end > begin && is_terminal(surfaces[end - 1]);
  const size_t words_end = terminal ? end - 1 : end;
  for (size_t i = begin; i < words_end; ++i) {
    if (!text.empty()) text += ' ';
    text += surfaces[i];
  }
  text += terminal ? surfaces[end - 1] : ".";
  if (!text.empty()) {
    text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  }
  return text;
}

std::string render(const std::vector<OrderedToken> &tokens) {
  std::vector<std::string> surfaces;
  surfaces.reserve(tokens.size());
  for (const OrderedToken &t : tokens) surfaces.push_back(t.occurrence.surface);
  return render(surfaces);
}

}  // namespace fusum
