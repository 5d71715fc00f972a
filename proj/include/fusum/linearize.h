#ifndef FUSUM_LINEARIZE_H_
#define FUSUM_LINEARIZE_H_

#include <string>
#include <vector>

#include "fusum/fusion.h"
#include "fusum/ilp_solver.h"

namespace fusum {

// The selected subgraph does not form a tree rooted at START. Indicates a
// solver or model bug, never bad input.
class ShapeError : public Error {
 public:
  using Error::Error;
};

struct SelectedTree {
  std::vector<int> edges;          // ascending edge ids
  std::vector<int> lexical_nodes;  // ascending node ids
  int root = -1;                   // the ROOT node entered from START
};

// Requires variable ids to equal edge ids, as build_model produces them.
SelectedTree extract_tree(const Solution &solution, const FusionGraph &graph);

struct OrderedToken {
  int node = 0;
  Occurrence occurrence;  // from the node's earliest utterance
  double key = 0.0;       // mean of token_index / utterance length
};

std::vector<OrderedToken> order_nodes(const SelectedTree &tree, const FusionGraph &graph);

std::string render(const std::vector<std::string> &surfaces);
std::string render(const std::vector<OrderedToken> &tokens);

struct SummarySentence {
  std::string segment_id;
  std::vector<OrderedToken> ordered_tokens;
  std::string text;
  double objective = 0.0;
};

}  // namespace fusum

#endif  // FUSUM_LINEARIZE_H_
