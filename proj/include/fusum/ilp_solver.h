#ifndef FUSUM_ILP_SOLVER_H_
#define FUSUM_ILP_SOLVER_H_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fusum/fusion.h"
#include "fusum/ilp_model.h"

namespace fusum {

class SolverError : public Error {
 public:
  using Error::Error;
};

enum class SolveStatus { kOptimal, kInfeasible };

struct Solution {
  std::vector<int> selected;  // ascending variable ids
  double objective = 0.0;
  SolveStatus status = SolveStatus::kInfeasible;
  long cuts_added = 0;
  long nodes_explored = 0;

  // "STATUS", "OBJECTIVE", "SELECTED", "CUTS", "NODES" lines.
  std::string Serialize() const;
};

// Called with a complete 0/1 assignment that satisfies every constraint
// known so far. Returns constraints the assignment violates, or nothing if
// it is acceptable. Every returned cut must hold for all acceptable
// assignments. An empty std::function accepts everything.
using CutGenerator =
    std::function<std::vector<LinearConstraint>(const std::vector<char> &values)>;

struct SolverOptions {
  long node_cap = 10'000'000;
};

// Sum of the selected weights, added in ascending id order. Both solvers
// rank assignments by this value so their objectives compare exactly.
double canonical_objective(const ILPModel &model, const std::vector<int> &selected);

// Tie-break between equal objectives: compares 0/1 vectors position by
// position, so the assignment leaving the lowest differing id unselected
// wins. The empty selection precedes every other.
bool tie_break_less(const std::vector<char> &a, const std::vector<char> &b);

// Exact depth-first branch and bound. Throws SolverError on negative
// weights or when more than options.node_cap nodes are explored.
Solution solve(const ILPModel &model, const CutGenerator &cuts = {},
               const SolverOptions &options = {});

struct ArcView;

// Solves with cycle_cut_generator(view) and uses the same view to prune
// arcs that cannot hang from START. Same result as solve(model,
// cycle_cut_generator(view)), usually with far fewer nodes.
Solution solve(const ILPModel &model, const ArcView &view, const SolverOptions &options = {});

// Exhaustive oracle over all 2^V assignments, V <= 22.
Solution brute_force_solve(const ILPModel &model, const CutGenerator &cuts = {});

inline constexpr int kBruteForceMaxVariables = 22;

// Arc endpoints of each variable, indexed by variable id.
struct ArcView {
  std::vector<std::pair<int, int>> arcs;  // (governor, dependent)
  int start = -1;                        // START node, -1 if none
  // True when every node can have at most one selected incoming arc (the
  // C1 family is present). Enables the unreachable-set cut form.
  bool single_parent = false;
};

ArcView arc_view(const FusionGraph &graph);
// Recovers arcs from the VAR records; START is the governor of "start"
// edges. single_parent is set when every in-degree group has a C1 row.
ArcView arc_view(const ILPModel &model);

// Lazy cycle elimination. For each directed cycle C among selected arcs:
// sum(C) <= |C| - 1. When there is no cycle but some selected arcs are not
// reachable from START, each unreachable component S gets
// sum(arcs inside S) <= |S| - 1 if that is violated and single_parent
// holds, otherwise x_e <= sum(arcs entering S) for its first arc e.
CutGenerator cycle_cut_generator(ArcView view);
inline CutGenerator cycle_cut_generator(const FusionGraph &graph) {
  return cycle_cut_generator(arc_view(graph));
}

}  // namespace fusum

#endif  // FUSUM_ILP_SOLVER_H_
