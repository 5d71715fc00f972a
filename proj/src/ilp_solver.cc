#include "fusum/ilp_solver.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace fusum {

namespace {

std::vector<int> selected_ids(const std::vector<char> &values) {
  std::vector<int> ids;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i]) ids.push_back(static_cast<int>(i));
  }
  return ids;
}

void check_weights(const ILPModel &model) {
  for (const Variable &v : model.variables) {
    if (!(v.weight >= 0.0) || !std::isfinite(v.weight)) {
      throw SolverError("variable " + std::to_string(v.id) +
                        " has a negative or non-finite weight");
    }
  }
}

// Depth-first branch and bound over binary variables.
//
// Rows keep their minimum and maximum activity under the current partial
// assignment, updated incrementally on every fix and undo. Propagation
// fixes variables whose opposite value would make a row infeasible.
//
// The bound on undecided variables partitions them into disjoint "pick at
// most one" groups taken from rows of the form sum(x) <= 1, and then, for
// every cardinality row sum(x) <= k, keeps only the k best groups inside it.
//
// With an arc view, every acceptable assignment is a tree hanging from
// START. Arcs whose governor cannot be reached from START through arcs not
// fixed to 0 are then fixed to 0, branching grows the tree from covered
// nodes outward, and a second bound packs subtrees below covered nodes
// into the remaining node budget.
//
// Pruning only drops subtrees whose bound is below the incumbent by more
// than the tolerance, so every assignment tying the optimum reaches a leaf
// and the tie-break is settled there.
class BranchAndBound {
 public:
  BranchAndBound(const ILPModel &model, const CutGenerator &cuts,
                 const SolverOptions &options, const ArcView *tree = nullptr)
      : model_(model), cuts_(cuts), options_(options), n_(model.size()) {
    if (tree && tree->start >= 0) init_tree(*tree);
    weights_.reserve(n_);
    for (const Variable &v : model.variables) weights_.push_back(v.weight);
    values_.assign(n_, kUndecided);
    occurrences_.resize(n_);
    for (const LinearConstraint &c : model.constraints) add_row(c);
    static_rows_ = rows_.size();
    build_groups();
    if (tree_ && tree->single_parent) init_tree_bound();

    branch_order_.resize(n_);
    std::iota(branch_order_.begin(), branch_order_.end(), 0);
    std::stable_sort(branch_order_.begin(), branch_order_.end(),
                     [&](int a, int b) { return weights_[a] > weights_[b]; });
  }

  Solution Run() {
    Solution solution;
    if (!propagate()) {
      solution.nodes_explored = nodes_;
      return solution;
    }
    search();
    if (have_incumbent_) {
      solution.status = SolveStatus::kOptimal;
      solution.selected = selected_ids(result_);
      solution.objective = canonical_objective(model_, solution.selected);
    }
    solution.cuts_added = cuts_added_;
    solution.nodes_explored = nodes_;
    return solution;
  }

 private:
  static constexpr signed char kUndecided = -1;

  struct Row {
    std::vector<Term> terms;
    Relation relation;
    long rhs;
    long min_activity = 0;
    long max_activity = 0;
    long max_abs_coef = 0;
  };

  struct CardinalityRow {
    int row;
    std::vector<int> groups;  // groups fully covered by the row
  };

  void add_row(const LinearConstraint &c) {
    Row row{c.terms, c.relation, c.rhs};
    const int id = static_cast<int>(rows_.size());
    for (const Term &t : row.terms) {
      row.max_abs_coef = std::max<long>(row.max_abs_coef, std::abs(t.coef));
      const signed char v = values_[t.var];
      if (v == kUndecided) {
        row.min_activity += std::min(t.coef, 0);
        row.max_activity += std::max(t.coef, 0);
      } else {
        row.min_activity += v * t.coef;
        row.max_activity += v * t.coef;
      }
      occurrences_[t.var].push_back({id, t.coef});
    }
    rows_.push_back(std::move(row));
    queued_.push_back(0);
  }

  void init_tree(const ArcView &view) {
    if (static_cast<int>(view.arcs.size()) != n_) {
      throw SolverError("arc view does not match the model");
    }
    tree_ = true;
    arcs_ = view.arcs;
    start_ = view.start;
    int nodes = start_ + 1;
    for (const auto &[g, d] : arcs_) nodes = std::max({nodes, g + 1, d + 1});
    out_arcs_.resize(nodes);
    in_arcs_.resize(nodes);
    for (int e = 0; e < n_; ++e) {
      out_arcs_[arcs_[e].first].push_back(e);
      in_arcs_[arcs_[e].second].push_back(e);
    }
    reached_.assign(nodes, 0);
  }

  // Fixes to 0 every undecided arc whose governor is unreachable from START
  // over arcs not fixed to 0, then propagates rows; repeats until stable.
  bool propagate_reachability() {
    if (!tree_) return true;
    for (;;) {
      std::fill(reached_.begin(), reached_.end(), 0);
      reached_[start_] = 1;
      stack_.assign(1, start_);
      while (!stack_.empty()) {
        const int node = stack_.back();
        stack_.pop_back();
        for (int e : out_arcs_[node]) {
          const int d = arcs_[e].second;
          if (values_[e] != 0 && !reached_[d]) {
            reached_[d] = 1;
            stack_.push_back(d);
          }
        }
      }
      bool changed = false;
      for (int e = 0; e < n_; ++e) {
        if (reached_[arcs_[e].first]) continue;
        if (values_[e] == 1) return false;
        if (values_[e] == kUndecided) {
          assign(e, 0);
          changed = true;
        }
      }
      if (!changed) return true;
      if (!propagate()) return false;
    }
  }

  // The tree bound needs a budget row (unit coefficients, <=) holding every
  // incoming arc of each node that can have children, except nodes entered
  // only from START. Nodes whose incoming arcs are in the row cost 1.
  void init_tree_bound() {
    const int nodes = static_cast<int>(out_arcs_.size());
    int best_row = -1;
    std::vector<char> best_cost;
    for (size_t r = 0; r < static_rows_; ++r) {
      const Row &row = rows_[r];
      if (row.relation != Relation::kLessEqual || !is_unit_row(row) || row.rhs < 1) continue;
      std::vector<char> in_row(n_, 0);
      for (const Term &t : row.terms) in_row[t.var] = 1;
      std::vector<char> cost(nodes, 0);
      bool usable = true;
      int counted = 0;
      for (int node = 0; node < nodes && usable; ++node) {
        if (node == start_ || in_arcs_[node].empty()) continue;
        bool all_in = true, from_start_only = true;
        for (int e : in_arcs_[node]) {
          all_in = all_in && in_row[e];
          from_start_only = from_start_only && arcs_[e].first == start_;
        }
        if (all_in) {
          cost[node] = 1;
          ++counted;
        } else if (!from_start_only && !out_arcs_[node].empty()) {
          usable = false;
        }
      }
      if (usable && counted > 0 &&
          (best_row < 0 || row.rhs < rows_[best_row].rhs)) {
        best_row = static_cast<int>(r);
        best_cost = std::move(cost);
      }
    }
    if (best_row < 0) return;
    budget_row_ = best_row;
    node_cost_ = std::move(best_cost);
    max_budget_ = static_cast<int>(rows_[best_row].rhs);

    // Out-arcs of one governor that share a "<= 1" row: at most one is
    // taken, so they form one knapsack choice group.
    sibling_.assign(n_, -1);
    for (size_t r = 0; r < static_rows_; ++r) {
      const Row &row = rows_[r];
      if (row.relation == Relation::kGreaterEqual || !is_unit_row(row) || row.rhs != 1) continue;
      bool same_governor = true;
      for (const Term &t : row.terms) {
        same_governor = same_governor && arcs_[t.var].first == arcs_[row.terms[0].var].first;
      }
      if (!same_governor) continue;
      for (const Term &t : row.terms) {
        if (sibling_[t.var] < 0) sibling_[t.var] = row.terms[0].var;
      }
    }
    for (int e = 0; e < n_; ++e) {
      if (sibling_[e] < 0) sibling_[e] = e;
    }
    for (auto &arcs : out_arcs_) {
      std::stable_sort(arcs.begin(), arcs.end(),
                       [&](int a, int b) { return sibling_[a] < sibling_[b]; });
    }
    subtree_.assign(static_cast<size_t>(nodes) * (max_budget_ + 1), 0.0);
    covered_.assign(nodes, 0);
    tree_bound_ = true;
  }

  double &subtree(int node, int budget) {
    return subtree_[static_cast<size_t>(node) * (max_budget_ + 1) + budget];
  }

  // dp[b] = best total weight of undecided arcs hanging below `node` using
  // at most b counted nodes, b = 0..capacity. Children are uncovered nodes
  // whose own subtrees come from `subtree` (budgets below the child's
  // layer must already be filled in).
  void hang_below(int node, int capacity, std::vector<double> &dp) {
    dp.assign(capacity + 1, 0.0);
    const auto &arcs = out_arcs_[node];
    size_t i = 0;
    while (i < arcs.size()) {
      size_t j = i;
      while (j < arcs.size() && sibling_[arcs[j]] == sibling_[arcs[i]]) ++j;
      scratch_ = dp;
      bool any = false;
      for (size_t k = i; k < j; ++k) {
        const int e = arcs[k];
        if (values_[e] != kUndecided) continue;
        const int d = arcs_[e].second;
        if (d == node) continue;
        if (covered_[d]) {
          // Cannot happen with one parent per node; kept as a free item.
          if (weights_[e] <= 0.0) continue;
          any = true;
          for (int b = 0; b <= capacity; ++b) scratch_[b] = std::max(scratch_[b], dp[b] + weights_[e]);
          continue;
        }
        const int cost = node_cost_[d];
        for (int kd = 0; kd + cost <= capacity; ++kd) {
          const double value = weights_[e] + subtree(d, kd);
          if (value <= 0.0) continue;
          any = true;
          for (int b = kd + cost; b <= capacity; ++b) {
            scratch_[b] = std::max(scratch_[b], dp[b - kd - cost] + value);
          }
        }
      }
      if (any) dp.swap(scratch_);
      i = j;
    }
  }

  // Best weight any completion can still add: subtrees of undecided arcs
  // hung from covered nodes, within the remaining node budget, where a
  // node may appear in several subtrees.
  double tree_bound() {
    const Row &budget = rows_[budget_row_];
    const long remaining = budget.rhs - budget.min_activity;
    if (remaining < 0) return 0.0;
    const int cap = static_cast<int>(std::min<long>(remaining, max_budget_));
    const int nodes = static_cast<int>(out_arcs_.size());
    for (int node = 0; node < nodes; ++node) covered_[node] = covered(node);
    for (int k = 0; k <= cap; ++k) {
      for (int pass_cost : {1, 0}) {
        for (int node = 0; node < nodes; ++node) {
          if (covered_[node] || node_cost_[node] != pass_cost) continue;
          hang_below(node, k, layer_);
          subtree(node, k) = layer_[k];
        }
      }
    }
    total_.assign(cap + 1, 0.0);
    for (int node = 0; node < nodes; ++node) {
      if (!covered_[node]) continue;
      hang_below(node, cap, layer_);
      scratch2_ = total_;
      for (int b = 0; b <= cap; ++b) {
        for (int a = 1; a <= b; ++a) {
          scratch2_[b] = std::max(scratch2_[b], total_[b - a] + layer_[a]);
        }
        scratch2_[b] = std::max(scratch2_[b], total_[b] + layer_[0]);
      }
      total_.swap(scratch2_);
    }
    return total_[cap];
  }

  bool covered(int node) const {
    if (node == start_) return true;
    for (int e : in_arcs_[node]) {
      if (values_[e] == 1) return true;
    }
    return false;
  }

  // Heaviest undecided arc leaving a covered node; otherwise the heaviest
  // undecided variable.
  int pick_branch_variable() const {
    int fallback = -1;
    for (int v : branch_order_) {
      if (values_[v] != kUndecided) continue;
      if (!tree_ || covered(arcs_[v].first)) return v;
      if (fallback < 0) fallback = v;
    }
    return fallback;
  }

  static bool is_unit_row(const Row &row) {
    if (row.relation == Relation::kGreaterEqual) return false;
    for (const Term &t : row.terms) {
      if (t.coef != 1) return false;
    }
    return true;
  }

  void build_groups() {
    group_of_.assign(n_, -1);
    std::vector<int> packing;
    for (size_t r = 0; r < rows_.size(); ++r) {
      if (is_unit_row(rows_[r]) && rows_[r].rhs == 1) packing.push_back(static_cast<int>(r));
    }
    std::stable_sort(packing.begin(), packing.end(), [&](int a, int b) {
      return rows_[a].terms.size() > rows_[b].terms.size();
    });
    for (int r : packing) {
      bool disjoint = true;
      for (const Term &t : rows_[r].terms) disjoint = disjoint && group_of_[t.var] < 0;
      if (!disjoint) continue;
      const int g = static_cast<int>(groups_.size());
      groups_.emplace_back();
      for (const Term &t : rows_[r].terms) {
        group_of_[t.var] = g;
        groups_[g].push_back(t.var);
      }
    }
    for (int v = 0; v < n_; ++v) {
      if (group_of_[v] >= 0) continue;
      group_of_[v] = static_cast<int>(groups_.size());
      groups_.push_back({v});
    }
    for (size_t r = 0; r < rows_.size(); ++r) {
      if (!is_unit_row(rows_[r]) || rows_[r].rhs < 2) continue;
      std::map<int, size_t> covered;
      for (const Term &t : rows_[r].terms) ++covered[group_of_[t.var]];
      CardinalityRow card{static_cast<int>(r), {}};
      for (const auto &[g, count] : covered) {
        if (count == groups_[g].size()) card.groups.push_back(g);
      }
      if (!card.groups.empty()) cardinality_.push_back(std::move(card));
    }
    group_value_.assign(groups_.size(), 0.0);
  }

  void assign(int var, signed char value) {
    values_[var] = value;
    trail_.push_back(var);
    if (value) current_ += weights_[var];
    for (const auto &[r, coef] : occurrences_[var]) {
      Row &row = rows_[r];
      row.min_activity += value * coef - std::min(coef, 0);
      row.max_activity += value * coef - std::max(coef, 0);
      if (!queued_[r]) {
        queued_[r] = 1;
        queue_.push_back(r);
      }
    }
  }

  void undo(size_t mark) {
    while (trail_.size() > mark) {
      const int var = trail_.back();
      trail_.pop_back();
      const signed char value = values_[var];
      if (value) current_ -= weights_[var];
      for (const auto &[r, coef] : occurrences_[var]) {
        Row &row = rows_[r];
        row.min_activity -= value * coef - std::min(coef, 0);
        row.max_activity -= value * coef - std::max(coef, 0);
      }
      values_[var] = kUndecided;
    }
    if (trail_.empty()) current_ = 0.0;
    clear_queue();
  }

  void clear_queue() {
    for (int r : queue_) queued_[r] = 0;
    queue_.clear();
  }

  bool propagate() {
    while (!queue_.empty()) {
      const int r = queue_.back();
      queue_.pop_back();
      queued_[r] = 0;
      if (!propagate_row(r)) {
        clear_queue();
        return false;
      }
    }
    return true;
  }

  bool propagate_row(int r) {
    Row &row = rows_[r];
    if (row.relation != Relation::kGreaterEqual) {
      if (row.min_activity > row.rhs) return false;
      if (row.rhs - row.min_activity < row.max_abs_coef) {
        for (const Term &t : row.terms) {
          if (values_[t.var] != kUndecided) continue;
          const long slack = row.rhs - row.min_activity;
          if (t.coef > 0 && t.coef > slack) assign(t.var, 0);
          else if (t.coef < 0 && -t.coef > slack) assign(t.var, 1);
        }
      }
    }
    if (row.relation != Relation::kLessEqual) {
      if (row.max_activity < row.rhs) return false;
      if (row.max_activity - row.rhs < row.max_abs_coef) {
        for (const Term &t : row.terms) {
          if (values_[t.var] != kUndecided) continue;
          const long slack = row.max_activity - row.rhs;
          if (t.coef > 0 && t.coef > slack) assign(t.var, 1);
          else if (t.coef < 0 && -t.coef > slack) assign(t.var, 0);
        }
      }
    }
    if (row.min_activity > row.rhs && row.relation != Relation::kGreaterEqual) return false;
    if (row.max_activity < row.rhs && row.relation != Relation::kLessEqual) return false;
    return true;
  }

  // Cuts added deeper in the tree are not yet reflected by propagation at
  // shallower nodes; re-check them on entry.
  bool propagate_cuts() {
    for (size_t r = static_rows_; r < rows_.size(); ++r) {
      if (!queued_[r]) {
        queued_[r] = 1;
        queue_.push_back(static_cast<int>(r));
      }
    }
    return propagate();
  }

  double undecided_bound() {
    const double groups = group_bound();
    if (!tree_bound_) return groups;
    return std::min(groups, tree_bound());
  }

  double group_bound() {
    for (size_t g = 0; g < groups_.size(); ++g) {
      double best = 0.0;
      for (int v : groups_[g]) {
        if (values_[v] == 1) {
          best = 0.0;
          break;
        }
        if (values_[v] == kUndecided) best = std::max(best, weights_[v]);
      }
      group_value_[g] = best;
    }
    double total = 0.0;
    for (double v : group_value_) total += v;
    double bound = total;
    for (const CardinalityRow &card : cardinality_) {
      const Row &row = rows_[card.row];
      const long remaining = row.rhs - row.min_activity;
      inside_.clear();
      double inside_total = 0.0;
      for (int g : card.groups) {
        if (group_value_[g] > 0.0) {
          inside_.push_back(group_value_[g]);
          inside_total += group_value_[g];
        }
      }
      if (remaining >= static_cast<long>(inside_.size())) continue;
      double kept = 0.0;
      if (remaining > 0) {
        std::partial_sort(inside_.begin(), inside_.begin() + remaining, inside_.end(),
                          std::greater<double>());
        for (long i = 0; i < remaining; ++i) kept += inside_[i];
      }
      bound = std::min(bound, total - inside_total + kept);
    }
    return bound;
  }

  double tolerance(double reference) const {
    return 1e-9 * std::max(1.0, std::abs(reference));
  }

  void count_node() {
    if (++nodes_ > options_.node_cap) {
      throw SolverError("node exploration cap of " + std::to_string(options_.node_cap) +
                        " reached before optimality was proven");
    }
  }

  // Complete assignment: returns true if the generator accepts it.
  bool accept_leaf(const std::vector<char> &values) {
    for (const Row &row : rows_) {
      if (row.min_activity != row.max_activity) {
        throw SolverError("internal error: undecided variable at a leaf");
      }
    }
    if (!cuts_) return true;
    std::vector<LinearConstraint> cuts = cuts_(values);
    for (const LinearConstraint &cut : cuts) {
      if (cut.satisfied_by(values)) {
        throw SolverError("cut generator returned a cut (" + cut.tag +
                          ") that the assignment satisfies");
      }
      add_row(cut);
      ++cuts_added_;
    }
    return cuts.empty();
  }

  bool leaf_feasible() const {
    for (const Row &row : rows_) {
      const long a = row.min_activity;
      if (row.relation == Relation::kLessEqual && a > row.rhs) return false;
      if (row.relation == Relation::kEqual && a != row.rhs) return false;
      if (row.relation == Relation::kGreaterEqual && a < row.rhs) return false;
    }
    return true;
  }

  void search() {
    count_node();
    if (!propagate_cuts() || !propagate_reachability()) return;
    if (have_incumbent_ &&
        current_ + undecided_bound() < incumbent_objective_ - tolerance(incumbent_objective_)) {
      return;
    }
    const int var = pick_branch_variable();
    if (var < 0) {
      if (!leaf_feasible()) return;
      std::vector<char> values(n_);
      for (int v = 0; v < n_; ++v) values[v] = values_[v] == 1;
      const double objective = canonical_objective(model_, selected_ids(values));
      if (have_incumbent_ && (objective < incumbent_objective_ ||
                              (objective == incumbent_objective_ &&
                               !tie_break_less(values, result_)))) {
        return;
      }
      if (!accept_leaf(values)) return;
      have_incumbent_ = true;
      incumbent_objective_ = objective;
      result_ = std::move(values);
      return;
    }
    for (signed char value : {1, 0}) {
      const size_t mark = trail_.size();
      assign(var, value);
      if (propagate()) search();
      undo(mark);
    }
  }

  const ILPModel &model_;
  const CutGenerator &cuts_;
  const SolverOptions &options_;
  const int n_;

  std::vector<double> weights_;
  std::vector<signed char> values_;
  std::vector<Row> rows_;
  size_t static_rows_ = 0;
  std::vector<std::vector<std::pair<int, int>>> occurrences_;
  std::vector<int> trail_;
  std::vector<int> queue_;
  std::vector<char> queued_;
  double current_ = 0.0;

  std::vector<std::vector<int>> groups_;
  std::vector<int> group_of_;
  std::vector<CardinalityRow> cardinality_;
  std::vector<double> group_value_;
  std::vector<double> inside_;

  std::vector<int> branch_order_;

  bool tree_ = false;
  std::vector<std::pair<int, int>> arcs_;
  int start_ = -1;
  std::vector<std::vector<int>> out_arcs_;
  std::vector<std::vector<int>> in_arcs_;
  std::vector<char> reached_;
  std::vector<int> stack_;

  bool tree_bound_ = false;
  int budget_row_ = -1;
  int max_budget_ = 0;
  std::vector<char> node_cost_;
  std::vector<int> sibling_;
  std::vector<double> subtree_;
  std::vector<char> covered_;
  std::vector<double> layer_, scratch_, scratch2_, total_;

  bool have_incumbent_ = false;
  double incumbent_objective_ = 0.0;
  std::vector<char> result_;

  long nodes_ = 0;
  long cuts_added_ = 0;
};

}  // namespace

std::string Solution::Serialize() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", objective);
  std::string out = std::string("STATUS ") +
                    (status == SolveStatus::kOptimal ? "optimal" : "infeasible") + "\n";
  out += "OBJECTIVE " + std::string(buf) + "\n";
  out += "SELECTED";
  for (int id : selected) out += " " + std::to_string(id);
  out += "\nCUTS " + std::to_string(cuts_added) + "\n";
  out += "NODES " + std::to_string(nodes_explored) + "\n";
  return out;
}

double canonical_objective(const ILPModel &model, const std::vector<int> &selected) {
  std::vector<int> ids = selected;
  std::sort(ids.begin(), ids.end());
  double total = 0.0;
  for (int id : ids) total += model.variables[id].weight;
  return total;
}

bool tie_break_less(const std::vector<char> &a, const std::vector<char> &b) {
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return !a[i];
  }
  return a.size() < b.size();
}

Solution solve(const ILPModel &model, const CutGenerator &cuts,
               const SolverOptions &options) {
  check_weights(model);
  BranchAndBound bnb(model, cuts, options);
  return bnb.Run();
}

Solution solve(const ILPModel &model, const ArcView &view, const SolverOptions &options) {
  check_weights(model);
  const CutGenerator cuts = cycle_cut_generator(view);
  BranchAndBound bnb(model, cuts, options, &view);
  return bnb.Run();
}

Solution brute_force_solve(const ILPModel &model, const CutGenerator &cuts) {
  check_weights(model);
  const int n = model.size();
  if (n > kBruteForceMaxVariables) {
    throw SolverError("brute force limited to " + std::to_string(kBruteForceMaxVariables) +
                      " variables, model has " + std::to_string(n));
  }
  Solution best;
  std::vector<char> best_values;
  std::vector<char> values(n);
  const unsigned long total = 1ul << n;
  for (unsigned long mask = 0; mask < total; ++mask) {
    ++best.nodes_explored;
    for (int i = 0; i < n; ++i) values[i] = (mask >> i) & 1;
    bool feasible = true;
    for (const LinearConstraint &c : model.constraints) {
      if (!c.satisfied_by(values)) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    const std::vector<int> ids = selected_ids(values);
    const double objective = canonical_objective(model, ids);
    if (best.status == SolveStatus::kOptimal &&
        (objective < best.objective ||
         (objective == best.objective && !tie_break_less(values, best_values)))) {
      continue;
    }
    if (cuts && !cuts(values).empty()) continue;
    best.status = SolveStatus::kOptimal;
    best.objective = objective;
    best.selected = ids;
    best_values = values;
  }
  return best;
}

ArcView arc_view(const FusionGraph &graph) {
  ArcView view;
  for (const FusionEdge &e : graph.edges()) view.arcs.emplace_back(e.governor, e.dependent);
  view.start = FusionGraph::kStart;
  view.single_parent = true;
  return view;
}

ArcView arc_view(const ILPModel &model) {
  ArcView view;
  std::map<int, std::vector<int>> incoming;
  for (const Variable &v : model.variables) {
    view.arcs.emplace_back(v.governor, v.dependent);
    if (v.label == kStartLabel) view.start = v.governor;
    if (v.label != kEndLabel) incoming[v.dependent].push_back(v.id);
  }
  std::set<std::vector<int>> packing;
  for (const LinearConstraint &c : model.constraints) {
    if (c.relation == Relation::kGreaterEqual || c.rhs != 1) continue;
    std::vector<int> ids;
    bool unit = true;
    for (const Term &t : c.terms) {
      unit = unit && t.coef == 1;
      ids.push_back(t.var);
    }
    if (!unit) continue;
    std::sort(ids.begin(), ids.end());
    packing.insert(ids);
  }
  view.single_parent = true;
  for (const auto &[node, ids] : incoming) {
    if (node == view.start) continue;
    if (ids.size() > 1 && !packing.count(ids)) view.single_parent = false;
  }
  return view;
}

CutGenerator cycle_cut_generator(ArcView view) {
  return [view = std::move(view)](const std::vector<char> &values) {
    std::vector<LinearConstraint> cuts;
    std::map<int, std::vector<int>> out;  // node -> selected arc ids
    std::set<int> touched;
    for (size_t e = 0; e < view.arcs.size(); ++e) {
      if (!values[e]) continue;
      out[view.arcs[e].first].push_back(static_cast<int>(e));
      touched.insert(view.arcs[e].first);
      touched.insert(view.arcs[e].second);
    }

    // Colour DFS; every back arc closes a cycle along the arc stack.
    std::map<int, int> colour;  // 0 white, 1 grey, 2 black
    std::vector<int> arc_stack;
    std::set<std::vector<int>> seen_cycles;
    std::function<void(int)> visit = [&](int node) {
      colour[node] = 1;
      for (int e : out[node]) {
        const int next = view.arcs[e].second;
        const int c = colour[next];
        if (c == 0) {
          arc_stack.push_back(e);
          visit(next);
          arc_stack.pop_back();
        } else if (c == 1) {
          std::vector<int> cycle{e};
          for (auto it = arc_stack.rbegin(); next != node && it != arc_stack.rend(); ++it) {
            cycle.push_back(*it);
            if (view.arcs[*it].first == next) break;
          }
          std::sort(cycle.begin(), cycle.end());
          if (!seen_cycles.insert(cycle).second) continue;
          LinearConstraint cut;
          for (int id : cycle) cut.terms.push_back(Term{id, 1});
          cut.relation = Relation::kLessEqual;
          cut.rhs = static_cast<int>(cycle.size()) - 1;
          cut.tag = "C7cycle";
          cuts.push_back(std::move(cut));
        }
      }
      colour[node] = 2;
    };
    for (int node : touched) {
      if (colour[node] == 0) visit(node);
    }
    if (!cuts.empty() || view.start < 0) return cuts;

    std::set<int> reached{view.start};
    std::vector<int> stack{view.start};
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (int e : out[node]) {
        if (reached.insert(view.arcs[e].second).second) stack.push_back(view.arcs[e].second);
      }
    }
    std::set<int> unreachable;
    for (int node : touched) {
      if (!reached.count(node)) unreachable.insert(node);
    }
    // Split the unreachable nodes into weakly connected components.
    std::map<int, int> component;
    int components = 0;
    for (int seed : unreachable) {
      if (component.count(seed)) continue;
      std::vector<int> todo{seed};
      component[seed] = components;
      while (!todo.empty()) {
        const int node = todo.back();
        todo.pop_back();
        for (size_t e = 0; e < view.arcs.size(); ++e) {
          if (!values[e]) continue;
          const auto [g, d] = view.arcs[e];
          const int other = g == node ? d : (d == node ? g : -1);
          if (other >= 0 && unreachable.count(other) && !component.count(other)) {
            component[other] = components;
            todo.push_back(other);
          }
        }
      }
      ++components;
    }
    for (int c = 0; c < components; ++c) {
      int size = 0;
      for (const auto &[node, comp] : component) size += comp == c;
      std::vector<Term> inside;
      std::vector<Term> entering;
      int selected_inside = 0;
      int first_selected = -1;  // first selected arc leaving a node of S
      for (size_t e = 0; e < view.arcs.size(); ++e) {
        const auto [g, d] = view.arcs[e];
        auto gi = component.find(g);
        auto di = component.find(d);
        const bool g_in = gi != component.end() && gi->second == c;
        const bool d_in = di != component.end() && di->second == c;
        if (g_in && values[e] && first_selected < 0) first_selected = static_cast<int>(e);
        if (g_in && d_in) {
          inside.push_back(Term{static_cast<int>(e), 1});
          if (values[e]) ++selected_inside;
        } else if (d_in) {
          entering.push_back(Term{static_cast<int>(e), -1});
        }
      }
      if (first_selected < 0) continue;
      LinearConstraint cut;
      cut.relation = Relation::kLessEqual;
      if (view.single_parent && selected_inside > size - 1) {
        cut.terms = std::move(inside);
        cut.rhs = size - 1;
        cut.tag = "C7reach";
      } else {
        cut.terms.push_back(Term{first_selected, 1});
        cut.terms.insert(cut.terms.end(), entering.begin(), entering.end());
        std::sort(cut.terms.begin(), cut.terms.end(),
                  [](const Term &a, const Term &b) { return a.var < b.var; });
        cut.rhs = 0;
        cut.tag = "C7conn";
      }
      cuts.push_back(std::move(cut));
    }
    return cuts;
  };
}

}  // namespace fusum
