#ifndef FUSUM_ILP_MODEL_H_
#define FUSUM_ILP_MODEL_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fusum/corpus.h"
#include "fusum/fusion.h"
#include "fusum/stats.h"

namespace fusum {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

std::string_view relation_symbol(Relation r);

struct Term {
  int var = 0;
  int coef = 0;
  bool operator==(const Term &) const = default;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  int rhs = 0;
  std::string tag;

  bool satisfied_by(const std::vector<char> &values) const;
  bool operator==(const LinearConstraint &) const = default;
};

// One binary variable per graph edge. gov/dep/label mirror the edge so a
// dumped model can be solved without the graph.
struct Variable {
  int id = 0;
  int edge = 0;
  double weight = 0.0;
  int governor = 0;
  int dependent = 0;
  std::string label;
};

struct ModelConfig {
  int max_nodes = 15;
  int min_nodes = 1;
  std::set<std::string> unique_label_set = {"det", "nsubj", "nsubjpass",
                                            "dobj", "aux", "cop"};

  void Validate() const;
};

struct ILPModel {
  std::vector<Variable> variables;
  std::vector<LinearConstraint> constraints;
  ModelConfig config;

  int size() const { return static_cast<int>(variables.size()); }

  // "VAR id weight gov dep label" then "CON tag rel rhs id:coef ..." lines.
  std::string Serialize() const;
  static ILPModel Parse(std::string_view text);
};

// Word frequencies of the (resolved) segment, lowercased: f_seg.
std::map<std::string, long> segment_word_counts(const TopicSegment &segment);

// p(l|g) * I(d) * p_x/N, with p_x the latest source utterance. START and
// END edges weigh 0.
double edge_weight(const FusionEdge &edge, const FusionGraph &graph,
                   const LabelStats &stats, const FrequencyModel &fm,
                   const std::map<std::string, long> &segment_counts);

// Variables for every edge plus the static families: C1 in-degree, C2
// connectivity, C3 start, C4 end, C5 node count, C6 unique labels.
// Acyclicity is left to the solver's lazy cuts.
ILPModel build_model(const FusionGraph &graph, const LabelStats &stats,
                     const FrequencyModel &fm, const TopicSegment &segment,
                     const ModelConfig &config);

}  // namespace fusum

#endif  // FUSUM_ILP_MODEL_H_
