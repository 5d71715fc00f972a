#include "fusum/ilp_model.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

namespace fusum {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Sums coefficients of repeated variables and drops zeros.
std::vector<Term> normalize_terms(std::vector<Term> terms) {
  std::map<int, int> merged;
  for (const Term &t : terms) merged[t.var] += t.coef;
  std::vector<Term> out;
  for (const auto &[var, coef] : merged) {
    if (coef != 0) out.push_back(Term{var, coef});
  }
  return out;
}

bool parse_int(std::string_view s, int *out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::string_view relation_symbol(Relation r) {
  switch (r) {
    case Relation::kLessEqual: return "<=";
    case Relation::kEqual: return "=";
    case Relation::kGreaterEqual: return ">=";
  }
  return "?";
}

bool LinearConstraint::satisfied_by(const std::vector<char> &values) const {
  long activity = 0;
  for (const Term &t : terms) activity += values[t.var] ? t.coef : 0;
  switch (relation) {
    case Relation::kLessEqual: return activity <= rhs;
    case Relation::kEqual: return activity == rhs;
    case Relation::kGreaterEqual: return activity >= rhs;
  }
  return false;
}

void ModelConfig::Validate() const {
  if (min_nodes < 1 || min_nodes > max_nodes) {
    throw Error("node bounds must satisfy 1 <= min_nodes <= max_nodes (got " +
                std::to_string(min_nodes) + ", " + std::to_string(max_nodes) + ")");
  }
}

std::map<std::string, long> segment_word_counts(const TopicSegment &segment) {
  std::map<std::string, long> counts;
  for (const Utterance &u : segment.utterances) {
    for (const Token &t : u.tokens) ++counts[to_lower(t.surface)];
  }
  return counts;
}

double edge_weight(const FusionEdge &edge, const FusionGraph &graph,
                   const LabelStats &stats, const FrequencyModel &fm,
                   const std::map<std::string, long> &segment_counts) {
  const FusionNode &gov = graph.node(edge.governor);
  const FusionNode &dep = graph.node(edge.dependent);
  if (gov.kind == NodeKind::kStart || dep.kind == NodeKind::kEnd) return 0.0;

  const GovernorKey key = gov.kind == NodeKind::kRoot
                              ? root_governor_key()
                              : GovernorKey{gov.key.word, gov.key.pos};
  const double p_label = label_probability(stats, key, edge.label);

  auto it = segment_counts.find(dep.key.word);
  const long f_seg = it == segment_counts.end() ? 0 : it->second;
  const double info = informativeness(fm, dep.key.word, f_seg);

  const int latest = edge.sources.back();
  return p_label * info * position_weight(latest, graph.segment_size());
}

ILPModel build_model(const FusionGraph &graph, const LabelStats &stats,
                     const FrequencyModel &fm, const TopicSegment &segment,
                     const ModelConfig &config) {
  config.Validate();
  ILPModel model;
  model.config = config;
  const auto counts = segment_word_counts(segment);

  std::vector<std::vector<int>> in(graph.nodes().size()), out(graph.nodes().size());
  for (const FusionEdge &e : graph.edges()) {
    model.variables.push_back(Variable{e.id, e.id,
                                       edge_weight(e, graph, stats, fm, counts),
                                       e.governor, e.dependent, e.label});
    in[e.dependent].push_back(e.id);
    out[e.governor].push_back(e.id);
  }

  auto add = [&](std::vector<Term> terms, Relation rel, int rhs, const char *tag) {
    terms = normalize_terms(std::move(terms));
    if (terms.empty()) return;
    model.constraints.push_back(LinearConstraint{std::move(terms), rel, rhs, tag});
  };

  // C1: at most one incoming edge per lexical or ROOT node.
  for (const FusionNode &n : graph.nodes()) {
    if (n.kind != NodeKind::kLexical && n.kind != NodeKind::kRoot) continue;
    std::vector<Term> terms;
    for (int e : in[n.id]) terms.push_back(Term{e, 1});
    add(std::move(terms), Relation::kLessEqual, 1, "C1");
  }
  // C2: an edge may be used only if its governor is entered.
  for (const FusionEdge &e : graph.edges()) {
    if (e.governor == FusionGraph::kStart) continue;
    std::vector<Term> terms{Term{e.id, 1}};
    for (int f : in[e.governor]) terms.push_back(Term{f, -1});
    add(std::move(terms), Relation::kLessEqual, 0, "C2");
  }
  // C3 / C4: exactly one start edge and one end edge.
  {
    std::vector<Term> terms;
    for (int e : out[FusionGraph::kStart]) terms.push_back(Term{e, 1});
    add(std::move(terms), Relation::kEqual, 1, "C3");
  }
  {
    std::vector<Term> terms;
    for (int e : in[FusionGraph::kEnd]) terms.push_back(Term{e, 1});
    add(std::move(terms), Relation::kEqual, 1, "C4");
  }
  // C5: number of entered lexical nodes.
  {
    std::vector<Term> terms;
    for (const FusionNode &n : graph.nodes()) {
      if (n.kind != NodeKind::kLexical) continue;
      for (int e : in[n.id]) terms.push_back(Term{e, 1});
    }
    add(terms, Relation::kLessEqual, config.max_nodes, "C5");
    add(terms, Relation::kGreaterEqual, config.min_nodes, "C5");
  }
  // C6: at most one outgoing edge per node for each unique label.
  for (const FusionNode &n : graph.nodes()) {
    std::map<std::string, std::vector<Term>> by_label;
    for (int e : out[n.id]) {
      const std::string &label = graph.edge(e).label;
      if (config.unique_label_set.count(label)) by_label[label].push_back(Term{e, 1});
    }
    for (auto &[label, terms] : by_label) {
      if (terms.size() > 1) add(std::move(terms), Relation::kLessEqual, 1, "C6");
    }
  }
  return model;
}

std::string ILPModel::Serialize() const {
  std::string out;
  for (const Variable &v : variables) {
    out += "VAR " + std::to_string(v.id) + " " + format_double(v.weight) + " " +
           std::to_string(v.governor) + " " + std::to_string(v.dependent) + " " +
           v.label + "\n";
  }
  for (const LinearConstraint &c : constraints) {
    out += "CON " + c.tag + " " + std::string(relation_symbol(c.relation)) + " " +
           std::to_string(c.rhs);
    for (const Term &t : c.terms) {
      out += " " + std::to_string(t.var) + ":" + std::to_string(t.coef);
    }
    out += "\n";
  }
  return out;
}

ILPModel ILPModel::Parse(std::string_view text) {
  ILPModel model;
  int line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.empty() || raw.front() == '#') continue;
    std::istringstream in{std::string(raw)};
    std::string kind;
    in >> kind;
    if (kind == "VAR") {
      Variable v;
      std::string weight;
      if (!(in >> v.id >> weight >> v.governor >> v.dependent >> v.label)) {
        throw ParseError("malformed VAR line", line_no);
      }
      try {
        size_t used = 0;
        v.weight = std::stod(weight, &used);
        if (used != weight.size()) throw std::invalid_argument(weight);
      } catch (const std::exception &) {
        throw ParseError("bad weight '" + weight + "'", line_no);
      }
      if (v.id != model.size()) throw ParseError("variable ids must be dense and ordered", line_no);
      if (!(v.weight >= 0.0)) throw ParseError("negative weight", line_no);
      v.edge = v.id;
      model.variables.push_back(std::move(v));
    } else if (kind == "CON") {
      LinearConstraint c;
      std::string rel;
      if (!(in >> c.tag >> rel >> c.rhs)) throw ParseError("malformed CON line", line_no);
      if (rel == "<=") c.relation = Relation::kLessEqual;
      else if (rel == "=") c.relation = Relation::kEqual;
      else if (rel == ">=") c.relation = Relation::kGreaterEqual;
      else throw ParseError("unknown relation '" + rel + "'", line_no);
      std::string term;
      while (in >> term) {
        size_t colon = term.find(':');
        Term t;
        if (colon == std::string::npos ||
            !parse_int(std::string_view(term).substr(0, colon), &t.var) ||
            !parse_int(std::string_view(term).substr(colon + 1), &t.coef)) {
          throw ParseError("bad term '" + term + "'", line_no);
        }
        if (t.var < 0 || t.var >= model.size()) {
          throw ParseError("term references unknown variable " + std::to_string(t.var),
                           line_no);
        }
        if (t.coef == 0) throw ParseError("zero coefficient", line_no);
        c.terms.push_back(t);
      }
      if (c.terms.empty()) throw ParseError("constraint without terms", line_no);
      model.constraints.push_back(std::move(c));
    } else {
      throw ParseError("unknown record '" + kind + "'", line_no);
    }
  }
  return model;
}

}  // namespace fusum
