// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fusum/pipeline.h"
#include "test_util.h"

namespace {

namespace fs = std::filesystem;
using namespace fusum;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string q(const fs::path &p) { return "'" + p.string() + "'"; }

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------

Outcome label_table() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, int>> counts = {
      {"auxpass", 4}, {"nsubjpass", 3}, {"aux", 3},   {"prep_with", 1},
      {"agent", 1},   {"prep_in", 1},   {"advmod", 1}};
  std::vector<Utterance> sents;
  for (const auto &[label, n] : counts) {
    for (int i = 0; i < n; ++i) {
      sents.push_back(testing::make_utterance(
          "p" + std::to_string(sents.size()),
          {{"it", "PRP", 2, label}, {"produced", "VBN", 0, "root"}}));
    }
  }
  const LabelStats stats = count_label_stats(BackgroundCorpus::FromUtterances(sents));
  const std::vector<double> expected = {0.286, 0.214, 0.214, 0.071, 0.071, 0.071, 0.071};
  std::ostringstream got;
  bool ok = true;
  for (size_t i = 0; i < counts.size(); ++i) {
    const double p = label_probability(stats, {"produced", "VBN"}, counts[i].first);
    const double r = std::round(p * 1000.0) / 1000.0;
    ok = ok && r == expected[i];
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.3f", i ? " " : "", r);
    got << buf;
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 1.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.3f s)", secs);
  return {ok, got.str() + buf};
}

// ---------------------------------------------------------------------------

Outcome solver_oracle() {
  const auto t0 = Clock::now();
  std::mt19937 rng(20131);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  int models = 0, mismatches = 0, infeasible = 0;
  for (; models < 250; ++models) {
    ILPModel m;
    const int n = 1 + static_cast<int>(rng() % 14);
    for (int i = 0; i < n; ++i) m.variables.push_back(Variable{i, i, weight(rng), 0, 0, "x"});
    // Most rows are built to admit a hidden assignment so that feasible
    // models dominate; the rest are unconstrained draws.
    std::vector<int> hidden(n);
    for (int &h : hidden) h = static_cast<int>(rng() % 2);
    const int rows = static_cast<int>(rng() % 11);
    for (int r = 0; r < rows; ++r) {
      LinearConstraint c;
      for (int i = 0; i < n; ++i) {
        if (rng() % 3) continue;
        const int coef = static_cast<int>(rng() % 5) - 2;
        if (coef) c.terms.push_back({i, coef});
      }
      if (c.terms.empty()) c.terms.push_back({static_cast<int>(rng() % n), 1});
      c.relation = static_cast<Relation>(rng() % 3);
      if (rng() % 5) {
        int activity = 0;
        for (const Term &t : c.terms) activity += t.coef * hidden[t.var];
        const int slack = static_cast<int>(rng() % 2);
        c.rhs = c.relation == Relation::kLessEqual      ? activity + slack
                : c.relation == Relation::kGreaterEqual ? activity - slack
                                                        : activity;
      } else {
        c.rhs = static_cast<int>(rng() % 5) - 1;
      }
      c.tag = "R";
      m.constraints.push_back(c);
    }
    const Solution a = solve(m);
    const Solution b = brute_force_solve(m);
    infeasible += a.status == SolveStatus::kInfeasible;
    if (a.status != b.status || a.objective != b.objective || a.selected != b.selected) {
      ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d models (%d infeasible), %d mismatches, %.2f s", models,
                infeasible, mismatches, secs);
  return {mismatches == 0 && models >= 200 && secs < 30.0, buf};
}

// ---------------------------------------------------------------------------

StatsCaches background_stats() {
  const auto corpus = BackgroundCorpus::FromUtterances(
      parse_conllu(read_file(testing::data_path("background.conllu"))));
  return build_stats(corpus);
}

// Random dependency tree over a meeting-like vocabulary.
Utterance random_utterance(std::mt19937 &rng, const std::string &id, int length) {
  struct Word {
    const char *surface;
    const char *pos;
  };
  static const std::vector<Word> vocab = {
      {"the", "DT"},      {"a", "DT"},         {"remote", "NN"},   {"control", "NN"},
      {"button", "NN"},   {"buttons", "NNS"},  {"we", "PRP"},      {"it", "PRP"},
      {"design", "VB"},   {"need", "VBP"},     {"is", "VBZ"},      {"new", "JJ"},
      {"simple", "JJ"},   {"case", "NN"},      {"battery", "NN"},  {"should", "MD"},
      {"be", "VB"},       {"with", "IN"},      {"of", "IN"},       {"and", "CC"},
      {"user", "NN"},     {"interface", "NN"}, {"cheap", "JJ"},    {"really", "RB"},
      {"um", "UH"},       {"so", "RB"},        {"think", "VBP"},   {"screen", "NN"}};
  static const std::vector<std::string> labels = {"det", "nsubj", "dobj", "amod", "nn",
                                                  "aux", "prep", "pobj", "advmod", "cc",
                                                  "conj", "discourse", "cop"};
  std::vector<testing::Tok> toks;
  // Random tree: a random permutation decides attachment order.
  std::vector<int> order(length);
  for (int i = 0; i < length; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> head(length + 1, 0);
  for (int i = 1; i < length; ++i) head[order[i]] = order[rng() % i];
  for (int i = 1; i <= length; ++i) {
    const Word &w = vocab[rng() % vocab.size()];
    toks.push_back({w.surface, w.pos, head[i], head[i] ? labels[rng() % labels.size()] : "root"});
  }
  return testing::make_utterance(id, toks);
}

// Independent re-check of a selected edge set against the required shape.
std::vector<std::string> shape_violations(const FusionGraph &g, const Solution &s, int max_nodes) {
  std::vector<std::string> out;
  int starts = 0, ends = 0;
  std::map<int, int> indegree;
  std::map<int, std::vector<int>> children;
  for (int e : s.selected) {
    const FusionEdge &edge = g.edge(e);
    if (edge.governor == FusionGraph::kStart) ++starts;
    if (edge.dependent == FusionGraph::kEnd) {
      ++ends;
      continue;
    }
    ++indegree[edge.dependent];
    children[edge.governor].push_back(edge.dependent);
  }
  if (starts != 1) out.push_back("start edges " + std::to_string(starts));
  if (ends != 1) out.push_back("end edges " + std::to_string(ends));
  int lexical = 0;
  for (const auto &[node, deg] : indegree) {
    if (deg != 1) out.push_back("node " + std::to_string(node) + " indegree " + std::to_string(deg));
    if (g.node(node).kind == NodeKind::kLexical) ++lexical;
  }
  if (lexical > max_nodes) out.push_back("lexical nodes " + std::to_string(lexical));
  // Reachability from START over selected edges; a cycle would leave its
  // nodes unreachable because each has in-degree one.
  std::set<int> seen = {FusionGraph::kStart};
  std::vector<int> stack = {FusionGraph::kStart};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int c : children[v]) {
      if (seen.insert(c).second) stack.push_back(c);
    }
  }
  for (const auto &[node, deg] : indegree) {
    if (!seen.count(node)) out.push_back("node " + std::to_string(node) + " unreachable");
  }
  for (int e : s.selected) {
    const FusionEdge &edge = g.edge(e);
    if (edge.dependent == FusionGraph::kEnd && !seen.count(edge.governor)) {
      out.push_back("end edge from uncovered node");
    }
  }
  return out;
}

Outcome structural_suite(const StatsCaches &stats) {
  std::mt19937 rng(404);
  int segments = 0, violations = 0;
  std::string first;
  for (; segments < 120; ++segments) {
    std::vector<Utterance> utts;
    const int n = 2 + static_cast<int>(rng() % 5);
    for (int k = 0; k < n; ++k) {
      utts.push_back(random_utterance(rng, "u" + std::to_string(k), 4 + static_cast<int>(rng() % 9)));
    }
    const TopicSegment seg = resolve_segment(testing::make_segment("s" + std::to_string(segments), utts),
                                             PronounLexicon::Default(), 5);
    const FusionGraph g = build_fusion_graph(seg);
    const ModelConfig config;
    const ILPModel m = build_model(g, stats.labels, stats.frequencies, seg, config);
    const Solution s = solve(m, arc_view(g));
    std::vector<std::string> v;
    if (s.status != SolveStatus::kOptimal) {
      v.push_back("not optimal");
    } else {
      v = shape_violations(g, s, config.max_nodes);
      try {
        const SelectedTree tree = extract_tree(s, g);
        if (render(order_nodes(tree, g)).empty()) v.push_back("empty rendering");
      } catch (const std::exception &e) {
        v.push_back(e.what());
      }
    }
    violations += static_cast<int>(v.size());
    if (!v.empty() && first.empty()) first = " first: segment " + std::to_string(segments) + " " + v[0];
  }
  return {violations == 0 && segments >= 100,
          std::to_string(segments) + " segments, " + std::to_string(violations) + " violations" + first};
}

// ---------------------------------------------------------------------------

struct CliRun {
  int exit_code = -1;
  std::string summary;
  nlohmann::json trace;
};

CliRun summarize_remote_pair(const fs::path &dir, const std::string &extra) {
  CliRun run;
  const auto r = testing::run_command(
      testing::cli() + extra + " summarize " + q(testing::data_path("remote_example.conllu")) + " " +
      q(testing::data_path("remote_example.tsv")) + " " + q(dir / "bg") + " -o " + q(dir / "out"));
  run.exit_code = r.exit_code;
  if (r.exit_code != 0) return run;
  run.summary = read_file((dir / "out" / "summary.txt").string());
  run.trace = nlohmann::json::parse(read_file((dir / "out" / "trace.jsonl").string()));
  return run;
}

Outcome remote_example() {
  const fs::path dir = testing::fresh_dir("accept_remote");
  const auto built = testing::run_command(testing::cli() + " stats build " +
                                          q(testing::data_path("background.conllu")) + " " +
                                          q(dir / "bg"));
  if (built.exit_code != 0) return {false, "stats build failed: " + built.output};
  const CliRun on = summarize_remote_pair(dir, "");
  const CliRun off = summarize_remote_pair(dir, " --anaphora off");
  if (on.exit_code != 0 || off.exit_code != 0) return {false, "summarize failed"};
  const int merged_on = on.trace["merged_content_nodes"].get<int>();
  const int merged_off = off.trace["merged_content_nodes"].get<int>();
  std::string text = on.summary;
  while (!text.empty() && text.back() == '\n') text.pop_back();
  const bool ok = merged_on >= 2 && on.summary.find("remote control") != std::string::npos &&
                  merged_off < merged_on;
  return {ok, "merged " + std::to_string(merged_on) + " vs " + std::to_string(merged_off) +
                  " without anaphora; \"" + text + "\""};
}

// ---------------------------------------------------------------------------

Outcome rouge() {
  bool ok = true;
  const RougeScore r2 = rouge_n({"a", "b", "c"}, {{"a", "b", "d"}}, 2);
  ok = ok && std::abs(r2.recall - 0.5) < 1e-9 && std::abs(r2.precision - 0.5) < 1e-9;
  const RougeScore su = rouge_su({"a", "b", "c"}, {{"a", "c", "b"}});
  ok = ok && std::abs(su.recall - 5.0 / 6.0) < 1e-9;
  const std::vector<std::string> t = {"the", "remote", "control", "is", "new"};
  for (const RougeScore &s : {rouge_n(t, {t}, 2), rouge_su(t, {t})}) {
    ok = ok && std::abs(s.recall - 1.0) < 1e-9 && std::abs(s.precision - 1.0) < 1e-9;
  }
  std::mt19937 rng(50);
  int asymmetric = 0;
  for (int i = 0; i < 50; ++i) {
    std::vector<std::string> a, b;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 15); ++k) a.push_back(std::string(1, 'a' + rng() % 6));
    for (int k = 0; k < 1 + static_cast<int>(rng() % 15); ++k) b.push_back(std::string(1, 'a' + rng() % 6));
    const RougeScore ab2 = rouge_n(a, {b}, 2), ba2 = rouge_n(b, {a}, 2);
    const RougeScore ab = rouge_su(a, {b}), ba = rouge_su(b, {a});
    if (ab2.recall != ba2.precision || ab2.precision != ba2.recall || ab.recall != ba.precision ||
        ab.precision != ba.recall) {
      ++asymmetric;
    }
  }
  return {ok && asymmetric == 0,
          "hand cases " + std::string(ok ? "match" : "differ") + ", " +
              std::to_string(asymmetric) + "/50 asymmetric"};
}

// ---------------------------------------------------------------------------

Outcome determinism() {
  std::vector<std::string> outputs[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = testing::fresh_dir("accept_det" + std::to_string(run));
    const auto built = testing::run_command(testing::cli() + " stats build " +
                                            q(testing::data_path("background.conllu")) + " " +
                                            q(dir / "bg"));
    const auto summarized = testing::run_command(
        testing::cli() + " --jobs 2 summarize " + q(testing::data_path("background.conllu")) + " " +
        q(testing::data_path("determinism.tsv")) + " " + q(dir / "bg") + " -o " + q(dir / "out"));
    if (built.exit_code != 0 || summarized.exit_code != 0) {
      return {false, "run failed: " + built.output + summarized.output};
    }
    for (const fs::path &p : {dir / "bg.labels.tsv", dir / "bg.freq.tsv", dir / "out" / "summary.txt",
                             dir / "out" / "trace.jsonl"}) {
      outputs[run].push_back(read_file(p.string()));
    }
  }
  int differing = 0;
  for (size_t i = 0; i < outputs[0].size(); ++i) differing += outputs[0][i] != outputs[1][i];
  const std::string summary = outputs[0][2];
  const long lines = std::count(summary.begin(), summary.end(), '\n');
  return {differing == 0 && lines > 0,
          std::to_string(differing) + " of 4 files differ, " + std::to_string(lines) + " summaries"};
}

// ---------------------------------------------------------------------------

// A segment large enough to give roughly 60 lexical nodes and 150 edge
// variables.
TopicSegment scale_segment() {
  std::mt19937 rng(60150);
  std::vector<Utterance> utts;
  for (int k = 0; k < 9; ++k) utts.push_back(random_utterance(rng, "u" + std::to_string(k), 12));
  return testing::make_segment("scale", utts);
}

Outcome scale(const StatsCaches &stats) {
  const TopicSegment seg = scale_segment();
  const FusionGraph g = build_fusion_graph(seg);
  const ILPModel m = build_model(g, stats.labels, stats.frequencies, seg, ModelConfig{});
  const auto t0 = Clock::now();
  Solution s;
  std::string error;
  try {
    s = solve(m, arc_view(g));
  } catch (const std::exception &e) {
    error = e.what();
  }
  const double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d lexical nodes, %d variables, %ld nodes explored, %ld cuts, %.2f s",
                g.lexical_node_count(), m.size(), s.nodes_explored, s.cuts_added, secs);
  const bool sized = g.lexical_node_count() >= 50 && g.lexical_node_count() <= 70 && m.size() >= 130;
  return {error.empty() && sized && s.status == SolveStatus::kOptimal && secs < 10.0,
          std::string(buf) + (error.empty() ? "" : " error: " + error)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const std::string &name, const std::function<Outcome()> &check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  };
  const StatsCaches stats = background_stats();
  report("label probability table", label_table);
  report("solver matches brute force", solver_oracle);
  report("selected structures are rooted trees", [&] { return structural_suite(stats); });
  report("worked example fuses remote control", remote_example);
  report("rouge hand cases and symmetry", rouge);
  report("pipeline is deterministic", determinism);
  report("scale segment solves in time", [&] { return scale(stats); });
  return failures ? 1 : 0;
}
