#include "fusum/fusion.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fusum/anaphora.h"
#include "test_util.h"

namespace fusum {
namespace {

using testing::make_segment;
using testing::make_utterance;

int node_of(const FusionGraph &g, int position, int token_index) {
  for (const FusionNode &n : g.nodes()) {
    for (const Occurrence &o : n.occurrences) {
      if (o.utterance_position == position && o.token_index == token_index) return n.id;
    }
  }
  return -1;
}

int find_edge(const FusionGraph &g, int gov, int dep, const std::string &label) {
  for (const FusionEdge &e : g.edges()) {
    if (e.governor == gov && e.dependent == dep && e.label == label) return e.id;
  }
  return -1;
}

const Utterance kRed = make_utterance("r", {{"the", "DT", 4, "det"},
                                            {"red", "JJ", 4, "amod"},
                                            {"remote", "NN", 4, "nn"},
                                            {"control", "NN", 5, "nsubj"},
                                            {"broke", "VBD", 0, "root"}});
const Utterance kSell = make_utterance("s", {{"we", "PRP", 2, "nsubj"},
                                             {"sell", "VBP", 0, "root"},
                                             {"the", "DT", 5, "det"},
                                             {"remote", "NN", 5, "nn"},
                                             {"control", "NN", 2, "dobj"},
                                             {"here", "RB", 2, "advmod"}},
                                             2);

TEST(ContextOverlapTest, SharedLeftContext) {
  const FusionGraph g = build_fusion_graph(make_segment("s", {kRed}));
  const FusionNode &control = g.node(node_of(g, 1, 4));
  EXPECT_EQ(context_overlap(g, control, kSell.token(5), kSell), 2);
}

TEST(ContextOverlapTest, SentenceStartSharedRightNeighbor) {
  const Utterance a = make_utterance("a", {{"buttons", "NNS", 2, "nsubj"}, {"stick", "VBP", 0, "root"}});
  const Utterance b = make_utterance("b", {{"buttons", "NNS", 2, "nsubj"}, {"stick", "VBP", 0, "root"}}, 2);
  const FusionGraph g = build_fusion_graph(make_segment("s", {a}));
  EXPECT_EQ(context_overlap(g, g.node(node_of(g, 1, 1)), b.token(1), b), 1);
}

TEST(ContextOverlapTest, Disjoint) {
  const Utterance a = make_utterance("a", {{"old", "JJ", 2, "amod"}, {"case", "NN", 0, "root"}});
  const Utterance b = make_utterance("b", {{"case", "NN", 2, "nsubj"}, {"cracked", "VBD", 0, "root"}}, 2);
  const FusionGraph g = build_fusion_graph(make_segment("s", {a}));
  EXPECT_EQ(context_overlap(g, g.node(node_of(g, 1, 2)), b.token(1), b), 0);
}

TEST(AssignNodeTest, MergesSingleCandidate) {
  const FusionGraph g = build_fusion_graph(make_segment("s", {kRed, kSell}));
  EXPECT_EQ(node_of(g, 1, 3), node_of(g, 2, 4));  // remote
  EXPECT_EQ(node_of(g, 1, 4), node_of(g, 2, 5));  // control
  EXPECT_NE(node_of(g, 1, 5), node_of(g, 2, 2));  // broke vs sell
  const FusionNode &we = g.node(node_of(g, 2, 1));
  EXPECT_EQ(we.key.word, "we");
  EXPECT_EQ(we.key.discriminator, 0);
  EXPECT_EQ(we.occurrences.size(), 1u);
}

TEST(AssignNodeTest, HighestOverlapWins) {
  // Two "control" nodes: the first (overlap 0) and the second (overlap 2).
  const Utterance u1 = make_utterance("u1", {{"control", "NN", 2, "nsubj"},
                                             {"stuck", "VBD", 0, "root"},
                                             {"the", "DT", 5, "det"},
                                             {"remote", "NN", 5, "nn"},
                                             {"control", "NN", 2, "dobj"}});
  const FusionGraph g = build_fusion_graph(make_segment("s", {u1, kSell}));
  const int first = node_of(g, 1, 1);
  const int second = node_of(g, 1, 5);
  ASSERT_NE(first, second);
  EXPECT_EQ(g.node(first).key.discriminator, 0);
  EXPECT_EQ(g.node(second).key.discriminator, 1);
  EXPECT_EQ(node_of(g, 2, 5), second);
}

TEST(AssignNodeTest, TieGoesToSmallestId) {
  const Utterance u1 = make_utterance("u1", {{"go", "VB", 0, "root"}, {"go", "VB", 1, "dep"}});
  const Utterance u2 = make_utterance("u2", {{"go", "VB", 0, "root"}}, 2);
  const FusionGraph g = build_fusion_graph(make_segment("s", {u1, u2}));
  EXPECT_EQ(node_of(g, 2, 1), node_of(g, 1, 1));
}

TEST(AssignNodeTest, ClosedClassNeedsMatchingLabel) {
  const Utterance u1 = make_utterance("u1", {{"the", "DT", 2, "det"}, {"case", "NN", 0, "root"}});
  const Utterance u2 = make_utterance("u2", {{"the", "DT", 2, "dep"}, {"case", "NN", 0, "root"}}, 2);
  const FusionGraph g = build_fusion_graph(make_segment("s", {u1, u2}));
  EXPECT_NE(node_of(g, 1, 1), node_of(g, 2, 1));
  EXPECT_EQ(node_of(g, 1, 2), node_of(g, 2, 2));
}

TEST(BuildFusionGraphTest, SingleUtteranceIsItsTree) {
  const FusionGraph g = build_fusion_graph(make_segment("s", {kSell}));
  EXPECT_EQ(g.lexical_node_count(), kSell.size());
  EXPECT_EQ(g.segment_size(), 1);
  // START->ROOT, one edge per arc, one END edge per lexical node.
  EXPECT_EQ(static_cast<int>(g.edges().size()), 1 + 2 * kSell.size());
  const int root = g.root_of(1);
  EXPECT_GE(find_edge(g, FusionGraph::kStart, root, kStartLabel), 0);
  EXPECT_GE(find_edge(g, root, node_of(g, 1, 2), "root"), 0);
  EXPECT_GE(find_edge(g, node_of(g, 1, 2), node_of(g, 1, 6), "advmod"), 0);
  EXPECT_TRUE(g.incoming(FusionGraph::kStart).empty());
  EXPECT_TRUE(g.outgoing(FusionGraph::kEnd).empty());
  EXPECT_EQ(g.merged_content_node_count(), 0);
}

TEST(BuildFusionGraphTest, RepeatedArcSharesEdge) {
  const Utterance u1 = make_utterance("u1", {{"the", "DT", 2, "det"},
                                             {"remote", "NN", 3, "nsubj"},
                                             {"broke", "VBD", 0, "root"}});
  const Utterance u2 = make_utterance("u2", {{"the", "DT", 2, "det"},
                                             {"remote", "NN", 3, "nsubj"},
                                             {"works", "VBZ", 0, "root"}});
  const FusionGraph g = build_fusion_graph(make_segment("s", {u1, u2}));
  const int det = find_edge(g, node_of(g, 1, 2), node_of(g, 1, 1), "det");
  ASSERT_GE(det, 0);
  EXPECT_EQ(g.edge(det).sources, (std::vector<int>{1, 2}));
  EXPECT_EQ(g.merged_content_node_count(), 1);  // remote; "the" is closed class
  const int end = find_edge(g, node_of(g, 1, 1), FusionGraph::kEnd, kEndLabel);
  ASSERT_GE(end, 0);
  EXPECT_EQ(g.edge(end).sources, (std::vector<int>{1, 2}));
}

TEST(BuildFusionGraphTest, RemotePairMergesAfterResolution) {
  const auto utts = parse_conllu(read_file(testing::data_path("remote_example.conllu")),
                                 PosColumn::kXpos);
  const TopicSegment seg = make_segment("seg1", utts);
  const FusionGraph plain = build_fusion_graph(seg);
  const FusionGraph resolved =
      build_fusion_graph(resolve_segment(seg, PronounLexicon::Default(), 5));
  EXPECT_GE(resolved.merged_content_node_count(), 2);
  EXPECT_LT(plain.merged_content_node_count(), resolved.merged_content_node_count());
}

TEST(BuildFusionGraphTest, EmptySegmentIsAnError) {
  EXPECT_THROW(build_fusion_graph(TopicSegment{"e", {}}), Error);
}

// Random segments: one occurrence per utterance per node, every arc kept
// once or counted as dropped, and deterministic serialization.
TEST(FusionPropertyTest, RandomSegments) {
  std::mt19937 rng(21);
  const std::vector<std::pair<std::string, std::string>> vocab = {
      {"the", "DT"}, {"remote", "NN"}, {"control", "NN"}, {"we", "PRP"},
      {"sell", "VBP"}, {"new", "JJ"}, {"button", "NN"}, {"of", "IN"}};
  const std::vector<std::string> labels = {"det", "nsubj", "dobj", "amod", "prep"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Utterance> utts;
    const int n_utts = 1 + static_cast<int>(rng() % 5);
    for (int k = 0; k < n_utts; ++k) {
      const int n = 1 + static_cast<int>(rng() % 10);
      std::vector<testing::Tok> toks;
      for (int i = 1; i <= n; ++i) {
        const auto &[w, p] = vocab[rng() % vocab.size()];
        const int head = i == 1 ? 0 : 1 + static_cast<int>(rng() % (i - 1));
        toks.push_back({w, p, head, head ? labels[rng() % labels.size()] : "root"});
      }
      utts.push_back(make_utterance("u" + std::to_string(k), toks));
    }
    const TopicSegment seg = make_segment("s", utts);
    const FusionGraph g = build_fusion_graph(seg);
    for (const FusionNode &node : g.nodes()) {
      std::set<int> positions;
      for (const Occurrence &o : node.occurrences) {
        EXPECT_TRUE(positions.insert(o.utterance_position).second);
      }
    }
    std::set<std::tuple<int, int, std::string>> triples;
    for (const FusionEdge &e : g.edges()) {
      EXPECT_NE(e.governor, e.dependent);
      EXPECT_TRUE(triples.insert({e.governor, e.dependent, e.label}).second);
      EXPECT_TRUE(std::is_sorted(e.sources.begin(), e.sources.end()));
    }
    int kept = 0;
    for (const Utterance &u : seg.utterances) {
      for (const Token &t : u.tokens) {
        const int dep = node_of(g, u.position, t.index);
        const int gov = t.head ? node_of(g, u.position, t.head) : g.root_of(u.position);
        if (gov == dep) continue;
        const int e = find_edge(g, gov, dep, t.label);
        ASSERT_GE(e, 0);
        const auto &src = g.edge(e).sources;
        EXPECT_TRUE(std::binary_search(src.begin(), src.end(), u.position));
        ++kept;
      }
    }
    int total = 0;
    for (const Utterance &u : seg.utterances) total += u.size();
    EXPECT_EQ(kept + g.dropped_self_loops(), total);
    if (n_utts == 1) {
      EXPECT_EQ(g.lexical_node_count(), utts[0].size());
    }
    EXPECT_EQ(build_fusion_graph(seg).Serialize(), g.Serialize());
  }
}

}  // namespace
}  // namespace fusum
