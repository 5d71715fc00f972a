#include "fusum/evaluate.h"

#include <gtest/gtest.h>

#include <random>

namespace fusum {
namespace {

using Tokens = std::vector<std::string>;

TEST(TokenizeTest, Examples) {
  EXPECT_EQ(tokenize_for_rouge("The re-mote!"), (Tokens{"the", "re", "mote"}));
  EXPECT_TRUE(tokenize_for_rouge("").empty());
  EXPECT_EQ(tokenize_for_rouge("A a A"), (Tokens{"a", "a", "a"}));
  EXPECT_EQ(tokenize_for_rouge("  r2d2, ok  "), (Tokens{"r2d2", "ok"}));
}

TEST(RougeNTest, HandCounted) {
  const RougeScore s = rouge_n({"a", "b", "c"}, {{"a", "b", "d"}}, 2);
  EXPECT_NEAR(s.recall, 0.5, 1e-9);
  EXPECT_NEAR(s.precision, 0.5, 1e-9);
  EXPECT_NEAR(s.f1, 0.5, 1e-9);
}

TEST(RougeNTest, IdentityAndEmpty) {
  const Tokens t = {"the", "remote", "control", "broke"};
  for (int n = 1; n <= 4; ++n) {
    const RougeScore s = rouge_n(t, {t}, n);
    EXPECT_DOUBLE_EQ(s.recall, 1.0);
    EXPECT_DOUBLE_EQ(s.precision, 1.0);
  }
  const RougeScore e = rouge_n({}, {t}, 2);
  EXPECT_EQ(e.recall, 0.0);
  EXPECT_EQ(e.precision, 0.0);
  EXPECT_EQ(e.f1, 0.0);
  EXPECT_THROW(rouge_n(t, {t}, 0), std::invalid_argument);
}

TEST(RougeNTest, ClippedCounts) {
  // Candidate repeats "a a" three times; the reference has it once.
  const RougeScore s = rouge_n({"a", "a", "a", "a"}, {{"a", "a", "b"}}, 2);
  EXPECT_NEAR(s.recall, 0.5, 1e-12);
  EXPECT_NEAR(s.precision, 1.0 / 3.0, 1e-12);
}

TEST(RougeNTest, MultipleReferences) {
  const Tokens cand = {"a", "b", "c"};
  const std::vector<Tokens> refs = {{"a", "b", "c"}, {"x", "y", "z"}};
  const RougeScore mean = rouge_n(cand, refs, 1, MultiReference::kMean);
  EXPECT_NEAR(mean.recall, 0.5, 1e-12);
  EXPECT_NEAR(mean.precision, 0.5, 1e-12);
  const RougeScore best = rouge_n(cand, refs, 1, MultiReference::kMax);
  EXPECT_DOUBLE_EQ(best.recall, 1.0);
}

TEST(RougeSuTest, HandCounted) {
  const RougeScore s = rouge_su({"a", "b", "c"}, {{"a", "c", "b"}});
  EXPECT_NEAR(s.recall, 5.0 / 6.0, 1e-9);
  EXPECT_NEAR(s.precision, 5.0 / 6.0, 1e-9);
  const RougeScore id = rouge_su({"a", "b", "c"}, {{"a", "b", "c"}});
  EXPECT_DOUBLE_EQ(id.recall, 1.0);
  EXPECT_DOUBLE_EQ(id.precision, 1.0);
}

TEST(RougeSuTest, ZeroGapIsBigramsPlusUnigrams) {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    Tokens c, r;
    for (int i = 0; i < 2 + static_cast<int>(rng() % 6); ++i) c.push_back(std::string(1, 'a' + rng() % 4));
    for (int i = 0; i < 2 + static_cast<int>(rng() % 6); ++i) r.push_back(std::string(1, 'a' + rng() % 4));
    const RougeScore su = rouge_su(c, {r}, 0);
    // Units are disjoint between the two families, so counts add.
    auto count = [](const Tokens &x, const Tokens &y, int n) {
      const RougeScore s = rouge_n(x, {y}, n);
      return s.recall * static_cast<double>(static_cast<int>(y.size()) - n + 1);
    };
    const double matches = count(c, r, 1) + count(c, r, 2);
    const double ref_units = static_cast<double>(2 * r.size() - 1);
    EXPECT_NEAR(su.recall, matches / ref_units, 1e-9) << "trial " << trial;
  }
}

TEST(RougePropertyTest, SwapSymmetryAndRanges) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    Tokens a, b;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 12); ++i) a.push_back(std::string(1, 'a' + rng() % 5));
    for (int i = 0; i < 1 + static_cast<int>(rng() % 12); ++i) b.push_back(std::string(1, 'a' + rng() % 5));
    for (int n = 1; n <= 2; ++n) {
      const RougeScore ab = rouge_n(a, {b}, n);
      const RougeScore ba = rouge_n(b, {a}, n);
      EXPECT_EQ(ab.recall, ba.precision);
      EXPECT_EQ(ab.precision, ba.recall);
    }
    const RougeScore ab = rouge_su(a, {b});
    const RougeScore ba = rouge_su(b, {a});
    EXPECT_EQ(ab.recall, ba.precision);
    EXPECT_EQ(ab.precision, ba.recall);
    for (const RougeScore &s : {ab, ba}) {
      EXPECT_GE(s.recall, 0.0);
      EXPECT_LE(s.recall, 1.0);
      const double p = s.precision, r = s.recall;
      EXPECT_NEAR(s.f1, p + r > 0 ? 2 * p * r / (p + r) : 0.0, 1e-12);
    }
    // Appending a bigram that occurs in the reference never lowers recall.
    if (b.size() >= 2) {
      Tokens longer = a;
      longer.push_back(b[0]);
      longer.push_back(b[1]);
      EXPECT_GE(rouge_n(longer, {b}, 2).recall, rouge_n(a, {b}, 2).recall);
    }
  }
}

TEST(PorterStemTest, KnownPairs) {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"caresses", "caress"}, {"ponies", "poni"},   {"cats", "cat"},
      {"agreed", "agre"},     {"plastered", "plaster"}, {"motoring", "motor"},
      {"hopping", "hop"},     {"happy", "happi"},   {"relational", "relat"},
      {"generalization", "gener"}, {"controls", "control"}, {"designing", "design"},
      {"a", "a"}};
  for (const auto &[w, s] : pairs) EXPECT_EQ(porter_stem(w), s) << w;
}

TEST(PreprocessTest, Options) {
  const Tokens t = {"the", "remote", "controls", "um"};
  EXPECT_EQ(preprocess_tokens(t, RougeOptions{}), t);
  RougeOptions o;
  o.remove_stopwords = true;
  o.stem = true;
  EXPECT_EQ(preprocess_tokens(t, o), (Tokens{"remot", "control"}));
  EXPECT_TRUE(is_rouge_stopword("the"));
  EXPECT_FALSE(is_rouge_stopword("remote"));
}

}  // namespace
}  // namespace fusum
