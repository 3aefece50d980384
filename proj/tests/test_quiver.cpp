#include <gtest/gtest.h>

#include <set>

#include "gpmod/quiver.hpp"
#include "support/fixtures.hpp"

using namespace gpmod;

namespace {

bool same_converse(const ConverseGraph& a, const ConverseGraph& b) { return a.vertices == b.vertices && a.edges == b.edges; }

Quiver shifted(const Quiver& g, int by) {
  Quiver out;
  for (int v : g.vertices) out.vertices.push_back(v + by);
  for (const auto& e : g.edges) out.edges.push_back({e.tail + by, e.head + by, e.label});
  return out;
}

Quiver disjoint(const Quiver& a, const Quiver& b) {
  Quiver out = a;
  for (int v : b.vertices) out.vertices.push_back(v);
  for (const auto& e : b.edges) out.edges.push_back(e);
  return out;
}

std::set<int> conditions(const Quiver& g) {
  std::set<int> out;
  for (const auto& v : validate_kraft(g)) out.insert(v.condition);
  return out;
}

}  // namespace

TEST(Quiver, KraftValidation) {
  EXPECT_TRUE(is_kraft(fixtures::string_quiver()));
  EXPECT_TRUE(is_kraft(fixtures::band_quiver()));
  EXPECT_TRUE(is_kraft(Quiver{}));
  EXPECT_TRUE(conditions(fixtures::non_kraft_quiver()).count(1));
  EXPECT_THROW(require_kraft(fixtures::non_kraft_quiver()), domain_error);
}

TEST(Quiver, KraftConditionsTwoAndThree) {
  // two F-arrows out of one vertex
  EXPECT_TRUE(conditions(Quiver{{0, 1, 2}, {{0, 1, Label::F}, {0, 2, Label::F}}}).count(2));
  // head of F and tail of V
  EXPECT_TRUE(conditions(Quiver{{0, 1, 2}, {{0, 1, Label::F}, {1, 2, Label::V}}}).count(3));
  EXPECT_TRUE(conditions(Quiver{{0}, {{0, 1, Label::F}}}).count(0));
}

TEST(Quiver, ConverseGraphsOfStringAndBand) {
  EXPECT_TRUE(same_converse(converse_graph(fixtures::string_quiver()), fixtures::string_converse()));
  EXPECT_TRUE(same_converse(converse_graph(fixtures::band_quiver()), fixtures::band_converse()));
  EXPECT_EQ(from_converse(fixtures::string_converse()), fixtures::string_quiver());
}

TEST(Quiver, ConverseAndOpposite) {
  const Quiver only_f{{0, 1, 2}, {{0, 1, Label::F}, {1, 2, Label::F}}};
  const auto c = converse_graph(only_f);
  ASSERT_EQ(c.edges.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(c.edges[i].tail, only_f.edges[i].tail);
    EXPECT_EQ(c.edges[i].head, only_f.edges[i].head);
    EXPECT_EQ(c.edges[i].label, Letter::F);
  }
  for (const auto& g : {fixtures::string_quiver(), fixtures::band_quiver(), fixtures::non_kraft_quiver()})
    EXPECT_EQ(opposite_graph(opposite_graph(g)), g);
}

TEST(Quiver, ConnectedComponents) {
  EXPECT_EQ(connected_components(disjoint(fixtures::string_quiver(), shifted(fixtures::band_quiver(), 10))).size(), 2u);
  EXPECT_EQ(connected_components(Quiver{{0}, {}}).size(), 1u);
  EXPECT_TRUE(connected_components(Quiver{}).empty());
}

TEST(Quiver, ClassifyConnected) {
  const auto left = classify_connected(fixtures::string_quiver());
  EXPECT_FALSE(left.circular);
  EXPECT_EQ(left.order, (std::vector<int>{1, 2, 3, 4, 5, 6}));
  const auto loop = classify_connected(fixtures::loop());
  EXPECT_TRUE(loop.circular);
  EXPECT_EQ(loop.order.size(), 1u);
  const auto point = classify_connected(Quiver{{7}, {}});
  EXPECT_FALSE(point.circular);
  EXPECT_EQ(point.order.size(), 1u);
}

TEST(Quiver, WordsOfStringAndBand) {
  const auto left = word_of(fixtures::string_quiver());
  EXPECT_FALSE(left.circular);
  EXPECT_EQ(left.word, Word::parse("V#FV#FF"));
  const auto right = word_of(fixtures::band_quiver());
  EXPECT_TRUE(right.circular);
  EXPECT_EQ(right.pattern.pattern, Word::parse("FV#FV#V#"));
  EXPECT_EQ(right.m, 5u);
  EXPECT_TRUE(word_of(Quiver{{0}, {}}).word.empty());
}

TEST(Quiver, QuiversOfWords) {
  EXPECT_TRUE(graph_iso(quiver_of_word(Word::parse("V#FV#FF")), fixtures::string_quiver()).has_value());
  EXPECT_TRUE(graph_iso(quiver_of_periodic(PeriodicWord(Word::parse("FV#FV#V#")), 5), fixtures::band_quiver()));
  EXPECT_EQ(quiver_of_periodic(PeriodicWord(Word::parse("F")), 1), (Quiver{{0}, {{0, 0, Label::F}}}));
  const auto point = quiver_of_word(Word());
  EXPECT_EQ(point.vertices.size(), 1u);
  EXPECT_TRUE(point.edges.empty());
  EXPECT_THROW(quiver_of_periodic(PeriodicWord(Word::parse("FFV#")), 4), domain_error);
}

TEST(Quiver, ReductionsOfRepetitions) {
  const auto nonagon = fixtures::nonagon(), square = fixtures::square();
  EXPECT_TRUE(graph_iso(nonagon, quiver_of_periodic(PeriodicWord(Word::parse("FFV#")), 9)));
  EXPECT_TRUE(graph_iso(square, quiver_of_periodic(PeriodicWord(Word::parse("F")), 4)));
  EXPECT_TRUE(has_repetitions(nonagon));
  EXPECT_TRUE(has_repetitions(square));
  EXPECT_FALSE(has_repetitions(fixtures::triangle()));
  EXPECT_TRUE(graph_iso(reduce(nonagon), fixtures::triangle()));
  EXPECT_TRUE(graph_iso(reduce(square), fixtures::loop()));
  EXPECT_EQ(reduce(fixtures::band_quiver()), fixtures::band_quiver());
}

TEST(Quiver, RotationsAndPeriods) {
  EXPECT_EQ(rotate(Word::parse("FFV#"), 1), Word::parse("V#FF"));
  EXPECT_EQ(rotate(Word::parse("FFV#"), 3), Word::parse("FFV#"));
  const auto w = Word::parse("FFV#FFV#");
  EXPECT_EQ(minimal_period(w.letters), 3u);
  EXPECT_EQ(cyclic_period(w.letters), 3u);
  EXPECT_TRUE(graph_iso(quiver_of_periodic(PeriodicWord(Word::parse("FV#")), 2),
                        quiver_of_periodic(PeriodicWord(Word::parse("V#F")), 2)));
  EXPECT_FALSE(graph_iso(quiver_of_word(Word::parse("F")), quiver_of_word(Word::parse("V#"))));
  EXPECT_THROW(PeriodicWord(Word::parse("FF")), domain_error);
}

TEST(Quiver, WordProductAppliesTheRightFactorFirst) {
  const Word w = Word::parse("V#") * Word::parse("F");
  EXPECT_EQ(w, Word::parse("V#F"));
  EXPECT_EQ(w.at(1), Letter::F);
  EXPECT_TRUE(Word::parse("FF") < Word::parse("FV#"));
}

TEST(Quiver, NecklacesMatchEnumeration) {
  for (std::size_t len = 1; len <= 7; ++len) {
    std::set<std::string> want;
    for (unsigned bits = 0; bits < (1U << len); ++bits) {
      std::vector<Letter> d;
      for (std::size_t i = 0; i < len; ++i) d.push_back((bits >> (len - 1 - i)) & 1U ? Letter::Vs : Letter::F);
      const Word w = Word::written(d);
      if (cyclic_period(w.letters) != len) continue;
      bool least = true;
      for (std::size_t j = 1; j < len; ++j) least = least && !(rotate(w, j) < w);
      if (least) want.insert(w.str());
    }
    std::set<std::string> got;
    for (const auto& p : primitive_necklaces(len))
      if (p.period() == len) got.insert(p.pattern.str());
    EXPECT_EQ(got, want) << "length " << len;
  }
  EXPECT_EQ(primitive_necklaces(5).size(), 2u + 1u + 2u + 3u + 6u);
}

TEST(Quiver, JsonAndDot) {
  const auto g = fixtures::band_quiver();
  EXPECT_EQ(quiver_from_json(to_json(g)), g);
  const Word w = Word::parse("V#FV#FF");
  EXPECT_EQ(word_from_json(to_json(w)), w);
  EXPECT_EQ(to_json(w), json::parse(R"(["V#","F","V#","F","F"])"));
  const auto dot = to_dot(g);
  EXPECT_NE(dot.find("v1 -> v5 [label=\"F\"]"), std::string::npos);
  EXPECT_NE(dot.find("v4 -> v5 [label=\"V\"]"), std::string::npos);
}
