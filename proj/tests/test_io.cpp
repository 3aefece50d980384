#include <gtest/gtest.h>

#include "gpmod/io.hpp"
#include "gpmod/random.hpp"
#include "support/fixtures.hpp"
#include "support/util.hpp"

using namespace gpmod;

namespace {

const FiniteField f2(2, 1), f4(2, 2), f9(3, 2);

}  // namespace

TEST(Io, ModuleRoundTrip) {
  Rng rng(31);
  for (int i = 0; i < 10; ++i) {
    const auto m = module_of(f9, random_strict_rep(f9, rng)).module;
    const auto back = module_from_json(f9, module_to_json(f9, m));
    EXPECT_EQ(back.dim, m.dim);
    EXPECT_EQ(back.f, m.f);
    EXPECT_EQ(back.v, m.v);
  }
  const Rationals q;
  const auto m = fixtures::word_module(q, "V#F");
  const auto any = any_module_from_json(json::parse(module_to_json(q, m).dump()));
  EXPECT_TRUE(std::holds_alternative<Rationals>(any.field));
  EXPECT_EQ(std::get<GPModule<Rationals>>(any.module).f, m.f);
}

TEST(Io, ModuleFileWithShortFieldName) {
  const auto any = any_module_from_json(json::parse(R"({"field":"F4","dim":1,"F":[[1]],"V":[[0]]})"));
  const auto& k = std::get<FiniteField>(any.field);
  EXPECT_EQ(k.size(), 4u);
  EXPECT_EQ(std::get<GPModule<FiniteField>>(any.module).f, identity(k, 1));
}

TEST(Io, BuiltModuleListsBlocks) {
  const auto b = module_of(f2, trivial_rep(f2, quiver_of_word(Word::parse("F"))));
  const auto j = module_to_json(f2, b);
  EXPECT_EQ(j.at("blocks").size(), 2u);
  EXPECT_EQ(j.at("dim"), 2);
}

TEST(Io, ReportRoundTrip) {
  Rng rng(32);
  for (int i = 0; i < 10; ++i) {
    const auto r = classify(f4, module_of(f4, random_strict_rep(f4, rng)).module);
    const auto j = report_to_json(f4, r);
    EXPECT_EQ(report_to_json(f4, report_from_json(f4, j)), j);
  }
  const auto zero = report_to_json(f2, classify(f2, GPModule<FiniteField>{0, Matrix<FiniteField>(0, 0), Matrix<FiniteField>(0, 0)}));
  EXPECT_EQ(zero, json::parse(R"({"linear":[],"circular":[],"dim":0})"));
}

TEST(Io, RepresentationAndSpecRoundTrip) {
  Rng rng(33);
  for (int i = 0; i < 10; ++i) {
    const auto r = random_strict_rep(f9, rng);
    const auto back = rep_from_json(f9, rep_to_json(f9, r));
    EXPECT_EQ(back.quiver, r.quiver);
    EXPECT_EQ(back.maps, r.maps);
    const auto spec = spec_to_json(f9, r);
    EXPECT_EQ(std::get<FiniteField>(spec_field(spec)).descriptor(), f9.descriptor());
    EXPECT_EQ(spec_representation(f9, spec).maps, r.maps);
  }
}

TEST(Io, SpecShorthands) {
  const auto w = json::parse(R"({"word":["V#","F"],"mult":2})");
  EXPECT_TRUE(std::holds_alternative<FiniteField>(spec_field(w)));
  EXPECT_EQ(std::get<FiniteField>(spec_field(w)).size(), 2u);
  const auto r = spec_representation(f2, w);
  EXPECT_EQ(r.total_dim(), 6u);
  const auto p = spec_quiver(json::parse(R"({"periodic":["F","V#"],"m":4})"));
  EXPECT_TRUE(graph_iso(p, quiver_of_periodic(PeriodicWord(Word::parse("FV#")), 4)).has_value());
}

TEST(Io, RelationRoundTrip) {
  Rng rng(34);
  for (int i = 0; i < 20; ++i) {
    const auto b = random_relation(f4, 3, static_cast<long long>(rng.range(0, 2)) - 1, rng);
    EXPECT_EQ(relation_from_json(f4, relation_to_json(f4, b)), b);
  }
}

TEST(Io, MalformedInputs) {
  EXPECT_THROW(module_from_json(f2, json::parse(R"({"dim":2,"F":[[1,0]],"V":[[0,0],[0,0]]})")), parse_error);
  EXPECT_THROW(module_from_json(f2, json::parse(R"({"dim":-1,"F":[],"V":[]})")), parse_error);
  EXPECT_THROW(module_from_json(f2, json::parse(R"({"F":[],"V":[]})")), parse_error);
  EXPECT_THROW(any_module_from_json(json::parse(R"({"dim":0,"F":[],"V":[]})")), parse_error);
  EXPECT_THROW(spec_quiver(json::parse(R"({"nothing":1})")), parse_error);
  EXPECT_THROW(spec_representation(f2, json::parse(R"({"word":["F"],"representation":"odd"})")), parse_error);
  EXPECT_THROW(spec_representation(f2, json::parse(R"({"word":["F"],"representation":{"dims":{"0":1,"1":1},"maps":[]}})")),
               parse_error);
  EXPECT_THROW(report_from_json(f2, json::parse(R"({"linear":[{"word":["F"]}],"circular":[],"dim":2})")), parse_error);
  EXPECT_THROW(relation_from_json(f2, json::parse(R"({"twist":0})")), parse_error);
  EXPECT_THROW(word_from_json(json::parse(R"(["F","X"])")), parse_error);
}
