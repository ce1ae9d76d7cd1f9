#include "pdmn/emit.hpp"
#include "pdmn/workbook.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace pdmn;

namespace {

PdmnModel load(const std::string& name) {
  std::ifstream in(std::string(PDMN_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_workbook(ss.str(), name);
}

}  // namespace

TEST(Emit, EmptyProgram) {
  EXPECT_EQ(emit_program(TranslationOutput{}), "");
  EXPECT_EQ(emit_program(logic::LogicProgram{}), "");
}

TEST(Emit, SectionsFollowTables) {
  auto text = emit_program(translate_model(load("earthquake.pdmn")));
  auto facts = text.find("% facts\n");
  auto burglary = text.find("% Burglary\n0.7::burglary.\n");
  auto alarm = text.find("% Alarm\n0.9::alarm :- burglary, earthquake(heavy).\n");
  auto query = text.find("query(person_calls(X)).\nquery(anycalls).\n");
  EXPECT_EQ(facts, 0u);
  EXPECT_LT(facts, burglary);
  EXPECT_LT(burglary, alarm);
  EXPECT_LT(alarm, query);
  EXPECT_NE(burglary, std::string::npos);
  EXPECT_NE(query, std::string::npos);
}

TEST(Emit, PlainProgram) {
  auto p = logic::parse_program("0.5::a. b :- a, not(c). query(b).");
  EXPECT_EQ(emit_program(p), "0.5::a.\nb :- a, not(c).\nquery(b).\n");
}

TEST(Emit, ReparsedOutputGivesSameProbabilities) {
  for (const char* name : {"earthquake.pdmn", "coins.pdmn", "coins_first.pdmn", "dice.pdmn", "infection.pdmn"}) {
    auto t = translate_model(load(name));
    auto direct = logic::query_exact(t.program);
    auto reparsed = logic::parse_program(emit_program(t));
    EXPECT_EQ(reparsed, t.program) << name;
    auto again = logic::query_exact(reparsed);
    ASSERT_EQ(direct.size(), again.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
      EXPECT_EQ(direct[i].query, again[i].query);
      EXPECT_EQ(direct[i].probability, again[i].probability);
    }
  }
}

TEST(Emit, NotationPreserved) {
  auto p = logic::parse_program("1/6::a. 0.25::b. 2/8::c.");
  EXPECT_EQ(emit_program(p), "1/6::a.\n0.25::b.\n1/4::c.\n");
}
