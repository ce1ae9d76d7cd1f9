#include "pdmn/logic.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace pdmn;
using namespace pdmn::logic;

namespace {

const char* kExample1 = R"(
0.8::a.
0.3::b(1); 0.5::b(2); 0.2::b(3).
c :- a.
c :- b(1).
query(c).
)";

const char* kEarthquake = R"(
person(john). person(mary).
intensity(heavy). intensity(mild). intensity(none).
0.7::burglary.
0.01::earthquake(heavy); 0.19::earthquake(mild); 0.8::earthquake(none).
0.9::alarm :- burglary, earthquake(heavy).
0.85::alarm :- burglary, earthquake(mild).
0.8::alarm :- burglary, earthquake(none).
0.1::alarm :- not(burglary), earthquake(mild).
0.3::alarm :- not(burglary), earthquake(heavy).
0.8::person_calls(X) :- alarm, person(X).
0.1::person_calls(X) :- not(alarm), person(X).
anycalls :- person_calls(X), person(X).
query(person_calls(X)).
query(anycalls).
)";

std::vector<std::string> names(const std::vector<Atom>& atoms) {
  std::vector<std::string> out;
  for (const auto& a : atoms) out.push_back(a.str());
  std::sort(out.begin(), out.end());
  return out;
}

Rational probability_of(const std::vector<QueryResult>& results, const std::string& atom) {
  for (const auto& r : results) {
    if (r.query.str() == atom) return r.probability;
  }
  ADD_FAILURE() << "no result for " << atom;
  return -1;
}

}  // namespace

TEST(ProgramParser, ReadsAllStatementForms) {
  auto p = parse_program(R"(
    % comment
    f(a).  1/6::g.
    h(X) :- f(X), \+ g, not(k(X)).
    0.5::r(X) :- f(X).
    0.2::d(1); 0.3::d(2) :- g.
    query(h(X)).
  )");
  ASSERT_EQ(p.statements.size(), 5u);
  EXPECT_EQ(to_string(p.statements[1]), "1/6::g.");
  EXPECT_EQ(to_string(p.statements[2]), "h(X) :- f(X), not(g), not(k(X)).");
  EXPECT_EQ(to_string(p.statements[3]), "0.5::r(X) :- f(X).");
  EXPECT_EQ(to_string(p.statements[4]), "0.2::d(1); 0.3::d(2) :- g.");
  ASSERT_EQ(p.queries.size(), 1u);
  EXPECT_EQ(p.queries[0].str(), "h(X)");
}

TEST(ProgramParser, ReportsPositions) {
  try {
    parse_program("a.\nb :- .\n");
    FAIL();
  } catch (const ProgramSyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_program("1.5::a."), ProgramSyntaxError);
  EXPECT_THROW(parse_program("0.6::a; 0.6::b."), ProgramSyntaxError);
}

TEST(Desugar, AnnotatedRulesGetFreshFacts) {
  auto p = desugar(parse_program("0.8::i(X) :- v(X,n), i(Y), c(X,Y), p(X), p(Y)."));
  ASSERT_EQ(p.statements.size(), 2u);
  EXPECT_EQ(to_string(p.statements[0]), "i(X) :- v(X,n), i(Y), c(X,Y), p(X), p(Y), aux1(X,Y).");
  EXPECT_EQ(to_string(p.statements[1]), "0.8::aux1(X,Y).");
}

TEST(Desugar, IdentityWithoutAnnotatedRules) {
  auto p = parse_program(kExample1);
  EXPECT_EQ(desugar(p), p);
}

TEST(Desugar, EarthquakeAlarmRulesGetFiveAuxFacts) {
  auto p = desugar(parse_program(kEarthquake));
  std::size_t aux = 0;
  for (const auto& s : p.statements) {
    const auto* c = std::get_if<Clause>(&s);
    if (c && c->is_probabilistic() && c->head.predicate.rfind("aux", 0) == 0 && c->head.args.empty()) ++aux;
  }
  EXPECT_EQ(aux, 5u);
}

TEST(Desugar, SkipsTakenNames) {
  auto p = desugar(parse_program("aux1. 0.5::h :- aux1."));
  EXPECT_EQ(to_string(p.statements[1]), "h :- aux1, aux2.");
}

TEST(Ground, InfectionRulesGroundOverPairs) {
  auto p = parse_program(R"(
    person(ann). person(bob). vaccine(a). vaccine(b). vaccine(n).
    0.36::vaccine_of(X,a); 0.63::vaccine_of(X,b); 0.01::vaccine_of(X,n) :- person(X).
    0.8::infected(X) :- vaccine_of(X,n), infected(Y), contacted(X,Y), person(X), person(Y).
    0.1::infected(X) :- vaccine_of(X,a), infected(Y), contacted(X,Y), person(X), person(Y).
    0.2::infected(X) :- vaccine_of(X,b), infected(Y), contacted(X,Y), person(X), person(Y).
  )");
  auto g = ground(desugar(p));
  EXPECT_EQ(g.disjunctions.size(), 2u);
  EXPECT_EQ(g.rules.size(), 12u);
}

TEST(Ground, PropositionalProgramUnchanged) {
  auto g = ground(parse_program(kExample1));
  EXPECT_EQ(g.probabilistic_facts.size(), 1u);
  EXPECT_EQ(g.disjunctions.size(), 1u);
  EXPECT_EQ(g.rules.size(), 2u);
}

TEST(Ground, UnsafeVariables) {
  EXPECT_THROW(ground(parse_program("h(X) :- not(g(X)).")), UnsafeVariable);
  EXPECT_THROW(ground(parse_program("f(X).")), UnsafeVariable);
  EXPECT_THROW(ground(parse_program("0.5::p(X). q :- p(X).")), UnsafeVariable);
  EXPECT_THROW(ground(parse_program("0.5::h :- a.")), std::invalid_argument);
}

TEST(Ground, OpenProbabilisticFactInstantiatedOnUse) {
  auto results = query_exact(parse_program("t(a). t(b). 0.5::p(X). q(X) :- p(X), t(X). query(q(X))."));
  ASSERT_EQ(results.size(), 2u);
  EXPECT_EQ(results[0].probability, Rational(1, 2));
}

TEST(Stratify, NegationGoesDown) {
  auto g = ground(parse_program(R"(
    0.5::heads1. 0.6::heads2.
    r1 :- heads1, heads2.
    r2 :- heads1, not(heads2).
    r3 :- not(heads1), heads2.
    twoheads :- r1.
    someheads :- r1.
    someheads :- r2, not(r1).
    someheads :- r3, not(r1), not(r2).
  )"));
  auto s = stratify(g);
  EXPECT_LT(s.level_of.at("r1/0"), s.level_of.at("someheads/0"));
  EXPECT_LT(s.level_of.at("r2/0"), s.level_of.at("someheads/0"));
}

TEST(Stratify, NegationFreeIsOneStratum) {
  auto s = stratify(ground(parse_program("a. b :- a. c :- b, a.")));
  EXPECT_EQ(s.levels.size(), 1u);
}

TEST(Stratify, NegativeCycleRejected) {
  try {
    stratify(ground(parse_program("p :- not(q). q :- not(p).")));
    FAIL();
  } catch (const NotStratified& e) {
    auto cycle = e.cycle();
    EXPECT_NE(std::find(cycle.begin(), cycle.end(), "p/0"), cycle.end());
    EXPECT_NE(std::find(cycle.begin(), cycle.end(), "q/0"), cycle.end());
  }
}

TEST(LeastModel, Example1Choices) {
  auto g = ground(parse_program(kExample1));
  EXPECT_EQ(names(least_model(g, {{true}, {1}})), (std::vector<std::string>{"a", "b(2)", "c"}));
  EXPECT_EQ(names(least_model(g, {{false}, {2}})), (std::vector<std::string>{"b(3)"}));
}

TEST(LeastModel, EmptyProgram) {
  EXPECT_TRUE(least_model(ground(LogicProgram{}), {}).empty());
}

TEST(LeastModel, AddingAFactIsMonotone) {
  auto base = ground(parse_program("b :- a. c :- b, d."));
  auto more = ground(parse_program("b :- a. c :- b, d. d."));
  auto small = names(least_model(base, {}));
  auto large = names(least_model(more, {}));
  EXPECT_TRUE(std::includes(large.begin(), large.end(), small.begin(), small.end()));
}

TEST(QueryExact, Example1) {
  auto r = query_exact(parse_program(kExample1));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].probability, Rational(43, 50));
  EXPECT_EQ(r[0].decimal(), "0.86");
}

TEST(QueryExact, Coins) {
  auto r = query_exact(parse_program(R"(
    0.5::heads1. 0.6::heads2.
    twoHeads :- heads1, heads2.
    someHeads :- heads1, heads2.
    someHeads :- heads1, not(heads2).
    someHeads :- not(heads1), heads2.
    query(twoHeads). query(someHeads).
  )"));
  EXPECT_EQ(probability_of(r, "twoHeads"), Rational(3, 10));
  EXPECT_EQ(probability_of(r, "someHeads"), Rational(4, 5));
}

TEST(QueryExact, Earthquake) {
  Rational alarm = Rational(57395, 100000);
  EXPECT_EQ(alarm, Rational(7, 10) * (Rational(1, 100) * Rational(9, 10) + Rational(19, 100) * Rational(85, 100) +
                                       Rational(8, 10) * Rational(8, 10)) +
                       Rational(3, 10) * (Rational(19, 100) * Rational(1, 10) + Rational(1, 100) * Rational(3, 10)));
  Rational calls = Rational(8, 10) * alarm + Rational(1, 10) * (1 - alarm);
  Rational any = Rational(96, 100) * alarm + Rational(19, 100) * (1 - alarm);

  auto e = evaluate(parse_program(kEarthquake));
  EXPECT_EQ(e.total_weight, 1);
  ASSERT_EQ(e.results.size(), 3u);
  EXPECT_EQ(e.results[0].query.str(), "person_calls(john)");
  EXPECT_EQ(e.results[1].query.str(), "person_calls(mary)");
  EXPECT_EQ(e.results[0].probability, calls);
  EXPECT_EQ(e.results[1].probability, calls);
  EXPECT_EQ(e.results[2].probability, any);
  EXPECT_EQ(e.results[0].decimal(), "0.501765");
  EXPECT_EQ(e.results[2].decimal(), "0.6319415");
}

TEST(QueryExact, UndefinedAtomIsZero) {
  auto r = query_exact(parse_program("0.5::a. query(b)."));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].probability, 0);
}

TEST(QueryExact, ProbabilisticFactKeepsItsAnnotation) {
  auto r = query_exact(parse_program("1/7::f. g :- f. query(f)."));
  EXPECT_EQ(r[0].probability, Rational(1, 7));
}

TEST(QueryExact, DisjunctionNoneBranch) {
  auto r = query_exact(parse_program("0.2::d(1); 0.3::d(2). n :- not(d(1)), not(d(2)). query(n)."));
  EXPECT_EQ(r[0].probability, Rational(1, 2));
}

TEST(QueryExact, ConditionalDisjunctionRespectsBody) {
  auto r = query_exact(parse_program("0.5::b. 0.4::d(1); 0.6::d(2) :- b. query(d(1))."));
  EXPECT_EQ(r[0].probability, Rational(1, 5));
}

TEST(QueryExact, ChoiceCap) {
  std::string text;
  for (int i = 0; i < 5; ++i) text += "0.5::f" + std::to_string(i) + ". g :- f" + std::to_string(i) + ".\n";
  text += "query(g).";
  QueryOptions options;
  options.max_choice_points = 4;
  EXPECT_THROW(query_exact(parse_program(text), options), ChoiceSpaceTooLarge);
  options.max_choice_points = 5;
  EXPECT_EQ(query_exact(parse_program(text), options)[0].probability, Rational(31, 32));
}

TEST(QueryExact, ThreadsAgree) {
  QueryOptions options;
  options.threads = 4;
  auto parallel = query_exact(parse_program(kEarthquake), options);
  auto serial = query_exact(parse_program(kEarthquake));
  ASSERT_EQ(parallel.size(), serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) EXPECT_EQ(parallel[i].probability, serial[i].probability);
}

TEST(QueryExact, NotStratifiedSurfaces) {
  EXPECT_THROW(query_exact(parse_program("0.5::a. p :- not(q), a. q :- not(p). query(p).")), NotStratified);
}
