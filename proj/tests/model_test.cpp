#include "pdmn/model.hpp"

#include <gtest/gtest.h>

using namespace pdmn;

namespace {

Glossary infection_glossary() {
  Glossary g;
  g.add_type({"Person", {Element::parse("ann"), Element::parse("bob")}});
  g.add_type({"Vaccine", {Element::parse("a"), Element::parse("b"), Element::parse("n")}});
  g.add_function("vaccine of Person", "Vaccine");
  g.add_predicate("Person is infected");
  g.add_predicate("Person contacted Person");
  return g;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ModelError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ModelError";
  return ErrorCode::SyntaxError;
}

DecisionTable choice_table(const Glossary& g, std::vector<std::string> probabilities) {
  DecisionTable t;
  t.name = "Vaccine";
  t.policy = HitPolicy::Choice;
  auto h = g.resolve_header("vaccine of X", Side::Output);
  h.width = 3;
  t.outputs.push_back(h);
  t.value_row = std::vector<CellExpr>{ValueLiteral{Element::parse("a")}, ValueLiteral{Element::parse("b")},
                                      ValueLiteral{Element::parse("n")}};
  RuleRow row;
  for (const auto& p : probabilities) row.outputs.push_back(ProbabilityCell{*Probability::parse(p)});
  t.rows.push_back(row);
  return t;
}

}  // namespace

TEST(Mangle, LowercasesAndJoins) {
  EXPECT_EQ(mangle_name("vaccine of Person"), "vaccine_of_person");
  EXPECT_EQ(mangle_name("Person   calls"), "person_calls");
  EXPECT_EQ(mangle_name("twoHeads"), "twoheads");
  EXPECT_EQ(mangle_name(mangle_name("Throwing Dice")), mangle_name("Throwing Dice"));
  EXPECT_EQ(code_of([] { mangle_name("2fast"); }), ErrorCode::InvalidName);
  EXPECT_EQ(code_of([] { mangle_name("a-b"); }), ErrorCode::InvalidName);
  EXPECT_EQ(code_of([] { mangle_name("   "); }), ErrorCode::InvalidName);
}

TEST(Element, LogicNames) {
  EXPECT_EQ(Element::parse("Ann").logic_name(), "ann");
  EXPECT_EQ(Element::parse("18.50").logic_name(), "18.5");
  EXPECT_TRUE(Element::parse("25").is_numeric());
}

TEST(Glossary, TypeChecks) {
  Glossary g;
  EXPECT_EQ(code_of([&] { g.add_type({"Empty", {}}); }), ErrorCode::InvalidType);
  EXPECT_EQ(code_of([&] { g.add_type({"Mixed", {Element::parse("a"), Element::parse("1")}}); }),
            ErrorCode::InvalidType);
  EXPECT_EQ(code_of([&] { g.add_type({"Letters", {Element::parse("X")}}); }), ErrorCode::InvalidType);
  EXPECT_EQ(code_of([&] { g.add_type({"Dup", {Element::parse("ann"), Element::parse("Ann")}}); }),
            ErrorCode::DuplicateDecl);
  g.add_type({"Person", {Element::parse("ann")}});
  EXPECT_EQ(code_of([&] { g.add_type({"person", {Element::parse("bob")}}); }), ErrorCode::DuplicateDecl);
  EXPECT_EQ(code_of([&] { g.add_function("age of Person", "Years"); }), ErrorCode::UnknownSymbol);
  g.add_predicate("Person calls");
  EXPECT_EQ(code_of([&] { g.add_predicate("Person  calls"); }), ErrorCode::DuplicateDecl);
}

TEST(Glossary, ArgumentTypesComeFromTypeTokens) {
  auto g = infection_glossary();
  ASSERT_EQ(g.predicates().size(), 2u);
  EXPECT_EQ(g.predicates()[1].arg_types, (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(g.predicates()[1].mangled, "person_contacted_person");
  EXPECT_EQ(g.functions()[0].arg_types, (std::vector<std::size_t>{0}));
  EXPECT_EQ(g.functions()[0].range_type, 1u);
}

TEST(Glossary, ResolvesHeaders) {
  auto g = infection_glossary();
  auto h = g.resolve_header("X contacted Y");
  EXPECT_EQ(h.target, (SymbolRef{SymbolKind::Predicate, 1}));
  ASSERT_EQ(h.args.size(), 2u);
  EXPECT_EQ(std::get<Quantifier>(h.args[0]).letter, 'X');
  EXPECT_EQ(std::get<Quantifier>(h.args[1]).letter, 'Y');

  auto bob = g.resolve_header("vaccine of bob");
  EXPECT_TRUE(bob.target.is_function());
  EXPECT_EQ(std::get<Element>(bob.args[0]).text, "bob");
  EXPECT_EQ(g.render_header(bob), "vaccine of bob");
}

TEST(Glossary, HeaderErrors) {
  auto g = infection_glossary();
  EXPECT_EQ(code_of([&] { g.resolve_header("X likes Y"); }), ErrorCode::UnknownSymbol);
  EXPECT_EQ(code_of([&] { g.resolve_header("vaccine of carl"); }), ErrorCode::UnknownElement);
  EXPECT_EQ(code_of([&] { g.resolve_header("vaccine of a"); }), ErrorCode::TypeMismatch);
}

TEST(Glossary, AmbiguousHeaders) {
  Glossary g;
  g.add_type({"Person", {Element::parse("ann")}});
  g.add_type({"Pet", {Element::parse("rex")}});
  g.add_predicate("Person sleeps");
  g.add_predicate("Pet sleeps");
  EXPECT_EQ(code_of([&] { g.resolve_header("X sleeps"); }), ErrorCode::AmbiguousSymbol);
  EXPECT_EQ(g.resolve_header("rex sleeps").target.index, 1u);
}

TEST(Cells, CanonicalText) {
  EXPECT_EQ(to_string(CellExpr{DontCare{}}), "-");
  EXPECT_EQ(to_string(CellExpr{Comparison{CompareOp::LessEqual, 5}}), "<= 5");
  EXPECT_EQ(to_string(CellExpr{Range{Rational(37, 2), 25}}), "[18.5..25]");
  EXPECT_EQ(to_string(CellExpr{BoolLiteral{true}}), "Yes");
  EXPECT_EQ(to_string(CellExpr{ProbabilityCell{*Probability::parse("1/6")}}), "1/6");
}

TEST(Cells, MatchingElements) {
  TypeDecl bmi{"BMI", {Element::parse("17"), Element::parse("18.5"), Element::parse("22"), Element::parse("25"),
                       Element::parse("30")}};
  EXPECT_EQ(matching_elements(Comparison{CompareOp::Less, Rational(37, 2)}, bmi), (std::vector<std::size_t>{0}));
  EXPECT_EQ(matching_elements(Range{Rational(37, 2), 25}, bmi), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(matching_elements(Comparison{CompareOp::Greater, 25}, bmi), (std::vector<std::size_t>{4}));
  EXPECT_EQ(matching_elements(DontCare{}, bmi).size(), 5u);
  EXPECT_EQ(matching_elements(ValueSet{{Element::parse("30"), Element::parse("17")}}, bmi),
            (std::vector<std::size_t>{0, 4}));
}

TEST(Queries, DefaultQueriesCoverEverySymbol) {
  auto q = QuerySet::all_symbols(infection_glossary());
  EXPECT_TRUE(q.implicit_all);
  ASSERT_EQ(q.entries.size(), 3u);
  EXPECT_EQ(q.entries[1].args.size(), 2u);
  ASSERT_TRUE(q.entries[2].value);
  EXPECT_EQ(std::get<Quantifier>(*q.entries[2].value).letter, 'Y');
}

TEST(Quantifiers, TypesAndConflicts) {
  auto g = infection_glossary();
  DecisionTable t;
  t.name = "Infection";
  t.inputs.push_back(g.resolve_header("X contacted Y"));
  t.outputs.push_back(g.resolve_header("X is infected", Side::Output));
  auto types = quantifier_types(t, g);
  EXPECT_EQ(types.at('X'), 0u);
  EXPECT_EQ(types.at('Y'), 0u);

  t.inputs.push_back(g.resolve_header("vaccine of Y"));
  t.rows.push_back({{DontCare{}, VarRef{'Y'}}, {BoolLiteral{true}}, {}});
  EXPECT_EQ(code_of([&] { quantifier_types(t, g); }), ErrorCode::TypeMismatch);
  EXPECT_EQ(fresh_letters(3, "Y"), (std::vector<char>{'X', 'Z', 'W'}));
}

TEST(Validation, ChoiceRowAboveOneIsAnError) {
  PdmnModel m;
  m.glossary = infection_glossary();
  m.tables.push_back(choice_table(m.glossary, {"0.5", "0.5", "0.2"}));
  auto d = validate_model(m);
  ASSERT_TRUE(has_errors(d));
  EXPECT_EQ(d[0].code, "choice-sum-exceeds-one");
  EXPECT_EQ(d[0].row, 1u);

  m.tables[0] = choice_table(m.glossary, {"0.36", "0.63", "0.01"});
  EXPECT_FALSE(has_errors(validate_model(m)));
}

TEST(Validation, UniqueProbabilisticFunctionWarns) {
  PdmnModel m;
  m.glossary = infection_glossary();
  auto t = choice_table(m.glossary, {"0.5", "0.5", "0.5"});
  t.policy = HitPolicy::Unique;
  m.tables.push_back(t);
  auto d = validate_model(m);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].severity, Severity::Warning);
  EXPECT_EQ(d[0].code, "multi-valued-function");
  EXPECT_NE(d[0].message.find("several values"), std::string::npos);
}

TEST(Validation, ChoiceNeedsValueRow) {
  PdmnModel m;
  m.glossary = infection_glossary();
  auto t = choice_table(m.glossary, {"0.2", "0.2", "0.2"});
  t.value_row.reset();
  m.tables.push_back(t);
  auto d = validate_model(m);
  ASSERT_TRUE(has_errors(d));
  EXPECT_EQ(d[0].code, "malformed-table");
}

TEST(Validation, OverlapsAndUndefinedInputs) {
  PdmnModel m;
  m.glossary = infection_glossary();
  DecisionTable t;
  t.name = "Spread";
  t.policy = HitPolicy::Any;
  t.inputs.push_back(m.glossary.resolve_header("X contacted Y"));
  t.outputs.push_back(m.glossary.resolve_header("X is infected", Side::Output));
  t.rows.push_back({{BoolLiteral{true}}, {BoolLiteral{true}}, {}});
  t.rows.push_back({{DontCare{}}, {BoolLiteral{false}}, {}});
  m.tables.push_back(t);
  auto d = validate_model(m);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].code, "conflicting-any-rows");
  EXPECT_EQ(d[1].code, "undefined-input");

  m.tables[0].policy = HitPolicy::Unique;
  d = validate_model(m);
  EXPECT_EQ(d[0].code, "overlapping-rows");
  EXPECT_FALSE(has_errors(d));

  m.tables[0].policy = HitPolicy::First;
  EXPECT_EQ(validate_model(m).size(), 1u);
}

TEST(Validation, DuplicateTables) {
  PdmnModel m;
  m.glossary = infection_glossary();
  m.tables.push_back(choice_table(m.glossary, {"0.1", "0.1", "0.1"}));
  m.tables.push_back(choice_table(m.glossary, {"0.1", "0.1", "0.1"}));
  auto d = validate_model(m);
  EXPECT_TRUE(std::any_of(d.begin(), d.end(), [](const Diagnostic& x) { return x.code == "duplicate-table"; }));
}
