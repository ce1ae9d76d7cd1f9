#include "pdmn/workbook.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace pdmn;

namespace {

std::string read_file(const std::string& name) {
  std::ifstream in(std::string(PDMN_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<ParseError> errors_of(std::string_view source) {
  try {
    parse_workbooks(source, "t.pdmn");
  } catch (const ParseErrors& e) {
    return e.errors();
  }
  return {};
}

const char* kBmi = R"(
type
| Name  | Elements                          |
| Index | 17, 18.5, 22, 25, 31              |
| Level | Underweight, Normal, Overweight   |

predicate
| Healthy |

function
| Name      | Type  |
| BMI       | Index |
| BMI level | Level |

decision "BMILevel" U
| BMI        || BMI level   |
| < 18.5     || Underweight |
| [18.5..25] || Normal      |
| > 25       || Overweight  |

decision "Healthy" U
| BMI level               || Healthy |
| Normal                  || yes     |
| Overweight, Underweight || NO      |
)";

}  // namespace

TEST(Workbook, ParsesEarthquake) {
  auto m = parse_workbook(read_file("earthquake.pdmn"), "earthquake.pdmn");
  EXPECT_EQ(m.name, "Earthquake");
  EXPECT_EQ(m.glossary.types().size(), 2u);
  EXPECT_EQ(m.glossary.predicates().size(), 4u);
  ASSERT_EQ(m.tables.size(), 5u);

  const auto& quake = m.tables[1];
  EXPECT_EQ(quake.policy, HitPolicy::Choice);
  EXPECT_TRUE(quake.inputs.empty());
  ASSERT_EQ(quake.outputs.size(), 1u);
  EXPECT_EQ(quake.outputs[0].width, 3u);
  ASSERT_TRUE(quake.value_row);
  EXPECT_EQ(to_string((*quake.value_row)[2]), "none");
  ASSERT_EQ(quake.rows.size(), 1u);
  EXPECT_EQ(to_string(quake.rows[0].outputs[1]), "0.19");

  const auto& alarm = m.tables[3];
  EXPECT_EQ(alarm.rows.size(), 5u);
  EXPECT_EQ(alarm.rows[3].span.value.line, 41u);

  const auto& any = m.tables[4];
  EXPECT_FALSE(any.is_probabilistic());
  ASSERT_EQ(m.queries.entries.size(), 2u);
  EXPECT_FALSE(m.queries.implicit_all);
  EXPECT_TRUE(validate_model(m).empty());
}

TEST(Workbook, ModelNameDefaultsToFileStem) {
  auto m = parse_workbook("type\n| T | a |\npredicate\n| p |\n", "dir/sample.pdmn");
  EXPECT_EQ(m.name, "sample");
  EXPECT_TRUE(m.queries.implicit_all);
  EXPECT_EQ(m.queries.entries.size(), 1u);
}

TEST(Workbook, CoinTablesAndClosedWorldRow) {
  auto m = parse_workbook(read_file("coins.pdmn"));
  const auto& heads = m.tables[2];
  EXPECT_FALSE(heads.is_probabilistic());
  ASSERT_EQ(heads.rows.size(), 4u);
  EXPECT_EQ(heads.rows[3].outputs, (std::vector<CellExpr>{BoolLiteral{false}, BoolLiteral{false}}));
  EXPECT_TRUE(m.tables[0].is_probabilistic());
}

TEST(Workbook, FractionsKeptInChoiceTables) {
  auto m = parse_workbook(read_file("dice.pdmn"));
  const auto& dice = m.tables[1];
  EXPECT_EQ(dice.slot_count(), 6u);
  EXPECT_EQ(to_string(dice.rows[0].outputs[0]), "1/6");
  EXPECT_EQ(to_string(dice.rows[1].outputs[5]), "0.5");
  ASSERT_EQ(m.queries.entries.size(), 1u);
  ASSERT_TRUE(m.queries.entries[0].value);
  EXPECT_EQ(to_string(*m.queries.entries[0].value), "six");
}

TEST(Workbook, ExpansionCells) {
  auto m = parse_workbook(kBmi);
  const auto& level = m.tables[0];
  EXPECT_TRUE(std::holds_alternative<Comparison>(level.rows[0].inputs[0]));
  EXPECT_TRUE(std::holds_alternative<Range>(level.rows[1].inputs[0]));
  const auto& healthy = m.tables[1];
  EXPECT_TRUE(std::holds_alternative<ValueSet>(healthy.rows[1].inputs[0]));
  EXPECT_EQ(healthy.rows[0].outputs[0], CellExpr{BoolLiteral{true}});
  EXPECT_EQ(healthy.rows[1].outputs[0], CellExpr{BoolLiteral{false}});
}

TEST(Workbook, SeveralModels) {
  std::string two = "model \"A\"\ntype\n| T | a |\npredicate\n| p |\nmodel \"B\"\ntype\n| T | b |\npredicate\n| q |\n";
  auto all = parse_workbooks(two);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(parse_workbook(two, "", "B").glossary.predicates()[0].raw_name, "q");
  EXPECT_EQ(parse_workbook(two).name, "A");
  EXPECT_THROW(parse_workbook(two, "", "C"), ParseErrors);
}

TEST(Workbook, FactTables) {
  auto m = parse_workbook(R"(
type
| Person  | ann, bob |
| Vaccine | a, b     |
predicate
| Person contacted Person |
function
| vaccine of Person | Vaccine |
fact "Known"
| ann contacted bob | vaccine of bob = a |
)");
  ASSERT_EQ(m.facts.size(), 1u);
  ASSERT_EQ(m.facts[0].rows.size(), 2u);
  EXPECT_EQ(m.facts[0].rows[1].value->text, "a");
  EXPECT_FALSE(errors_of("type\n| P | a |\npredicate\n| P likes P |\nfact\n| X likes a |\n").empty());
}

TEST(Workbook, ErrorsCarryPositions) {
  auto errors = errors_of(R"(type
| Person | ann |
predicate
| Person calls |
decision "Calls" U
| X calls || X calls |
| Maybe   || Yes     |
)");
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].code, ErrorCode::TypeMismatch);
  EXPECT_EQ(errors[0].span.line, 7u);
  EXPECT_EQ(errors[0].span.column, 3u);
  EXPECT_EQ(errors[0].span.file, "t.pdmn");
}

TEST(Workbook, CollectsSeveralErrors) {
  auto errors = errors_of(R"(type
| Person | ann |
predicate
| Person calls |
decision "A" X
| X calls || X calls |
decision "B" U
| X shouts || X calls |
| Yes      || Yes     |
query
| carl calls |
)");
  ASSERT_EQ(errors.size(), 3u);
  EXPECT_EQ(errors[0].code, ErrorCode::UnknownPolicy);
  EXPECT_EQ(errors[1].code, ErrorCode::UnknownSymbol);
  EXPECT_EQ(errors[2].code, ErrorCode::UnknownElement);
}

TEST(Workbook, StructuralErrors) {
  EXPECT_EQ(errors_of("")[0].message, "no glossary Type table found");
  EXPECT_EQ(errors_of("type\n| T | a |\npredicate\n| p |\ndecision \"d\" C\n| p || p |\n")[0].code,
            ErrorCode::UnknownPolicy);
  EXPECT_EQ(errors_of("type\n| T | a |\npredicate\n| p |\ndecision \"d\" U\n| p | p |\n")[0].code,
            ErrorCode::SyntaxError);
  EXPECT_EQ(errors_of("| a |\n")[0].code, ErrorCode::SyntaxError);
  EXPECT_EQ(errors_of("type\n| T | a, b, a |\n")[0].code, ErrorCode::DuplicateDecl);
  EXPECT_EQ(errors_of("type\n| T | a |\npredicate\n| p |\nquery\n| p = a |\n")[0].code, ErrorCode::NotAFunction);
  EXPECT_EQ(errors_of("query\n| p |\n")[0].code, ErrorCode::UnknownSymbol);
}

TEST(Workbook, ProbabilityCells) {
  auto base = std::string("type\n| T | a |\npredicate\n| p |\ndecision \"d\" U\n|| p |\n|| Yes |\n");
  EXPECT_EQ(errors_of(base + "|| 1.5 |\n")[0].code, ErrorCode::InvalidProbability);
  EXPECT_EQ(errors_of(base + "|| 1/3 |\n").size(), 0u);
  // A single numeric row is not enough to make an output-value row.
  EXPECT_FALSE(errors_of("type\n| T | a |\npredicate\n| p |\ndecision \"d\" U\n|| p |\n|| Yes |\n").size());
}

TEST(Workbook, MergedHeaderNeedsValueRow) {
  auto errors = errors_of(R"(type
| V | a, b |
function
| f | V |
decision "d" U
|| f | |
|| a | b |
)");
  ASSERT_FALSE(errors.empty());
  EXPECT_EQ(errors[0].code, ErrorCode::InvalidTable);
}

TEST(Workbook, CellParser) {
  auto m = parse_workbook(kBmi);
  const auto& g = m.glossary;
  auto bmi = g.resolve_header("BMI");
  CellContext in{&g, &bmi, CellPosition::Input, false};
  EXPECT_EQ(parse_cell(">= 22", in), CellExpr(Comparison{CompareOp::GreaterEqual, 22}));
  EXPECT_EQ(parse_cell(" - ", in), CellExpr(DontCare{}));
  EXPECT_EQ(parse_cell("", in), CellExpr(DontCare{}));
  EXPECT_EQ(parse_cell("X", in), CellExpr(VarRef{'X'}));
  EXPECT_THROW(parse_cell("[25..18.5]", in), ModelError);
  EXPECT_THROW(parse_cell("< abc", in), ModelError);

  auto level = g.resolve_header("BMI level");
  CellContext lv{&g, &level, CellPosition::Input, false};
  EXPECT_THROW(parse_cell("> 3", lv), ModelError);
  EXPECT_EQ(parse_cell("Normal, Normal", lv), CellExpr(ValueLiteral{Element::parse("Normal")}));
  CellContext out{&g, &level, CellPosition::Output, false};
  EXPECT_THROW(parse_cell("X", out), ModelError);
  CellContext prob{&g, &level, CellPosition::Output, true};
  EXPECT_THROW(parse_cell("", prob), ModelError);
}

TEST(Workbook, RenderRoundTrips) {
  for (const char* file : {"earthquake.pdmn", "coins.pdmn", "coins_first.pdmn", "dice.pdmn", "infection.pdmn"}) {
    auto m = parse_workbook(read_file(file), file);
    auto text = render_workbook(m);
    EXPECT_EQ(parse_workbook(text), m) << file;
    EXPECT_EQ(render_workbook(parse_workbook(text)), text) << file;
  }
  auto bmi = parse_workbook(kBmi, "bmi.pdmn");
  EXPECT_EQ(parse_workbook(render_workbook(bmi)), bmi);
}
