#pragma once

// pDMN -> ProbLog translation.

#include "pdmn/logic.hpp"
#include "pdmn/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pdmn {

struct LogicSymbol {
  std::string name;
  std::size_t arity = 0;

  bool operator==(const LogicSymbol&) const = default;
};

/// Where a statement came from.
struct Provenance {
  std::string table;               // decision or fact table name; empty for type facts
  std::optional<std::size_t> row;  // 1-based rule row
  bool synthetic = false;          // type facts, row atoms, helper rules

  bool operator==(const Provenance&) const = default;
};

struct TranslationOutput {
  logic::LogicProgram program;
  std::map<SymbolRef, LogicSymbol> symbol_table;
  std::vector<Provenance> row_provenance;  // parallel to program.statements
};

struct TranslatedStatement {
  logic::Statement statement;
  Provenance provenance;
};

/// `person(ann). person(bob).`
std::vector<logic::Statement> translate_type(const TypeDecl& type);

/// Dispatches on the hit policy. Rows are numbered from 1.
std::vector<TranslatedStatement> translate_table(const DecisionTable& table, const Glossary& glossary);

std::vector<logic::Atom> translate_queries(const QuerySet& queries, const Glossary& glossary);

/// Type facts, fact-table facts, table clauses in document order, queries.
TranslationOutput translate_model(const PdmnModel& model);

/// Logic name of a type's membership predicate.
std::string type_predicate(const TypeDecl& type);

/// Name of the synthetic atom recording that row `row` (1-based) fired.
std::string row_predicate(const DecisionTable& table, std::size_t row);

}  // namespace pdmn
