#pragma once

// ProbLog source text for translated programs.

#include "pdmn/logic.hpp"
#include "pdmn/translate.hpp"

#include <string>

namespace pdmn {

/// `% facts`, the type and fact lines, one `% <Table>` section per decision
/// table, then the queries. One statement per line.
std::string emit_program(const TranslationOutput& translation);

/// Statements then queries, without section comments.
std::string emit_program(const logic::LogicProgram& program);

}  // namespace pdmn
