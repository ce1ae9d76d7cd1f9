#include "pdmn/emit.hpp"

#include <optional>

namespace pdmn {

namespace {

void emit_queries(const logic::LogicProgram& program, std::string& out) {
  for (const auto& q : program.queries) out += "query(" + q.str() + ").\n";
}

}  // namespace

std::string emit_program(const TranslationOutput& translation) {
  const auto& program = translation.program;
  std::string out;
  std::optional<std::string> section;
  for (std::size_t i = 0; i < program.statements.size(); ++i) {
    const auto& p = translation.row_provenance.at(i);
    // Types and fact tables share the leading facts section.
    std::string name = p.row ? p.table : "facts";
    if (section != name) {
      out += "% " + name + "\n";
      section = name;
    }
    out += logic::to_string(program.statements[i]) + "\n";
  }
  emit_queries(program, out);
  return out;
}

std::string emit_program(const logic::LogicProgram& program) {
  std::string out;
  for (const auto& s : program.statements) out += logic::to_string(s) + "\n";
  emit_queries(program, out);
  return out;
}

}  // namespace pdmn
