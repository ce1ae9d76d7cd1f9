#pragma once

// Reader and writer for the textual pDMN workbook format.
//
//   model "Earthquake"
//
//   type
//   | Name      | Elements          |
//   | Person    | john, mary        |
//
//   decision "Alarm" U
//   | burglary | earthquake || alarm |
//   |          |            || Yes   |     <- output-value row
//   | Yes      | heavy      || 0.9   |
//
// See docs/workbook-format.md for the grammar.

#include "pdmn/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdmn {

struct ParseError {
  ErrorCode code = ErrorCode::SyntaxError;
  std::string message;
  SourceSpan span;

  std::string str() const;  // "file:line:col: error: message [code]"
};

class ParseErrors : public std::runtime_error {
 public:
  explicit ParseErrors(std::vector<ParseError> errors);
  const std::vector<ParseError>& errors() const noexcept { return errors_; }

 private:
  std::vector<ParseError> errors_;
};

enum class TableKind { Type, Predicate, Function, Decision, Fact, Query };

/// One table as laid out in the file, before any interpretation.
struct RawCell {
  std::string text;  // trimmed
  SourceSpan span;
};

struct RawTable {
  TableKind kind = TableKind::Decision;
  std::optional<std::string> name;
  std::optional<HitPolicy> policy;
  std::vector<std::vector<RawCell>> grid;
  /// Index of the `||` separator in each row (number of input cells).
  std::vector<std::optional<std::size_t>> separators;
  SourceSpan span;
};

enum class CellPosition { Input, Output, ValueRow };

/// What a cell is being parsed against: its column and whether the table
/// carries probabilities.
struct CellContext {
  const Glossary* glossary = nullptr;
  const ColumnHeader* column = nullptr;
  CellPosition position = CellPosition::Input;
  bool probabilistic = false;
};

/// Throws ModelError (InvalidProbability, TypeMismatch, UnknownElement,
/// SyntaxError).
CellExpr parse_cell(std::string_view text, const CellContext& context);

/// `X is infected`, `die value = six`, `vaccine of bob`. Throws ModelError.
QueryEntry parse_query_cell(std::string_view text, const Glossary& glossary);

/// Every model in the source, in file order. Throws ParseErrors.
std::vector<PdmnModel> parse_workbooks(std::string_view source, std::string_view file = {});

/// The model named `model_name`, or the first one. Throws ParseErrors.
PdmnModel parse_workbook(std::string_view source, std::string_view file = {},
                         std::optional<std::string_view> model_name = std::nullopt);

/// Canonical text for a model; parse_workbook(render_workbook(m)) == m.
std::string render_workbook(const PdmnModel& model);

}  // namespace pdmn
