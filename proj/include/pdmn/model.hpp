#pragma once

// In-memory representation of a pDMN workbook: glossary, decision tables,
// fact tables and queries, plus the checks that do not depend on parsing or
// translation.

#include "pdmn/rational.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pdmn {

struct SourceSpan {
  std::string file;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;

  std::string str() const;
  bool operator==(const SourceSpan&) const = default;
};

/// Wraps data that is carried along but excluded from structural equality
/// (source positions, mostly).
template <class T>
struct Incidental {
  T value{};
  friend bool operator==(const Incidental&, const Incidental&) noexcept { return true; }
};

enum class ErrorCode {
  SyntaxError,
  UnknownPolicy,
  DuplicateDecl,
  UnknownSymbol,
  AmbiguousSymbol,
  TypeMismatch,
  UnknownElement,
  InvalidProbability,
  InvalidName,
  InvalidType,
  NotAFunction,
  InvalidTable,
};

std::string_view to_string(ErrorCode code);

/// A model-level error, e.g. an unresolvable header. The parser attaches a
/// source span when rethrowing.
class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// ---------------------------------------------------------------------------
// Glossary

/// A type element: an identifier (`ann`) or an exact numeric literal (`18.5`).
struct Element {
  std::string text;
  std::optional<Rational> number;

  static Element parse(std::string_view text);

  bool is_numeric() const noexcept { return number.has_value(); }

  /// The constant used in the logic program: lowercased identifier or
  /// canonical decimal.
  std::string logic_name() const;

  bool operator==(const Element& other) const { return text == other.text; }
};

struct TypeDecl {
  std::string name;
  std::vector<Element> elements;

  bool is_numeric() const { return !elements.empty() && elements.front().is_numeric(); }
  std::optional<std::size_t> find(std::string_view element) const;
  bool operator==(const TypeDecl&) const = default;
};

struct PredicateDecl {
  std::string raw_name;                // "Person is infected"
  std::vector<std::size_t> arg_types;  // indices into Glossary::types()
  std::string mangled;                 // person_is_infected

  bool operator==(const PredicateDecl&) const = default;
};

struct FunctionDecl {
  std::string raw_name;
  std::vector<std::size_t> arg_types;
  std::size_t range_type = 0;
  std::string mangled;

  bool operator==(const FunctionDecl&) const = default;
};

enum class SymbolKind { Predicate, Function };

struct SymbolRef {
  SymbolKind kind = SymbolKind::Predicate;
  std::size_t index = 0;

  bool is_function() const noexcept { return kind == SymbolKind::Function; }
  auto operator<=>(const SymbolRef&) const = default;
};

/// A quantification variable: a single uppercase ASCII letter.
struct Quantifier {
  char letter = 'X';
  auto operator<=>(const Quantifier&) const = default;
};

using Argument = std::variant<Quantifier, Element>;

std::string to_string(const Argument& arg);

bool is_quantifier_letter(std::string_view token);

enum class Side { Input, Output };

struct ColumnHeader {
  SymbolRef target;
  std::vector<Argument> args;  // one per argument position
  Side side = Side::Input;
  std::size_t width = 1;  // grid columns spanned; >1 only for output headers of probabilistic tables
  Incidental<SourceSpan> span;

  bool operator==(const ColumnHeader&) const = default;
};

/// Lowercases and joins words with underscores: "vaccine of Person" ->
/// "vaccine_of_person". Throws ModelError(InvalidName).
std::string mangle_name(std::string_view raw_name);

class Glossary {
 public:
  /// Throws ModelError (InvalidType, DuplicateDecl, InvalidName).
  std::size_t add_type(TypeDecl type);
  std::size_t add_predicate(std::string_view raw_name);
  std::size_t add_function(std::string_view raw_name, std::string_view range_type);

  const std::vector<TypeDecl>& types() const noexcept { return types_; }
  const std::vector<PredicateDecl>& predicates() const noexcept { return predicates_; }
  const std::vector<FunctionDecl>& functions() const noexcept { return functions_; }

  std::optional<std::size_t> find_type(std::string_view name) const;

  const std::string& raw_name(SymbolRef ref) const;
  const std::string& mangled(SymbolRef ref) const;
  const std::vector<std::size_t>& arg_types(SymbolRef ref) const;
  /// Range type of a function.
  const TypeDecl& range(SymbolRef ref) const;

  /// Resolves header text such as "X contacted Y" or "vaccine of bob" against
  /// the declarations, treating type tokens in declaration names as argument
  /// slots. Throws ModelError (UnknownSymbol, AmbiguousSymbol, TypeMismatch,
  /// UnknownElement).
  ColumnHeader resolve_header(std::string_view text, Side side = Side::Input) const;

  /// Inverse of resolve_header: substitutes the arguments back into the
  /// declaration's name.
  std::string render_header(const ColumnHeader& header) const;

  /// Every symbol in declaration order: predicates, then functions.
  std::vector<SymbolRef> symbols() const;

  bool operator==(const Glossary&) const = default;

 private:
  std::vector<std::size_t> argument_types_of(std::string_view raw_name) const;
  void check_unique_symbol(const std::string& raw, const std::string& mangled) const;

  std::vector<TypeDecl> types_;
  std::vector<PredicateDecl> predicates_;
  std::vector<FunctionDecl> functions_;
};

// ---------------------------------------------------------------------------
// Tables

enum class HitPolicy { Unique, Any, First, Choice };

std::string_view to_string(HitPolicy policy);  // "U", "A", "F", "Ch"

struct DontCare {
  bool operator==(const DontCare&) const = default;
};
struct ValueLiteral {
  Element value;
  bool operator==(const ValueLiteral&) const = default;
};
struct ValueSet {
  std::vector<Element> values;  // at least two
  bool operator==(const ValueSet&) const = default;
};
enum class CompareOp { Less, LessEqual, Greater, GreaterEqual };
struct Comparison {
  CompareOp op = CompareOp::Less;
  Rational bound;
  bool operator==(const Comparison&) const = default;
};
struct Range {
  Rational low;
  Rational high;  // inclusive, low <= high
  bool operator==(const Range&) const = default;
};
struct BoolLiteral {
  bool value = true;
  bool operator==(const BoolLiteral&) const = default;
};
struct VarRef {
  char letter = 'X';
  bool operator==(const VarRef&) const = default;
};
struct ProbabilityCell {
  Probability probability;
  bool operator==(const ProbabilityCell&) const = default;
};

using CellExpr =
    std::variant<DontCare, ValueLiteral, ValueSet, Comparison, Range, BoolLiteral, VarRef, ProbabilityCell>;

/// Canonical cell text, re-parseable by the workbook parser.
std::string to_string(const CellExpr& cell);

/// Elements of `type` matched by an input cell (all of them for DontCare and
/// VarRef).
std::vector<std::size_t> matching_elements(const CellExpr& cell, const TypeDecl& type);

struct RuleRow {
  std::vector<CellExpr> inputs;
  std::vector<CellExpr> outputs;  // one per output slot
  Incidental<SourceSpan> span;

  bool operator==(const RuleRow&) const = default;
};

struct DecisionTable {
  std::string name;
  HitPolicy policy = HitPolicy::Unique;
  std::vector<ColumnHeader> inputs;
  std::vector<ColumnHeader> outputs;
  /// The output-value row of probabilistic tables, one entry per output slot
  /// (ValueLiteral or BoolLiteral).
  std::optional<std::vector<CellExpr>> value_row;
  std::vector<RuleRow> rows;
  Incidental<SourceSpan> span;

  bool is_probabilistic() const noexcept { return value_row.has_value(); }
  std::size_t slot_count() const;
  /// Index into `outputs` of the header owning an output slot.
  std::size_t slot_owner(std::size_t slot) const;

  bool operator==(const DecisionTable&) const = default;
};

struct FactRow {
  SymbolRef target;
  std::vector<Element> args;
  std::optional<Element> value;  // functions only
  Incidental<SourceSpan> span;

  bool operator==(const FactRow&) const = default;
};

struct FactTable {
  std::string name;
  std::vector<FactRow> rows;
  Incidental<SourceSpan> span;

  bool operator==(const FactTable&) const = default;
};

struct QueryEntry {
  SymbolRef target;
  std::vector<Argument> args;
  /// For functions: the queried value. Absent for a bare function
  /// application, which asks for every value.
  std::optional<Argument> value;
  Incidental<SourceSpan> span;

  bool operator==(const QueryEntry&) const = default;
};

struct QuerySet {
  std::vector<QueryEntry> entries;
  bool implicit_all = false;

  /// One entry per glossary symbol with fresh quantifiers on every position.
  static QuerySet all_symbols(const Glossary& glossary);

  bool operator==(const QuerySet&) const = default;
};

struct PdmnModel {
  std::string name;
  Glossary glossary;
  std::vector<DecisionTable> tables;
  std::vector<FactTable> facts;
  QuerySet queries;

  bool operator==(const PdmnModel&) const = default;
};

/// Quantifier letter -> type index for every letter used in a table's
/// headers and VarRef cells. Throws ModelError(TypeMismatch) if a letter is
/// used at two different types.
std::map<char, std::size_t> quantifier_types(const DecisionTable& table, const Glossary& glossary);

/// Fresh quantifier letters X, Y, Z, W, V, ... skipping `taken`.
std::vector<char> fresh_letters(std::size_t count, std::string_view taken = {});

// ---------------------------------------------------------------------------
// Validation

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;  // stable kebab-case identifier
  std::string message;
  SourceSpan span;
  std::string table;
  std::optional<std::size_t> row;  // 1-based rule row

  bool is_error() const noexcept { return severity == Severity::Error; }
};

/// Document-ordered diagnostics for a structurally parsed model.
std::vector<Diagnostic> validate_model(const PdmnModel& model);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace pdmn
