#pragma once

// A ProbLog subset: probabilistic facts, annotated rules, annotated
// disjunctions, stratified negation and marginal queries over constants-only
// terms. Exact inference by enumerating total choices.

#include "pdmn/rational.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace pdmn::logic {

struct Term {
  enum class Kind { Constant, Variable };

  Kind kind = Kind::Constant;
  std::string name;

  static Term constant(std::string name) { return {Kind::Constant, std::move(name)}; }
  static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }

  bool is_variable() const noexcept { return kind == Kind::Variable; }

  auto operator<=>(const Term&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string predicate, std::vector<Term> args = {})
      : predicate(std::move(predicate)), args(std::move(args)) {}

  std::size_t arity() const noexcept { return args.size(); }
  bool is_ground() const;

  /// "name/arity", the unit of stratification.
  std::string signature() const;

  /// Canonical text: `p`, `p(a,X)`.
  std::string str() const;

  auto operator<=>(const Atom&) const = default;
};

struct Literal {
  Atom atom;
  bool negated = false;

  auto operator<=>(const Literal&) const = default;
};

/// `h.`, `P::h.`, `h :- body.` or `P::h :- body.`
struct Clause {
  Atom head;
  std::vector<Literal> body;
  std::optional<Probability> probability;

  bool is_fact() const noexcept { return body.empty(); }
  bool is_probabilistic() const noexcept { return probability.has_value(); }

  bool operator==(const Clause&) const = default;
};

struct Alternative {
  Probability probability;
  Atom atom;

  bool operator==(const Alternative&) const = default;
};

/// `P1::a1; ...; Pn::an :- body.` with the probabilities summing to at most 1.
struct AnnotatedDisjunction {
  std::vector<Alternative> alternatives;
  std::vector<Literal> body;

  Rational total() const;

  bool operator==(const AnnotatedDisjunction&) const = default;
};

using Statement = std::variant<Clause, AnnotatedDisjunction>;

struct LogicProgram {
  std::vector<Statement> statements;  // document order
  std::vector<Atom> queries;

  bool operator==(const LogicProgram&) const = default;
};

std::string to_string(const Literal& literal);
std::string to_string(const Statement& statement);

// ---------------------------------------------------------------------------
// Errors

class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsafeVariable : public EngineError {
 public:
  UnsafeVariable(std::string statement, std::string variable);
  const std::string& statement() const noexcept { return statement_; }
  const std::string& variable() const noexcept { return variable_; }

 private:
  std::string statement_;
  std::string variable_;
};

class NotStratified : public EngineError {
 public:
  explicit NotStratified(std::vector<std::string> cycle);
  /// Predicate signatures along a cycle containing a negative edge.
  const std::vector<std::string>& cycle() const noexcept { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

class ChoiceSpaceTooLarge : public EngineError {
 public:
  ChoiceSpaceTooLarge(std::size_t choice_points, std::size_t cap);
  std::size_t choice_points() const noexcept { return choice_points_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t choice_points_;
  std::size_t cap_;
};

class ProgramSyntaxError : public std::runtime_error {
 public:
  ProgramSyntaxError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// ---------------------------------------------------------------------------
// Textual front end

/// Parses the textual subset: facts, `P::` annotations, rules, annotated
/// disjunctions, `query(...)` directives, `not(...)` / `\+` negation and `%`
/// line comments. Probabilities may be decimals or `p/q` fractions.
LogicProgram parse_program(std::string_view text);

// ---------------------------------------------------------------------------
// Pipeline

/// Replaces every annotated rule `P::h :- b.` by `h :- b, f.` plus the fact
/// `P::f.`, where `f` is fresh and carries the rule's variables. Annotated
/// facts whose predicate is also defined otherwise are rewritten the same way
/// so that no probabilistic fact shares a head with a rule.
LogicProgram desugar(const LogicProgram& program);

using AtomId = std::uint32_t;

struct GroundRule {
  AtomId head;
  std::vector<AtomId> positive;
  std::vector<AtomId> negative;

  bool operator==(const GroundRule&) const = default;
};

struct GroundFact {
  Probability probability;
  AtomId atom;
};

struct GroundDisjunction {
  std::vector<std::pair<Probability, AtomId>> alternatives;
  std::vector<AtomId> positive;
  std::vector<AtomId> negative;
};

/// A variable-free program over interned atoms.
class GroundProgram {
 public:
  std::vector<AtomId> facts;
  std::vector<GroundFact> probabilistic_facts;
  std::vector<GroundRule> rules;
  std::vector<GroundDisjunction> disjunctions;
  std::vector<AtomId> queries;  // deduplicated, in answer order

  AtomId intern(const Atom& atom);
  std::optional<AtomId> find(const Atom& atom) const;
  const Atom& atom(AtomId id) const { return atoms_.at(id); }
  std::size_t atom_count() const noexcept { return atoms_.size(); }

 private:
  std::vector<Atom> atoms_;
  std::unordered_map<std::string, AtomId> index_;
};

/// Instantiates variables. Positive body literals over predicates defined
/// only by deterministic ground facts act as generators and are dropped from
/// the ground bodies; remaining unbound variables are joined against the atoms
/// derivable so far. Requires a desugared program (throws
/// std::invalid_argument on annotated rules).
GroundProgram ground(const LogicProgram& program);

struct Strata {
  /// Derived predicate signatures, lowest stratum first.
  std::vector<std::vector<std::string>> levels;
  std::unordered_map<std::string, std::size_t> level_of;
};

/// Orders derived predicates so that negative dependencies point strictly
/// downwards. Throws NotStratified.
Strata stratify(const GroundProgram& program);

/// One outcome per probabilistic fact (true/false) and per disjunction (an
/// alternative index, or nullopt for "none").
struct TotalChoice {
  std::vector<bool> facts;
  std::vector<std::optional<std::size_t>> disjunctions;
};

/// The unique stratified model under a total choice, as visible atoms in id
/// order.
std::vector<Atom> least_model(const GroundProgram& program, const TotalChoice& choice);

struct QueryResult {
  Atom query;
  Rational probability;

  std::string decimal() const { return to_display(probability); }
};

struct QueryOptions {
  std::size_t max_choice_points = 30;
  unsigned threads = 1;
};

struct Evaluation {
  std::vector<QueryResult> results;
  Rational total_weight;        // always 1; checked
  std::size_t choice_points = 0;  // after relevance pruning
  std::size_t total_choices = 0;
};

/// desugar -> ground -> stratify -> enumerate.
Evaluation evaluate(const LogicProgram& program, const QueryOptions& options = {});

std::vector<QueryResult> query_exact(const LogicProgram& program, const QueryOptions& options = {});

}  // namespace pdmn::logic
