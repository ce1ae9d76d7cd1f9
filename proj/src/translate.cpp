#include "pdmn/translate.hpp"

#include <algorithm>

namespace pdmn {

using logic::Atom;
using logic::Literal;
using logic::Statement;
using logic::Term;

namespace {

using Body = std::vector<Literal>;

Term element_term(const Element& e) { return Term::constant(e.logic_name()); }

Term argument_term(const Argument& a) {
  if (const auto* q = std::get_if<Quantifier>(&a)) return Term::variable(std::string(1, q->letter));
  return element_term(std::get<Element>(a));
}

Atom header_atom(const ColumnHeader& h, const Glossary& g, std::optional<Term> value = std::nullopt) {
  Atom atom(g.mangled(h.target));
  for (const auto& a : h.args) atom.args.push_back(argument_term(a));
  if (value) atom.args.push_back(std::move(*value));
  return atom;
}

class TableTranslator {
 public:
  TableTranslator(const DecisionTable& table, const Glossary& g) : t_(table), g_(g) {
    auto types = quantifier_types(table, g);
    auto note = [&](char letter) {
      if (std::find(letters_.begin(), letters_.end(), letter) == letters_.end()) letters_.push_back(letter);
    };
    auto note_header = [&](const ColumnHeader& h) {
      for (const auto& a : h.args) {
        if (const auto* q = std::get_if<Quantifier>(&a)) note(q->letter);
      }
    };
    for (const auto& h : table.inputs) note_header(h);
    for (const auto& h : table.outputs) note_header(h);
    for (const auto& row : table.rows) {
      for (const auto& cell : row.inputs) {
        if (const auto* v = std::get_if<VarRef>(&cell)) note(v->letter);
      }
    }
    for (char letter : letters_) {
      const auto& type = g.types()[types.at(letter)];
      type_atoms_.push_back({Atom(type_predicate(type), {Term::variable(std::string(1, letter))}), false});
    }
  }

  std::vector<TranslatedStatement> run() {
    switch (t_.policy) {
      case HitPolicy::First:
        first_hit();
        break;
      case HitPolicy::Choice:
        choice();
        break;
      default:
        unique();
        break;
    }
    return std::move(out_);
  }

 private:
  // One body per combination of the row's expanded input cells, without
  // type atoms. Empty when some cell matches nothing.
  std::vector<Body> bodies(const RuleRow& row) const {
    std::vector<Body> result{Body{}};
    for (std::size_t c = 0; c < t_.inputs.size(); ++c) {
      const auto& h = t_.inputs[c];
      const auto& cell = row.inputs[c];
      std::vector<Literal> options;
      if (std::holds_alternative<DontCare>(cell)) continue;
      if (const auto* b = std::get_if<BoolLiteral>(&cell)) {
        options.push_back({header_atom(h, g_), !b->value});
      } else if (const auto* v = std::get_if<VarRef>(&cell)) {
        options.push_back({header_atom(h, g_, Term::variable(std::string(1, v->letter))), false});
      } else if (const auto* e = std::get_if<ValueLiteral>(&cell)) {
        options.push_back({header_atom(h, g_, element_term(e->value)), false});
      } else {
        const auto& range = g_.range(h.target);
        for (auto i : matching_elements(cell, range)) {
          options.push_back({header_atom(h, g_, element_term(range.elements[i])), false});
        }
      }
      std::vector<Body> next;
      for (const auto& body : result) {
        for (const auto& lit : options) {
          next.push_back(body);
          next.back().push_back(lit);
        }
      }
      result = std::move(next);
    }
    return result;
  }

  Body typed(Body body) const {
    body.insert(body.end(), type_atoms_.begin(), type_atoms_.end());
    return body;
  }

  Atom row_atom(std::size_t row) const {
    Atom atom(row_predicate(t_, row));
    for (char letter : letters_) atom.args.push_back(Term::variable(std::string(1, letter)));
    return atom;
  }

  void emit(Statement s, std::optional<std::size_t> row, bool synthetic = false) {
    out_.push_back({std::move(s), {t_.name, row, synthetic}});
  }

  void emit_clause(Atom head, Body body, const std::optional<Probability>& p, std::size_t row,
                   bool synthetic = false) {
    std::optional<Probability> annotation;
    if (p && !p->is_one()) annotation = p;
    emit(logic::Clause{std::move(head), std::move(body), annotation}, row, synthetic);
  }

  // Heads (with optional probability) a row produces, one per output slot.
  std::vector<std::pair<Atom, std::optional<Probability>>> heads(const RuleRow& row) const {
    std::vector<std::pair<Atom, std::optional<Probability>>> result;
    for (std::size_t s = 0; s < row.outputs.size(); ++s) {
      const auto& h = t_.outputs[t_.slot_owner(s)];
      const CellExpr& value = t_.value_row ? (*t_.value_row)[s] : row.outputs[s];
      std::optional<Probability> p;
      if (t_.value_row) {
        p = std::get<ProbabilityCell>(row.outputs[s]).probability;
        if (p->is_zero()) continue;
      }
      if (const auto* b = std::get_if<BoolLiteral>(&value)) {
        if (b->value) result.emplace_back(header_atom(h, g_), p);
      } else if (const auto* e = std::get_if<ValueLiteral>(&value)) {
        result.emplace_back(header_atom(h, g_, element_term(e->value)), p);
      }
    }
    return result;
  }

  // The condition under which row `r` fires, as a single body. Rows whose
  // inputs expand to several bodies get a helper atom so that a probabilistic
  // row stays one independent trial.
  std::optional<Body> row_condition(std::size_t r) {
    auto alternatives = bodies(t_.rows[r]);
    if (alternatives.empty()) return std::nullopt;
    if (alternatives.size() == 1) return typed(std::move(alternatives.front()));
    auto helper = row_atom(r + 1);
    for (auto& body : alternatives) emit_clause(helper, typed(std::move(body)), std::nullopt, r + 1, true);
    return typed(Body{{helper, false}});
  }

  void unique() {
    for (std::size_t r = 0; r < t_.rows.size(); ++r) {
      auto hs = heads(t_.rows[r]);
      if (hs.empty()) continue;
      if (!t_.is_probabilistic()) {
        for (auto& body : bodies(t_.rows[r])) {
          for (const auto& [head, p] : hs) emit_clause(head, typed(body), p, r + 1);
        }
        continue;
      }
      auto body = row_condition(r);
      if (!body) continue;
      for (const auto& [head, p] : hs) emit_clause(head, *body, p, r + 1);
    }
  }

  void first_hit() {
    std::vector<bool> has_output(t_.rows.size());
    for (std::size_t r = 0; r < t_.rows.size(); ++r) has_output[r] = !heads(t_.rows[r]).empty();
    std::size_t last = 0;
    for (std::size_t r = 0; r < t_.rows.size(); ++r) {
      if (has_output[r]) last = r + 1;
    }
    for (std::size_t r = 0; r < last; ++r) {
      for (auto& body : bodies(t_.rows[r])) emit_clause(row_atom(r + 1), typed(std::move(body)), std::nullopt, r + 1, true);
    }
    for (std::size_t r = 0; r < last; ++r) {
      Body body{{row_atom(r + 1), false}};
      for (std::size_t j = 0; j < r; ++j) body.push_back({row_atom(j + 1), true});
      body = typed(std::move(body));
      for (const auto& [head, p] : heads(t_.rows[r])) emit_clause(head, body, p, r + 1);
    }
  }

  void choice() {
    for (std::size_t r = 0; r < t_.rows.size(); ++r) {
      auto hs = heads(t_.rows[r]);
      if (hs.empty()) continue;
      auto body = row_condition(r);
      if (!body) continue;
      if (hs.size() == 1 && hs.front().second->is_one()) {
        emit_clause(hs.front().first, *body, std::nullopt, r + 1);
        continue;
      }
      logic::AnnotatedDisjunction ad;
      for (auto& [head, p] : hs) ad.alternatives.push_back({*p, std::move(head)});
      ad.body = std::move(*body);
      emit(std::move(ad), r + 1);
    }
  }

  const DecisionTable& t_;
  const Glossary& g_;
  std::vector<char> letters_;
  Body type_atoms_;
  std::vector<TranslatedStatement> out_;
};

}  // namespace

std::string type_predicate(const TypeDecl& type) { return mangle_name(type.name); }

std::string row_predicate(const DecisionTable& table, std::size_t row) {
  return mangle_name(table.name) + "_r" + std::to_string(row);
}

std::vector<Statement> translate_type(const TypeDecl& type) {
  std::vector<Statement> out;
  auto name = type_predicate(type);
  for (const auto& e : type.elements) out.push_back(logic::Clause{Atom(name, {element_term(e)}), {}, std::nullopt});
  return out;
}

std::vector<TranslatedStatement> translate_table(const DecisionTable& table, const Glossary& glossary) {
  return TableTranslator(table, glossary).run();
}

std::vector<Atom> translate_queries(const QuerySet& queries, const Glossary& g) {
  std::vector<Atom> out;
  for (const auto& q : queries.entries) {
    ColumnHeader h{q.target, q.args, Side::Input, 1, {}};
    std::optional<Term> value;
    if (q.value) {
      value = argument_term(*q.value);
    } else if (q.target.is_function()) {
      std::string taken;
      for (const auto& a : q.args) {
        if (const auto* l = std::get_if<Quantifier>(&a)) taken += l->letter;
      }
      value = Term::variable(std::string(1, fresh_letters(1, taken).front()));
    }
    out.push_back(header_atom(h, g, value));
  }
  return out;
}

TranslationOutput translate_model(const PdmnModel& model) {
  const Glossary& g = model.glossary;
  TranslationOutput out;
  for (auto ref : g.symbols()) {
    out.symbol_table[ref] = {g.mangled(ref), g.arg_types(ref).size() + (ref.is_function() ? 1 : 0)};
  }
  auto add = [&](Statement s, Provenance p) {
    out.program.statements.push_back(std::move(s));
    out.row_provenance.push_back(std::move(p));
  };
  for (const auto& type : g.types()) {
    for (auto& s : translate_type(type)) add(std::move(s), {"", std::nullopt, true});
  }
  for (const auto& facts : model.facts) {
    for (const auto& row : facts.rows) {
      Atom atom(g.mangled(row.target));
      for (const auto& a : row.args) atom.args.push_back(element_term(a));
      if (row.value) atom.args.push_back(element_term(*row.value));
      add(logic::Clause{std::move(atom), {}, std::nullopt}, {facts.name, std::nullopt, false});
    }
  }
  for (const auto& table : model.tables) {
    for (auto& ts : translate_table(table, g)) add(std::move(ts.statement), std::move(ts.provenance));
  }
  out.program.queries = translate_queries(model.queries, g);
  return out;
}

}  // namespace pdmn
