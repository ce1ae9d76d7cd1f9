#include "pdmn/logic.hpp"

#include <algorithm>
#include <set>

namespace pdmn::logic {

namespace {

void collect_variables(const Atom& atom, std::vector<std::string>& seen) {
  for (const auto& t : atom.args) {
    if (t.is_variable() && std::find(seen.begin(), seen.end(), t.name) == seen.end()) {
      seen.push_back(t.name);
    }
  }
}

}  // namespace

LogicProgram desugar(const LogicProgram& program) {
  std::set<std::string> used;
  std::set<std::string> ruled;  // signatures with some non-probabilistic-fact definition
  for (const auto& s : program.statements) {
    if (const auto* c = std::get_if<Clause>(&s)) {
      used.insert(c->head.predicate);
      for (const auto& l : c->body) used.insert(l.atom.predicate);
      if (!(c->is_fact() && c->is_probabilistic())) ruled.insert(c->head.signature());
    } else {
      const auto& ad = std::get<AnnotatedDisjunction>(s);
      for (const auto& a : ad.alternatives) {
        used.insert(a.atom.predicate);
        ruled.insert(a.atom.signature());
      }
      for (const auto& l : ad.body) used.insert(l.atom.predicate);
    }
  }
  for (const auto& q : program.queries) used.insert(q.predicate);

  std::size_t counter = 0;
  auto fresh = [&] {
    std::string name;
    do {
      name = "aux" + std::to_string(++counter);
    } while (used.count(name));
    used.insert(name);
    return name;
  };

  LogicProgram out;
  out.queries = program.queries;
  for (const auto& s : program.statements) {
    const auto* c = std::get_if<Clause>(&s);
    bool rewrite = c && c->is_probabilistic() && !c->probability->is_one() &&
                   (!c->is_fact() || ruled.count(c->head.signature()));
    if (!rewrite) {
      if (c && c->is_probabilistic() && c->probability->is_one()) {
        out.statements.emplace_back(Clause{c->head, c->body, std::nullopt});
      } else {
        out.statements.push_back(s);
      }
      continue;
    }
    std::vector<std::string> vars;
    collect_variables(c->head, vars);
    for (const auto& l : c->body) collect_variables(l.atom, vars);
    Atom trigger{fresh()};
    for (const auto& v : vars) trigger.args.push_back(Term::variable(v));

    Clause rule{c->head, c->body, std::nullopt};
    rule.body.push_back({trigger, false});
    out.statements.emplace_back(std::move(rule));
    out.statements.emplace_back(Clause{std::move(trigger), {}, c->probability});
  }
  return out;
}

}  // namespace pdmn::logic
