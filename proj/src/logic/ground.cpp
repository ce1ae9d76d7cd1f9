#include "pdmn/logic.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace pdmn::logic {

AtomId GroundProgram::intern(const Atom& atom) {
  auto key = atom.str();
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  auto id = static_cast<AtomId>(atoms_.size());
  atoms_.push_back(atom);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<AtomId> GroundProgram::find(const Atom& atom) const {
  auto it = index_.find(atom.str());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

using Binding = std::vector<std::pair<std::string, std::string>>;

const std::string* lookup(const Binding& b, const std::string& var) {
  for (const auto& [k, v] : b) {
    if (k == var) return &v;
  }
  return nullptr;
}

Atom substitute(const Atom& atom, const Binding& b) {
  Atom out = atom;
  for (auto& t : out.args) {
    if (!t.is_variable()) continue;
    if (const auto* v = lookup(b, t.name)) t = Term::constant(*v);
  }
  return out;
}

bool unify(const Atom& pattern, const Atom& ground, Binding& b) {
  if (pattern.predicate != ground.predicate || pattern.arity() != ground.arity()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    const auto& t = pattern.args[i];
    const auto& g = ground.args[i].name;
    if (!t.is_variable()) {
      if (t.name != g) return false;
    } else if (const auto* v = lookup(b, t.name)) {
      if (*v != g) return false;
    } else {
      b.emplace_back(t.name, g);
    }
  }
  return true;
}

std::optional<std::string> first_variable(const Atom& atom) {
  for (const auto& t : atom.args) {
    if (t.is_variable()) return t.name;
  }
  return std::nullopt;
}

void check_safety(const Statement& s, const std::vector<Atom>& heads, const std::vector<Literal>& body) {
  std::set<std::string> bound;
  for (const auto& l : body) {
    if (l.negated) continue;
    for (const auto& t : l.atom.args) {
      if (t.is_variable()) bound.insert(t.name);
    }
  }
  auto check = [&](const Atom& a) {
    for (const auto& t : a.args) {
      if (t.is_variable() && !bound.count(t.name)) throw UnsafeVariable(to_string(s), t.name);
    }
  };
  for (const auto& h : heads) check(h);
  for (const auto& l : body) {
    if (l.negated) check(l.atom);
  }
}

struct Instance {
  std::vector<Atom> heads;
  std::vector<Atom> positive;
  std::vector<Atom> negative;
};

class Grounder {
 public:
  explicit Grounder(const LogicProgram& program) : program_(program) {}

  GroundProgram run() {
    classify();
    for (const auto& [stmt, atom] : certain_facts_) {
      (void)stmt;
      auto id = out_.intern(atom);
      out_.facts.push_back(id);
      add_possible(atom);
    }
    for (const auto* c : ground_probabilistic_) {
      out_.probabilistic_facts.push_back({*c->probability, out_.intern(c->head)});
      add_possible(c->head);
    }

    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < program_.statements.size(); ++i) {
        changed |= ground_statement(i);
      }
    }
    instantiate_open_facts();
    expand_queries();
    return std::move(out_);
  }

 private:
  void classify() {
    for (const auto& s : program_.statements) {
      if (const auto* c = std::get_if<Clause>(&s)) {
        if (c->is_probabilistic() && !c->is_fact()) {
          throw std::invalid_argument("ground() requires a desugared program: " + to_string(s));
        }
        if (c->is_fact() && !c->is_probabilistic()) {
          if (auto v = first_variable(c->head)) throw UnsafeVariable(to_string(s), *v);
          if (fact_keys_.insert(c->head.str()).second) {
            certain_facts_.emplace_back(&s, c->head);
            fact_table_[c->head.signature()].push_back(c->head);
          }
          continue;
        }
        intensional_.insert(c->head.signature());
        if (c->is_fact()) {
          if (c->head.is_ground()) {
            ground_probabilistic_.push_back(c);
          } else {
            open_probabilistic_.push_back(c);
            open_signatures_.insert(c->head.signature());
          }
        } else {
          check_safety(s, {c->head}, c->body);
        }
      } else {
        const auto& ad = std::get<AnnotatedDisjunction>(s);
        std::vector<Atom> heads;
        for (const auto& a : ad.alternatives) {
          intensional_.insert(a.atom.signature());
          heads.push_back(a.atom);
        }
        check_safety(s, heads, ad.body);
      }
    }
  }

  bool extensional(const std::string& sig) const {
    return fact_table_.count(sig) && !intensional_.count(sig);
  }

  bool add_possible(const Atom& atom) {
    if (!possible_keys_.insert(atom.str()).second) return false;
    possible_[atom.signature()].push_back(atom);
    return true;
  }

  // Grounds one rule or disjunction against the current possible atoms.
  // Returns true if a new atom became possible.
  bool ground_statement(std::size_t index) {
    const Statement& s = program_.statements[index];
    std::vector<Atom> heads;
    const std::vector<Literal>* body = nullptr;
    if (const auto* c = std::get_if<Clause>(&s)) {
      if (c->is_fact()) return false;
      heads.push_back(c->head);
      body = &c->body;
    } else {
      const auto& ad = std::get<AnnotatedDisjunction>(s);
      for (const auto& a : ad.alternatives) heads.push_back(a.atom);
      body = &ad.body;
    }

    std::vector<Instance> found;
    std::vector<std::size_t> remaining;
    for (std::size_t i = 0; i < body->size(); ++i) {
      if (!(*body)[i].negated) remaining.push_back(i);
    }
    std::vector<Atom> kept;
    enumerate(s, *body, heads, remaining, Binding{}, kept, found);

    bool changed = false;
    for (auto& inst : found) {
      std::string key = std::to_string(index) + "|";
      for (const auto& h : inst.heads) key += h.str() + ";";
      key += "|";
      for (const auto& p : inst.positive) key += p.str() + ",";
      key += "|";
      for (const auto& n : inst.negative) key += n.str() + ",";
      if (!emitted_.insert(key).second) continue;

      std::vector<AtomId> pos, neg;
      for (const auto& p : inst.positive) pos.push_back(out_.intern(p));
      for (const auto& n : inst.negative) neg.push_back(out_.intern(n));
      if (const auto* c = std::get_if<Clause>(&s)) {
        (void)c;
        out_.rules.push_back({out_.intern(inst.heads[0]), std::move(pos), std::move(neg)});
      } else {
        const auto& ad = std::get<AnnotatedDisjunction>(s);
        GroundDisjunction gd;
        for (std::size_t k = 0; k < ad.alternatives.size(); ++k) {
          gd.alternatives.emplace_back(ad.alternatives[k].probability, out_.intern(inst.heads[k]));
        }
        gd.positive = std::move(pos);
        gd.negative = std::move(neg);
        out_.disjunctions.push_back(std::move(gd));
      }
      for (const auto& h : inst.heads) changed |= add_possible(h);
    }
    return changed;
  }

  void enumerate(const Statement& s, const std::vector<Literal>& body, const std::vector<Atom>& heads,
                 std::vector<std::size_t> remaining, const Binding& binding, std::vector<Atom>& kept,
                 std::vector<Instance>& found) {
    if (remaining.empty()) {
      finish(s, body, heads, binding, kept, found);
      return;
    }
    // Pick the next literal: generators first, then ground literals, then
    // joins against derivable atoms.
    auto rank = [&](std::size_t i) {
      Atom a = substitute(body[i].atom, binding);
      if (extensional(a.signature())) return 0;
      if (a.is_ground()) return 1;
      if (!open_signatures_.count(a.signature())) return 2;
      return 3;
    };
    auto best = std::min_element(remaining.begin(), remaining.end(),
                                 [&](std::size_t a, std::size_t b) { return rank(a) < rank(b); });
    std::size_t li = *best;
    int r = rank(li);
    remaining.erase(best);
    Atom atom = substitute(body[li].atom, binding);

    if (r == 0) {
      for (const auto& fact : fact_table_.at(atom.signature())) {
        Binding next = binding;
        if (unify(atom, fact, next)) enumerate(s, body, heads, remaining, next, kept, found);
      }
    } else if (r == 1) {
      bool certain = fact_keys_.count(atom.str()) > 0;
      if (!certain) kept.push_back(atom);
      enumerate(s, body, heads, remaining, binding, kept, found);
      if (!certain) kept.pop_back();
    } else if (r == 2) {
      auto it = possible_.find(atom.signature());
      if (it == possible_.end()) return;
      std::vector<Atom> candidates = it->second;
      for (const auto& cand : candidates) {
        Binding next = binding;
        if (!unify(atom, cand, next)) continue;
        bool certain = fact_keys_.count(cand.str()) > 0;
        if (!certain) kept.push_back(cand);
        enumerate(s, body, heads, remaining, next, kept, found);
        if (!certain) kept.pop_back();
      }
    } else {
      throw UnsafeVariable(to_string(s), *first_variable(atom));
    }
  }

  void finish(const Statement& s, const std::vector<Literal>& body, const std::vector<Atom>& heads,
              const Binding& binding, const std::vector<Atom>& kept, std::vector<Instance>& found) {
    Instance inst;
    inst.positive = kept;
    for (const auto& h : heads) {
      Atom g = substitute(h, binding);
      if (auto v = first_variable(g)) throw UnsafeVariable(to_string(s), *v);
      inst.heads.push_back(std::move(g));
    }
    for (const auto& l : body) {
      if (!l.negated) continue;
      Atom g = substitute(l.atom, binding);
      if (auto v = first_variable(g)) throw UnsafeVariable(to_string(s), *v);
      if (fact_keys_.count(g.str())) return;  // negation of a certain fact
      if (extensional(g.signature())) continue;  // certainly false
      inst.negative.push_back(std::move(g));
    }
    found.push_back(std::move(inst));
  }

  void instantiate_open_facts() {
    if (open_probabilistic_.empty()) return;
    std::set<std::pair<const Clause*, AtomId>> done;
    auto visit = [&](AtomId id) {
      const Atom& atom = out_.atom(id);
      if (!open_signatures_.count(atom.signature())) return;
      for (const auto* c : open_probabilistic_) {
        Binding b;
        if (unify(c->head, atom, b) && done.insert({c, id}).second) {
          out_.probabilistic_facts.push_back({*c->probability, id});
        }
      }
    };
    for (const auto& r : out_.rules) {
      for (auto id : r.positive) visit(id);
      for (auto id : r.negative) visit(id);
    }
    for (const auto& d : out_.disjunctions) {
      for (auto id : d.positive) visit(id);
      for (auto id : d.negative) visit(id);
    }
    for (const auto& q : program_.queries) {
      if (q.is_ground()) visit(out_.intern(q));
    }
  }

  void expand_queries() {
    std::map<std::string, std::size_t> ordinal;
    auto note = [&](const Atom& a) {
      for (const auto& t : a.args) {
        if (!t.is_variable()) ordinal.emplace(t.name, ordinal.size());
      }
    };
    for (const auto& s : program_.statements) {
      if (const auto* c = std::get_if<Clause>(&s)) {
        note(c->head);
        for (const auto& l : c->body) note(l.atom);
      } else {
        const auto& ad = std::get<AnnotatedDisjunction>(s);
        for (const auto& a : ad.alternatives) note(a.atom);
        for (const auto& l : ad.body) note(l.atom);
      }
    }
    for (const auto& q : program_.queries) note(q);

    std::set<AtomId> seen;
    auto push = [&](AtomId id) {
      if (seen.insert(id).second) out_.queries.push_back(id);
    };
    for (const auto& q : program_.queries) {
      if (q.is_ground()) {
        push(out_.intern(q));
        continue;
      }
      std::vector<Atom> matches;
      if (auto it = possible_.find(q.signature()); it != possible_.end()) {
        for (const auto& cand : it->second) {
          Binding b;
          if (unify(q, cand, b)) matches.push_back(cand);
        }
      }
      auto key = [&](const Atom& a) {
        std::vector<std::size_t> k;
        for (const auto& t : a.args) k.push_back(ordinal.at(t.name));
        return k;
      };
      std::stable_sort(matches.begin(), matches.end(),
                       [&](const Atom& a, const Atom& b) { return key(a) < key(b); });
      for (const auto& m : matches) push(out_.intern(m));
    }
  }

  const LogicProgram& program_;
  GroundProgram out_;

  std::vector<std::pair<const Statement*, Atom>> certain_facts_;
  std::set<std::string> fact_keys_;
  std::map<std::string, std::vector<Atom>> fact_table_;
  std::set<std::string> intensional_;
  std::vector<const Clause*> ground_probabilistic_;
  std::vector<const Clause*> open_probabilistic_;
  std::set<std::string> open_signatures_;

  std::map<std::string, std::vector<Atom>> possible_;
  std::set<std::string> possible_keys_;
  std::set<std::string> emitted_;
};

}  // namespace

GroundProgram ground(const LogicProgram& program) { return Grounder(program).run(); }

}  // namespace pdmn::logic
