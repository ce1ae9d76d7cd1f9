#include "pdmn/logic.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <future>
#include <map>
#include <set>

namespace pdmn::logic {

// ---------------------------------------------------------------------------
// Stratification over predicate signatures

namespace {

struct DependencyGraph {
  std::vector<std::string> nodes;  // derived signatures, first-appearance order
  std::map<std::string, std::size_t> index;
  // edges[u] = (v, negative): u depends on v
  std::vector<std::vector<std::pair<std::size_t, bool>>> edges;

  std::size_t node(const std::string& sig) {
    auto [it, inserted] = index.emplace(sig, nodes.size());
    if (inserted) {
      nodes.push_back(sig);
      edges.emplace_back();
    }
    return it->second;
  }
};

DependencyGraph dependency_graph(const GroundProgram& g) {
  DependencyGraph graph;
  for (const auto& r : g.rules) graph.node(g.atom(r.head).signature());
  for (const auto& d : g.disjunctions) {
    for (const auto& [p, a] : d.alternatives) graph.node(g.atom(a).signature());
  }
  auto depend = [&](const std::string& head, const std::vector<AtomId>& body, bool negative) {
    auto u = graph.index.at(head);
    for (auto id : body) {
      auto it = graph.index.find(g.atom(id).signature());
      if (it != graph.index.end()) graph.edges[u].emplace_back(it->second, negative);
    }
  };
  for (const auto& r : g.rules) {
    auto head = g.atom(r.head).signature();
    depend(head, r.positive, false);
    depend(head, r.negative, true);
  }
  for (const auto& d : g.disjunctions) {
    for (const auto& [p, a] : d.alternatives) {
      auto head = g.atom(a).signature();
      depend(head, d.positive, false);
      depend(head, d.negative, true);
    }
  }
  return graph;
}

// Tarjan's algorithm; components come out dependencies-first.
std::vector<std::vector<std::size_t>> strongly_connected(const DependencyGraph& graph) {
  const std::size_t n = graph.nodes.size();
  std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (auto [w, neg] : graph.edges[v]) {
      (void)neg;
      if (index[w] == SIZE_MAX) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      components.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] == SIZE_MAX) visit(v);
  }
  return components;
}

// A path from `from` to `to` using only nodes of one component.
std::vector<std::size_t> path_within(const DependencyGraph& graph, const std::vector<std::size_t>& component,
                                     std::size_t from, std::size_t to) {
  std::set<std::size_t> members(component.begin(), component.end());
  std::map<std::size_t, std::size_t> parent{{from, from}};
  std::deque<std::size_t> queue{from};
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (auto [w, neg] : graph.edges[v]) {
      (void)neg;
      if (members.count(w) && parent.emplace(w, v).second) queue.push_back(w);
    }
  }
  std::vector<std::size_t> path{to};
  while (path.back() != from) path.push_back(parent.at(path.back()));
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

Strata stratify(const GroundProgram& program) {
  auto graph = dependency_graph(program);
  auto components = strongly_connected(graph);

  std::vector<std::size_t> component_of(graph.nodes.size());
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (auto v : components[c]) component_of[v] = c;
  }

  std::vector<std::size_t> level(components.size(), 0);
  std::size_t top = 0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (auto u : components[c]) {
      for (auto [v, negative] : graph.edges[u]) {
        if (component_of[v] == c) {
          if (negative) {
            auto cycle = path_within(graph, components[c], v, u);
            cycle.push_back(v);
            std::vector<std::string> names;
            for (auto x : cycle) names.push_back(graph.nodes[x]);
            std::reverse(names.begin(), names.end());
            throw NotStratified(std::move(names));
          }
          continue;
        }
        level[c] = std::max(level[c], level[component_of[v]] + (negative ? 1 : 0));
      }
    }
    top = std::max(top, level[c]);
  }

  Strata strata;
  if (graph.nodes.empty()) return strata;
  strata.levels.resize(top + 1);
  for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
    auto l = level[component_of[v]];
    strata.levels[l].push_back(graph.nodes[v]);
    strata.level_of.emplace(graph.nodes[v], l);
  }
  return strata;
}

// ---------------------------------------------------------------------------
// Compiled form used for model computation

namespace {

struct Outcome {
  Rational weight;
  std::vector<AtomId> atoms;
};

struct CompiledRule {
  AtomId head;
  std::vector<AtomId> positive;
  std::vector<AtomId> negative;
};

class Compiled {
 public:
  // `keep_*` masks select a relevant sub-program; null keeps everything.
  Compiled(const GroundProgram& g, const Strata& strata, const std::vector<char>* keep_rules,
           const std::vector<char>* keep_facts, const std::vector<char>* keep_disjunctions)
      : visible_(g.atom_count()), total_(g.atom_count()) {
    certain_ = g.facts;
    std::vector<std::vector<CompiledRule>> by_level(std::max<std::size_t>(strata.levels.size(), 1));
    auto level_of = [&](AtomId a) { return strata.level_of.at(g.atom(a).signature()); };

    for (std::size_t i = 0; i < g.rules.size(); ++i) {
      if (keep_rules && !(*keep_rules)[i]) continue;
      const auto& r = g.rules[i];
      by_level[level_of(r.head)].push_back({r.head, r.positive, r.negative});
    }
    for (std::size_t i = 0; i < g.probabilistic_facts.size(); ++i) {
      if (keep_facts && !(*keep_facts)[i]) continue;
      const auto& f = g.probabilistic_facts[i];
      fact_choice_.push_back(choices_.size());
      choices_.push_back({{f.probability.value(), {f.atom}}, {1 - f.probability.value(), {}}});
    }
    for (std::size_t i = 0; i < g.disjunctions.size(); ++i) {
      if (keep_disjunctions && !(*keep_disjunctions)[i]) continue;
      const auto& d = g.disjunctions[i];
      disjunction_choice_.push_back(choices_.size());
      std::vector<Outcome> outcomes;
      Rational rest = 1;
      bool conditional = !d.positive.empty() || !d.negative.empty();
      for (const auto& [p, atom] : d.alternatives) {
        rest -= p.value();
        if (!conditional) {
          outcomes.push_back({p.value(), {atom}});
          continue;
        }
        auto selector = static_cast<AtomId>(total_++);
        auto body = d.positive;
        body.push_back(selector);
        by_level[level_of(atom)].push_back({atom, std::move(body), d.negative});
        outcomes.push_back({p.value(), {selector}});
      }
      outcomes.push_back({rest, {}});
      choices_.push_back(std::move(outcomes));
    }

    // Rules grouped by stratum, with watch lists for same-stratum positive
    // dependencies.
    std::vector<std::size_t> atom_level(total_, SIZE_MAX);
    for (std::size_t a = 0; a < visible_; ++a) {
      auto it = strata.level_of.find(g.atom(static_cast<AtomId>(a)).signature());
      if (it != strata.level_of.end()) atom_level[a] = it->second;
    }
    watch_.resize(total_);
    for (std::size_t l = 0; l < by_level.size(); ++l) {
      level_begin_.push_back(rules_.size());
      for (auto& r : by_level[l]) {
        std::sort(r.positive.begin(), r.positive.end());
        r.positive.erase(std::unique(r.positive.begin(), r.positive.end()), r.positive.end());
        auto idx = static_cast<std::uint32_t>(rules_.size());
        for (auto a : r.positive) {
          if (atom_level[a] == l) watch_[a].push_back(idx);
        }
        rules_.push_back(std::move(r));
      }
    }
    level_begin_.push_back(rules_.size());
  }

  std::size_t visible() const { return visible_; }
  std::size_t total() const { return total_; }
  const std::vector<std::vector<Outcome>>& choices() const { return choices_; }
  const std::vector<std::size_t>& fact_choice() const { return fact_choice_; }
  const std::vector<std::size_t>& disjunction_choice() const { return disjunction_choice_; }

  struct Scratch {
    std::vector<char> truth;
    std::vector<std::uint32_t> missing;
    std::vector<char> alive;
    std::vector<AtomId> queue;
  };

  Scratch scratch() const {
    return {std::vector<char>(total_, 0), std::vector<std::uint32_t>(rules_.size(), 0),
            std::vector<char>(rules_.size(), 0), {}};
  }

  // `truth` must hold the chosen atoms on entry; on exit it holds the model.
  void close(Scratch& s) const {
    for (auto a : certain_) s.truth[a] = 1;
    for (std::size_t l = 0; l + 1 < level_begin_.size(); ++l) {
      s.queue.clear();
      for (auto r = level_begin_[l]; r < level_begin_[l + 1]; ++r) {
        const auto& rule = rules_[r];
        bool alive = std::none_of(rule.negative.begin(), rule.negative.end(),
                                  [&](AtomId a) { return s.truth[a] != 0; });
        s.alive[r] = alive;
        if (!alive) continue;
        std::uint32_t missing = 0;
        for (auto a : rule.positive) missing += s.truth[a] ? 0 : 1;
        s.missing[r] = missing;
        if (missing == 0) s.queue.push_back(rule.head);
      }
      while (!s.queue.empty()) {
        AtomId a = s.queue.back();
        s.queue.pop_back();
        if (s.truth[a]) continue;
        s.truth[a] = 1;
        for (auto r : watch_[a]) {
          if (s.alive[r] && --s.missing[r] == 0) s.queue.push_back(rules_[r].head);
        }
      }
    }
  }

 private:
  std::size_t visible_;
  std::size_t total_;
  std::vector<AtomId> certain_;
  std::vector<std::vector<Outcome>> choices_;
  std::vector<std::size_t> fact_choice_;
  std::vector<std::size_t> disjunction_choice_;
  std::vector<CompiledRule> rules_;
  std::vector<std::size_t> level_begin_;
  std::vector<std::vector<std::uint32_t>> watch_;
};

}  // namespace

std::vector<Atom> least_model(const GroundProgram& program, const TotalChoice& choice) {
  auto strata = stratify(program);
  Compiled compiled(program, strata, nullptr, nullptr, nullptr);
  if (choice.facts.size() != program.probabilistic_facts.size() ||
      choice.disjunctions.size() != program.disjunctions.size()) {
    throw std::invalid_argument("total choice does not match the program's choice points");
  }
  auto s = compiled.scratch();
  const auto& choices = compiled.choices();
  for (std::size_t i = 0; i < choice.facts.size(); ++i) {
    const auto& outcome = choices[compiled.fact_choice()[i]][choice.facts[i] ? 0 : 1];
    for (auto a : outcome.atoms) s.truth[a] = 1;
  }
  for (std::size_t i = 0; i < choice.disjunctions.size(); ++i) {
    const auto& options = choices[compiled.disjunction_choice()[i]];
    auto pick = choice.disjunctions[i].value_or(options.size() - 1);
    if (pick >= options.size() - 1 && choice.disjunctions[i]) {
      throw std::invalid_argument("disjunction alternative out of range");
    }
    for (auto a : options[pick].atoms) s.truth[a] = 1;
  }
  compiled.close(s);
  std::vector<Atom> model;
  for (std::size_t a = 0; a < compiled.visible(); ++a) {
    if (s.truth[a]) model.push_back(program.atom(static_cast<AtomId>(a)));
  }
  return model;
}

// ---------------------------------------------------------------------------
// Exact query evaluation

namespace {

struct Relevance {
  std::vector<char> rules;
  std::vector<char> facts;
  std::vector<char> disjunctions;
};

// Keeps the part of the ground program that can influence a query, after
// discarding rules whose positive bodies can never hold.
Relevance relevant_part(const GroundProgram& g) {
  const std::size_t n = g.atom_count();
  std::vector<char> possible(n, 0);
  for (auto a : g.facts) possible[a] = 1;
  for (const auto& f : g.probabilistic_facts) {
    if (!f.probability.is_zero()) possible[f.atom] = 1;
  }
  auto holds = [&](const std::vector<AtomId>& pos) {
    return std::all_of(pos.begin(), pos.end(), [&](AtomId a) { return possible[a] != 0; });
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.rules) {
      if (!possible[r.head] && holds(r.positive)) possible[r.head] = changed = true;
    }
    for (const auto& d : g.disjunctions) {
      if (!holds(d.positive)) continue;
      for (const auto& [p, a] : d.alternatives) {
        if (!p.is_zero() && !possible[a]) possible[a] = changed = true;
      }
    }
  }

  std::vector<char> relevant(n, 0);
  std::vector<AtomId> work;
  auto mark = [&](AtomId a) {
    if (!relevant[a]) {
      relevant[a] = 1;
      work.push_back(a);
    }
  };
  for (auto q : g.queries) mark(q);

  // Index the defining statements of each atom.
  std::vector<std::vector<std::size_t>> rules_for(n), disjunctions_for(n);
  for (std::size_t i = 0; i < g.rules.size(); ++i) rules_for[g.rules[i].head].push_back(i);
  for (std::size_t i = 0; i < g.disjunctions.size(); ++i) {
    for (const auto& [p, a] : g.disjunctions[i].alternatives) disjunctions_for[a].push_back(i);
  }

  Relevance keep{std::vector<char>(g.rules.size(), 0), std::vector<char>(g.probabilistic_facts.size(), 0),
                 std::vector<char>(g.disjunctions.size(), 0)};
  while (!work.empty()) {
    AtomId a = work.back();
    work.pop_back();
    for (auto i : rules_for[a]) {
      const auto& r = g.rules[i];
      if (keep.rules[i] || !holds(r.positive)) continue;
      keep.rules[i] = 1;
      for (auto b : r.positive) mark(b);
      for (auto b : r.negative) {
        if (possible[b]) mark(b);
      }
    }
    for (auto i : disjunctions_for[a]) {
      const auto& d = g.disjunctions[i];
      if (keep.disjunctions[i] || !holds(d.positive)) continue;
      keep.disjunctions[i] = 1;
      for (auto b : d.positive) mark(b);
      for (auto b : d.negative) {
        if (possible[b]) mark(b);
      }
    }
  }
  for (std::size_t i = 0; i < g.probabilistic_facts.size(); ++i) {
    keep.facts[i] = relevant[g.probabilistic_facts[i].atom];
  }
  return keep;
}

struct Partial {
  std::vector<Rational> sums;
  Rational total = 0;
  std::size_t leaves = 0;
};

class Enumerator {
 public:
  Enumerator(const Compiled& compiled, const std::vector<AtomId>& queries) : c_(compiled), queries_(queries) {
    for (const auto& options : c_.choices()) {
      std::vector<const Outcome*> live;
      for (const auto& o : options) {
        if (o.weight != 0) live.push_back(&o);
      }
      if (live.size() == 1) {
        fixed_.insert(fixed_.end(), live[0]->atoms.begin(), live[0]->atoms.end());
      } else if (live.size() > 1) {
        branching_.push_back(std::move(live));
      }
    }
  }

  std::size_t branching() const { return branching_.size(); }

  Partial run(unsigned threads) const {
    // Split on a prefix of the choice points so that workers get several jobs
    // each; partial sums are combined in job order.
    std::size_t depth = 0;
    std::size_t jobs = 1;
    if (threads > 1) {
      while (depth < branching_.size() && jobs < std::size_t{threads} * 4) jobs *= branching_[depth++].size();
    }
    std::vector<std::pair<Rational, std::vector<AtomId>>> prefixes{{Rational{1}, {}}};
    for (std::size_t i = 0; i < depth; ++i) {
      std::vector<std::pair<Rational, std::vector<AtomId>>> next;
      for (const auto& [w, atoms] : prefixes) {
        for (const auto* o : branching_[i]) {
          auto a = atoms;
          a.insert(a.end(), o->atoms.begin(), o->atoms.end());
          next.emplace_back(w * o->weight, std::move(a));
        }
      }
      prefixes = std::move(next);
    }

    Partial result{std::vector<Rational>(queries_.size(), Rational{0})};
    auto merge = [&](Partial p) {
      for (std::size_t q = 0; q < queries_.size(); ++q) result.sums[q] += p.sums[q];
      result.total += p.total;
      result.leaves += p.leaves;
    };
    if (threads <= 1) {
      for (const auto& [w, atoms] : prefixes) merge(job(depth, w, atoms));
      return result;
    }
    for (std::size_t start = 0; start < prefixes.size(); start += threads) {
      std::vector<std::future<Partial>> running;
      for (std::size_t j = start; j < std::min(prefixes.size(), start + threads); ++j) {
        running.push_back(std::async(std::launch::async,
                                     [this, depth, &p = prefixes[j]] { return job(depth, p.first, p.second); }));
      }
      for (auto& f : running) merge(f.get());
    }
    return result;
  }

 private:
  Partial job(std::size_t depth, const Rational& weight, const std::vector<AtomId>& prefix) const {
    Partial p{std::vector<Rational>(queries_.size(), Rational{0})};
    auto scratch = c_.scratch();
    std::vector<AtomId> chosen = prefix;
    descend(depth, weight, chosen, scratch, p);
    return p;
  }

  void descend(std::size_t i, const Rational& weight, std::vector<AtomId>& chosen, Compiled::Scratch& s,
               Partial& p) const {
    if (i == branching_.size()) {
      std::fill(s.truth.begin(), s.truth.end(), 0);
      for (auto a : fixed_) s.truth[a] = 1;
      for (auto a : chosen) s.truth[a] = 1;
      c_.close(s);
      for (std::size_t q = 0; q < queries_.size(); ++q) {
        if (s.truth[queries_[q]]) p.sums[q] += weight;
      }
      p.total += weight;
      ++p.leaves;
      return;
    }
    for (const auto* o : branching_[i]) {
      auto mark = chosen.size();
      chosen.insert(chosen.end(), o->atoms.begin(), o->atoms.end());
      descend(i + 1, weight * o->weight, chosen, s, p);
      chosen.resize(mark);
    }
  }

  const Compiled& c_;
  const std::vector<AtomId>& queries_;
  std::vector<AtomId> fixed_;
  std::vector<std::vector<const Outcome*>> branching_;
};

}  // namespace

Evaluation evaluate(const LogicProgram& program, const QueryOptions& options) {
  auto g = ground(desugar(program));
  auto strata = stratify(g);
  auto keep = relevant_part(g);
  Compiled compiled(g, strata, &keep.rules, &keep.facts, &keep.disjunctions);
  Enumerator enumerator(compiled, g.queries);
  if (enumerator.branching() > options.max_choice_points) {
    throw ChoiceSpaceTooLarge(enumerator.branching(), options.max_choice_points);
  }
  auto partial = enumerator.run(std::max(1u, options.threads));
  if (partial.total != 1) {
    throw std::logic_error("total-choice weights sum to " + to_fraction(partial.total) + ", not 1");
  }

  Evaluation out;
  out.total_weight = partial.total;
  out.choice_points = enumerator.branching();
  out.total_choices = partial.leaves;
  for (std::size_t q = 0; q < g.queries.size(); ++q) {
    out.results.push_back({g.atom(g.queries[q]), partial.sums[q]});
  }
  return out;
}

std::vector<QueryResult> query_exact(const LogicProgram& program, const QueryOptions& options) {
  return evaluate(program, options).results;
}

}  // namespace pdmn::logic
