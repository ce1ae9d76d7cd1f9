#include "pdmn/model.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <set>
#include <sstream>

namespace pdmn {

std::string SourceSpan::str() const {
  return (file.empty() ? std::string("<input>") : file) + ":" + std::to_string(line) + ":" +
         std::to_string(column);
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "syntax-error";
    case ErrorCode::UnknownPolicy: return "unknown-policy";
    case ErrorCode::DuplicateDecl: return "duplicate-declaration";
    case ErrorCode::UnknownSymbol: return "unknown-symbol";
    case ErrorCode::AmbiguousSymbol: return "ambiguous-symbol";
    case ErrorCode::TypeMismatch: return "type-mismatch";
    case ErrorCode::UnknownElement: return "unknown-element";
    case ErrorCode::InvalidProbability: return "invalid-probability";
    case ErrorCode::InvalidName: return "invalid-name";
    case ErrorCode::InvalidType: return "invalid-type";
    case ErrorCode::NotAFunction: return "not-a-function";
    case ErrorCode::InvalidTable: return "invalid-table";
  }
  return "unknown";
}

namespace {

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

}  // namespace

// ---------------------------------------------------------------------------
// Elements and names

Element Element::parse(std::string_view text) {
  Element e{std::string(text), parse_decimal(text)};
  return e;
}

std::string Element::logic_name() const {
  if (number) return to_display(*number);
  return lower(text);
}

std::optional<std::size_t> TypeDecl::find(std::string_view element) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].text == element) return i;
  }
  return std::nullopt;
}

bool is_quantifier_letter(std::string_view token) {
  return token.size() == 1 && token[0] >= 'A' && token[0] <= 'Z';
}

std::string to_string(const Argument& arg) {
  if (const auto* q = std::get_if<Quantifier>(&arg)) return std::string(1, q->letter);
  return std::get<Element>(arg).text;
}

std::string mangle_name(std::string_view raw_name) {
  std::string out;
  bool pending_space = false;
  for (char c : raw_name) {
    auto u = static_cast<unsigned char>(c);
    if (c == ' ' || c == '\t') {
      pending_space = !out.empty();
      continue;
    }
    if (!(std::isalnum(u) || c == '_') || u >= 0x80) {
      throw ModelError(ErrorCode::InvalidName,
                       "name '" + std::string(raw_name) + "' may only contain letters, digits and spaces");
    }
    if (pending_space) out += '_';
    pending_space = false;
    out += static_cast<char>(std::tolower(u));
  }
  if (out.empty()) throw ModelError(ErrorCode::InvalidName, "empty name");
  if (!std::islower(static_cast<unsigned char>(out.front()))) {
    throw ModelError(ErrorCode::InvalidName, "name '" + std::string(raw_name) + "' must start with a letter");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Glossary

std::size_t Glossary::add_type(TypeDecl type) {
  if (!is_identifier(type.name)) {
    throw ModelError(ErrorCode::InvalidName, "type name '" + type.name + "' must be a single identifier");
  }
  if (find_type(type.name)) throw ModelError(ErrorCode::DuplicateDecl, "type '" + type.name + "' declared twice");
  auto mangled = mangle_name(type.name);
  for (const auto& t : types_) {
    if (mangle_name(t.name) == mangled) {
      throw ModelError(ErrorCode::DuplicateDecl, "types '" + t.name + "' and '" + type.name + "' collide");
    }
  }
  if (type.elements.empty()) {
    throw ModelError(ErrorCode::InvalidType, "type '" + type.name + "' has no elements");
  }
  std::set<std::string> seen;
  bool numeric = type.elements.front().is_numeric();
  for (const auto& e : type.elements) {
    if (e.is_numeric() != numeric) {
      throw ModelError(ErrorCode::InvalidType,
                       "type '" + type.name + "' mixes numeric and symbolic elements");
    }
    if (!numeric && (!is_identifier(e.text) || is_quantifier_letter(e.text))) {
      throw ModelError(ErrorCode::InvalidType, "'" + e.text + "' is not a valid element of type '" + type.name +
                                                   "' (single uppercase letters are quantifiers)");
    }
    if (!seen.insert(e.logic_name()).second) {
      throw ModelError(ErrorCode::DuplicateDecl, "element '" + e.text + "' repeated in type '" + type.name + "'");
    }
  }
  types_.push_back(std::move(type));
  return types_.size() - 1;
}

std::optional<std::size_t> Glossary::find_type(std::string_view name) const {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> Glossary::argument_types_of(std::string_view raw_name) const {
  std::vector<std::size_t> args;
  for (const auto& w : split_words(raw_name)) {
    if (auto t = find_type(w)) args.push_back(*t);
  }
  return args;
}

void Glossary::check_unique_symbol(const std::string& raw, const std::string& mangled) const {
  for (auto ref : symbols()) {
    if (this->mangled(ref) == mangled) {
      throw ModelError(ErrorCode::DuplicateDecl,
                       "'" + raw + "' collides with '" + raw_name(ref) + "' (both become " + mangled + ")");
    }
  }
}

std::size_t Glossary::add_predicate(std::string_view raw_name) {
  auto words = split_words(raw_name);
  std::string raw;
  for (const auto& w : words) raw += (raw.empty() ? "" : " ") + w;
  auto mangled = mangle_name(raw);
  check_unique_symbol(raw, mangled);
  predicates_.push_back({raw, argument_types_of(raw), mangled});
  return predicates_.size() - 1;
}

std::size_t Glossary::add_function(std::string_view raw_name, std::string_view range_type) {
  auto range = find_type(range_type);
  if (!range) {
    throw ModelError(ErrorCode::UnknownSymbol, "unknown type '" + std::string(range_type) + "' for function '" +
                                                   std::string(raw_name) + "'");
  }
  auto words = split_words(raw_name);
  std::string raw;
  for (const auto& w : words) raw += (raw.empty() ? "" : " ") + w;
  auto mangled = mangle_name(raw);
  check_unique_symbol(raw, mangled);
  functions_.push_back({raw, argument_types_of(raw), *range, mangled});
  return functions_.size() - 1;
}

const std::string& Glossary::raw_name(SymbolRef ref) const {
  return ref.is_function() ? functions_.at(ref.index).raw_name : predicates_.at(ref.index).raw_name;
}

const std::string& Glossary::mangled(SymbolRef ref) const {
  return ref.is_function() ? functions_.at(ref.index).mangled : predicates_.at(ref.index).mangled;
}

const std::vector<std::size_t>& Glossary::arg_types(SymbolRef ref) const {
  return ref.is_function() ? functions_.at(ref.index).arg_types : predicates_.at(ref.index).arg_types;
}

const TypeDecl& Glossary::range(SymbolRef ref) const {
  if (!ref.is_function()) throw std::logic_error("predicates have no range type");
  return types_.at(functions_.at(ref.index).range_type);
}

std::vector<SymbolRef> Glossary::symbols() const {
  std::vector<SymbolRef> out;
  for (std::size_t i = 0; i < predicates_.size(); ++i) out.push_back({SymbolKind::Predicate, i});
  for (std::size_t i = 0; i < functions_.size(); ++i) out.push_back({SymbolKind::Function, i});
  return out;
}

ColumnHeader Glossary::resolve_header(std::string_view text, Side side) const {
  auto words = split_words(text);
  if (words.empty()) throw ModelError(ErrorCode::UnknownSymbol, "empty column header");

  struct Candidate {
    SymbolRef ref;
    std::vector<Argument> args;
    std::optional<ModelError> problem;
  };
  std::vector<Candidate> candidates;
  for (auto ref : symbols()) {
    auto pattern = split_words(raw_name(ref));
    if (pattern.size() != words.size()) continue;
    Candidate c{ref, {}, std::nullopt};
    bool shape = true;
    for (std::size_t i = 0; i < words.size() && shape; ++i) {
      auto type = find_type(pattern[i]);
      if (!type) {
        shape = words[i] == pattern[i];
        continue;
      }
      if (is_quantifier_letter(words[i])) {
        c.args.emplace_back(Quantifier{words[i][0]});
      } else if (auto e = types_[*type].find(words[i])) {
        c.args.emplace_back(types_[*type].elements[*e]);
      } else {
        bool elsewhere = std::any_of(types_.begin(), types_.end(),
                                     [&](const TypeDecl& t) { return t.find(words[i]).has_value(); });
        if (!c.problem) {
          c.problem = elsewhere ? ModelError(ErrorCode::TypeMismatch, "'" + words[i] + "' is not a " +
                                                                           types_[*type].name + " in '" +
                                                                           std::string(text) + "'")
                                : ModelError(ErrorCode::UnknownElement, "unknown element '" + words[i] +
                                                                            "' in '" + std::string(text) + "'");
        }
        c.args.emplace_back(Element::parse(words[i]));
      }
    }
    if (shape) candidates.push_back(std::move(c));
  }
  if (candidates.empty()) {
    throw ModelError(ErrorCode::UnknownSymbol, "'" + std::string(text) + "' matches no declared predicate or function");
  }
  if (candidates.size() > 1) {
    std::vector<Candidate> clean;
    std::copy_if(candidates.begin(), candidates.end(), std::back_inserter(clean),
                 [](const Candidate& c) { return !c.problem; });
    if (clean.size() != 1) {
      std::string names;
      for (const auto& c : clean.empty() ? candidates : clean) {
        names += (names.empty() ? "" : ", ") + raw_name(c.ref);
      }
      throw ModelError(ErrorCode::AmbiguousSymbol,
                       "'" + std::string(text) + "' matches several declarations: " + names);
    }
    candidates = std::move(clean);
  }
  auto& c = candidates.front();
  if (c.problem) throw *c.problem;
  return ColumnHeader{c.ref, std::move(c.args), side, 1, {}};
}

std::string Glossary::render_header(const ColumnHeader& header) const {
  auto pattern = split_words(raw_name(header.target));
  std::string out;
  std::size_t arg = 0;
  for (const auto& w : pattern) {
    if (!out.empty()) out += ' ';
    if (find_type(w) && arg < header.args.size()) {
      out += to_string(header.args[arg++]);
    } else {
      out += w;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tables and cells

std::string_view to_string(HitPolicy policy) {
  switch (policy) {
    case HitPolicy::Unique: return "U";
    case HitPolicy::Any: return "A";
    case HitPolicy::First: return "F";
    case HitPolicy::Choice: return "Ch";
  }
  return "?";
}

std::string to_string(const CellExpr& cell) {
  struct Visitor {
    std::string operator()(const DontCare&) const { return "-"; }
    std::string operator()(const ValueLiteral& v) const { return v.value.text; }
    std::string operator()(const ValueSet& v) const {
      std::string out;
      for (const auto& e : v.values) out += (out.empty() ? "" : ", ") + e.text;
      return out;
    }
    std::string operator()(const Comparison& c) const {
      static constexpr const char* ops[] = {"<", "<=", ">", ">="};
      return std::string(ops[static_cast<int>(c.op)]) + " " + to_display(c.bound);
    }
    std::string operator()(const Range& r) const { return "[" + to_display(r.low) + ".." + to_display(r.high) + "]"; }
    std::string operator()(const BoolLiteral& b) const { return b.value ? "Yes" : "No"; }
    std::string operator()(const VarRef& v) const { return std::string(1, v.letter); }
    std::string operator()(const ProbabilityCell& p) const { return p.probability.str(); }
  };
  return std::visit(Visitor{}, cell);
}

std::vector<std::size_t> matching_elements(const CellExpr& cell, const TypeDecl& type) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < type.elements.size(); ++i) {
    const auto& e = type.elements[i];
    bool match = std::visit(
        [&](const auto& c) -> bool {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, DontCare> || std::is_same_v<T, VarRef>) {
            return true;
          } else if constexpr (std::is_same_v<T, ValueLiteral>) {
            return c.value == e;
          } else if constexpr (std::is_same_v<T, ValueSet>) {
            return std::find(c.values.begin(), c.values.end(), e) != c.values.end();
          } else if constexpr (std::is_same_v<T, Comparison>) {
            if (!e.number) return false;
            switch (c.op) {
              case CompareOp::Less: return *e.number < c.bound;
              case CompareOp::LessEqual: return *e.number <= c.bound;
              case CompareOp::Greater: return *e.number > c.bound;
              case CompareOp::GreaterEqual: return *e.number >= c.bound;
            }
            return false;
          } else if constexpr (std::is_same_v<T, Range>) {
            return e.number && *e.number >= c.low && *e.number <= c.high;
          } else {
            return false;
          }
        },
        cell);
    if (match) out.push_back(i);
  }
  return out;
}

std::size_t DecisionTable::slot_count() const {
  std::size_t n = 0;
  for (const auto& o : outputs) n += o.width;
  return n;
}

std::size_t DecisionTable::slot_owner(std::size_t slot) const {
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (slot < outputs[i].width) return i;
    slot -= outputs[i].width;
  }
  throw std::out_of_range("output slot out of range");
}

std::vector<char> fresh_letters(std::size_t count, std::string_view taken) {
  static constexpr std::string_view order = "XYZWVUTSRQPONMLKJIHGFEDCBA";
  std::vector<char> out;
  for (char c : order) {
    if (out.size() == count) break;
    if (taken.find(c) == std::string_view::npos) out.push_back(c);
  }
  if (out.size() < count) throw ModelError(ErrorCode::InvalidTable, "ran out of quantifier letters");
  return out;
}

QuerySet QuerySet::all_symbols(const Glossary& glossary) {
  QuerySet set;
  set.implicit_all = true;
  for (auto ref : glossary.symbols()) {
    auto n = glossary.arg_types(ref).size();
    auto letters = fresh_letters(n + (ref.is_function() ? 1 : 0));
    QueryEntry e{ref, {}, std::nullopt, {}};
    for (std::size_t i = 0; i < n; ++i) e.args.emplace_back(Quantifier{letters[i]});
    if (ref.is_function()) e.value = Quantifier{letters[n]};
    set.entries.push_back(std::move(e));
  }
  return set;
}

std::map<char, std::size_t> quantifier_types(const DecisionTable& table, const Glossary& glossary) {
  std::map<char, std::size_t> types;
  auto bind = [&](char letter, std::size_t type, const std::string& where) {
    auto [it, inserted] = types.emplace(letter, type);
    if (!inserted && it->second != type) {
      throw ModelError(ErrorCode::TypeMismatch, std::string("quantifier ") + letter + " is used as both " +
                                                    glossary.types()[it->second].name + " and " +
                                                    glossary.types()[type].name + " (" + where + ")");
    }
  };
  auto visit_header = [&](const ColumnHeader& h) {
    const auto& arg_types = glossary.arg_types(h.target);
    for (std::size_t i = 0; i < h.args.size() && i < arg_types.size(); ++i) {
      if (const auto* q = std::get_if<Quantifier>(&h.args[i])) {
        bind(q->letter, arg_types[i], "in '" + glossary.render_header(h) + "' of table " + table.name);
      }
    }
  };
  for (const auto& h : table.inputs) visit_header(h);
  for (const auto& h : table.outputs) visit_header(h);
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.inputs.size() && i < table.inputs.size(); ++i) {
      const auto* v = std::get_if<VarRef>(&row.inputs[i]);
      if (!v) continue;
      const auto& h = table.inputs[i];
      if (!h.target.is_function()) {
        throw ModelError(ErrorCode::TypeMismatch, std::string("quantifier ") + v->letter +
                                                      " cannot be the value of predicate column '" +
                                                      glossary.render_header(h) + "'");
      }
      bind(v->letter, glossary.functions()[h.target.index].range_type,
           "as the value of '" + glossary.render_header(h) + "' in table " + table.name);
    }
  }
  return types;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Validator {
 public:
  explicit Validator(const PdmnModel& model) : model_(model), g_(model.glossary) {}

  std::vector<Diagnostic> run() {
    for (const auto& t : model_.tables) {
      for (const auto& o : t.outputs) defined_.insert(o.target);
    }
    for (const auto& f : model_.facts) {
      for (const auto& r : f.rows) defined_.insert(r.target);
    }
    std::set<std::string> names;
    for (const auto& t : model_.tables) {
      if (!names.insert(t.name).second) {
        report(Severity::Error, "duplicate-table", "decision table '" + t.name + "' is defined twice", t, {});
      }
      check_table(t);
    }
    return std::move(out_);
  }

 private:
  void report(Severity sev, std::string code, std::string message, const DecisionTable& t,
              std::optional<std::size_t> row) {
    Diagnostic d{sev, std::move(code), std::move(message), t.span.value, t.name, std::nullopt};
    if (row) {
      d.row = *row + 1;
      if (*row < t.rows.size()) d.span = t.rows[*row].span.value;
    }
    out_.push_back(std::move(d));
  }

  bool structurally_sound(const DecisionTable& t) {
    bool ok = true;
    auto fail = [&](const std::string& msg, std::optional<std::size_t> row = std::nullopt) {
      report(Severity::Error, "malformed-table", msg, t, row);
      ok = false;
    };
    if (t.outputs.empty()) fail("table '" + t.name + "' has no output column");
    try {
      quantifier_types(t, g_);
    } catch (const ModelError& e) {
      fail(e.what());
    }
    if (t.policy == HitPolicy::Choice) {
      if (!t.value_row) fail("Ch table '" + t.name + "' needs an output-value row");
      if (t.outputs.size() != 1) fail("Ch table '" + t.name + "' must have exactly one output column");
    }
    const auto slots = t.slot_count();
    if (t.value_row && t.value_row->size() != slots) fail("output-value row width does not match the headers");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      if (row.inputs.size() != t.inputs.size() || row.outputs.size() != slots) {
        fail("row width does not match the headers", r);
        continue;
      }
      for (const auto& cell : row.outputs) {
        bool prob = std::holds_alternative<ProbabilityCell>(cell);
        if (t.value_row && !prob) fail("probabilistic table rows must hold probabilities", r);
        if (!t.value_row && prob) fail("probability in a table without an output-value row", r);
      }
    }
    return ok;
  }

  void check_table(const DecisionTable& t) {
    if (!structurally_sound(t)) return;

    if (t.policy == HitPolicy::Choice) {
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        Rational sum = 0;
        for (const auto& cell : t.rows[r].outputs) sum += std::get<ProbabilityCell>(cell).probability.value();
        if (sum > 1) {
          report(Severity::Error, "choice-sum-exceeds-one",
                 "probabilities of a Ch row sum to " + to_display(sum) + ", more than 1", t, r);
        }
      }
    } else if (t.is_probabilistic()) {
      for (const auto& o : t.outputs) {
        if (o.target.is_function()) {
          report(Severity::Warning, "multi-valued-function",
                 "function '" + g_.raw_name(o.target) + "' gets independent probabilities from " +
                     std::string(to_string(t.policy)) +
                     " table; it may take several values at once (use the Ch hit policy)",
                 t, {});
        }
      }
    }

    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      for (std::size_t j = i + 1; j < t.rows.size(); ++j) {
        if (!overlap(t, t.rows[i], t.rows[j])) continue;
        const std::string pair = "rows " + std::to_string(i + 1) + " and " + std::to_string(j + 1);
        switch (t.policy) {
          case HitPolicy::Unique:
          case HitPolicy::Choice:
            report(Severity::Warning, "overlapping-rows",
                   pair + " of " + std::string(to_string(t.policy)) + " table '" + t.name + "' can both apply", t, j);
            break;
          case HitPolicy::Any:
            if (t.rows[i].outputs != t.rows[j].outputs) {
              report(Severity::Error, "conflicting-any-rows",
                     pair + " of A table '" + t.name + "' overlap but assign different outputs", t, j);
            } else if (t.is_probabilistic()) {
              report(Severity::Warning, "probabilistic-duplicate",
                     pair + " of A table '" + t.name + "' overlap; their probabilities combine as independent causes",
                     t, j);
            }
            break;
          case HitPolicy::First:
            break;
        }
      }
    }

    for (const auto& h : t.inputs) {
      if (defined_.count(h.target) || !reported_undefined_.insert(h.target).second) continue;
      Diagnostic d{Severity::Warning, "undefined-input",
                   "'" + g_.raw_name(h.target) + "' (" + g_.mangled(h.target) +
                       ") is used as an input but no table or fact defines it; it is always false",
                   h.span.value.line > 0 ? h.span.value : t.span.value, t.name, std::nullopt};
      out_.push_back(std::move(d));
    }
  }

  bool overlap(const DecisionTable& t, const RuleRow& a, const RuleRow& b) const {
    for (std::size_t c = 0; c < t.inputs.size(); ++c) {
      const auto& x = a.inputs[c];
      const auto& y = b.inputs[c];
      const auto& h = t.inputs[c];
      if (!h.target.is_function()) {
        const auto* bx = std::get_if<BoolLiteral>(&x);
        const auto* by = std::get_if<BoolLiteral>(&y);
        if (bx && by && bx->value != by->value) return false;
        continue;
      }
      const auto& type = g_.range(h.target);
      auto mx = matching_elements(x, type);
      auto my = matching_elements(y, type);
      std::vector<std::size_t> common;
      std::set_intersection(mx.begin(), mx.end(), my.begin(), my.end(), std::back_inserter(common));
      if (common.empty()) return false;
    }
    return true;
  }

  const PdmnModel& model_;
  const Glossary& g_;
  std::set<SymbolRef> defined_;
  std::set<SymbolRef> reported_undefined_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_model(const PdmnModel& model) { return Validator(model).run(); }

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) { return d.is_error(); });
}

}  // namespace pdmn
