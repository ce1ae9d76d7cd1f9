#include "pdmn/workbook.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>
#include <sstream>

namespace pdmn {

std::string ParseError::str() const {
  return span.str() + ": error: " + message + " [" + std::string(to_string(code)) + "]";
}

namespace {

std::string join_messages(const std::vector<ParseError>& errors) {
  std::string out;
  for (const auto& e : errors) out += (out.empty() ? "" : "\n") + e.str();
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::optional<bool> yes_no(std::string_view s) {
  if (iequals(s, "yes")) return true;
  if (iequals(s, "no")) return false;
  return std::nullopt;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) return out;
    s.remove_prefix(comma + 1);
  }
}

// Looks an element up in a type, distinguishing "belongs to another type"
// from "unknown everywhere".
Element element_of(std::string_view text, const TypeDecl& type, const Glossary& g, std::string_view where) {
  if (auto i = type.find(text)) return type.elements[*i];
  for (const auto& t : g.types()) {
    if (t.find(text)) {
      throw ModelError(ErrorCode::TypeMismatch, "'" + std::string(text) + "' is a " + t.name + ", expected a " +
                                                    type.name + " " + std::string(where));
    }
  }
  throw ModelError(ErrorCode::UnknownElement, "'" + std::string(text) + "' is not an element of " + type.name +
                                                  " " + std::string(where));
}

}  // namespace

ParseErrors::ParseErrors(std::vector<ParseError> errors)
    : std::runtime_error(join_messages(errors)), errors_(std::move(errors)) {}

// ---------------------------------------------------------------------------
// Cells

CellExpr parse_cell(std::string_view raw, const CellContext& ctx) {
  const Glossary& g = *ctx.glossary;
  const ColumnHeader& col = *ctx.column;
  std::string_view text = trim(raw);
  const std::string where = "in column '" + g.render_header(col) + "'";

  if (ctx.position == CellPosition::Output && ctx.probabilistic) {
    if (auto p = Probability::parse(text)) return ProbabilityCell{*p};
    if (parse_number(text)) {
      throw ModelError(ErrorCode::InvalidProbability, "probability " + std::string(text) + " is outside [0, 1]");
    }
    throw ModelError(ErrorCode::InvalidProbability, "expected a probability, found '" + std::string(text) + "'");
  }

  if (text.empty() || text == "-") {
    if (ctx.position == CellPosition::ValueRow) {
      throw ModelError(ErrorCode::SyntaxError, "output-value row cell is empty " + where);
    }
    return DontCare{};
  }

  if (!col.target.is_function()) {
    if (auto b = yes_no(text)) return BoolLiteral{*b};
    throw ModelError(ErrorCode::TypeMismatch, "expected Yes or No " + where + ", found '" + std::string(text) + "'");
  }

  const TypeDecl& type = g.range(col.target);
  if (ctx.position != CellPosition::Input) {
    return ValueLiteral{element_of(text, type, g, where)};
  }

  auto numeric_only = [&](const char* what) {
    if (!type.is_numeric()) {
      throw ModelError(ErrorCode::TypeMismatch, std::string(what) + " '" + std::string(text) +
                                                    "' needs a numeric type, but " + type.name + " is symbolic");
    }
  };
  auto number = [&](std::string_view s) {
    auto n = parse_decimal(trim(s));
    if (!n) throw ModelError(ErrorCode::SyntaxError, "expected a number in '" + std::string(text) + "'");
    return *n;
  };

  if (text.front() == '<' || text.front() == '>') {
    numeric_only("comparison");
    bool less = text.front() == '<';
    bool inclusive = text.size() > 1 && text[1] == '=';
    auto bound = number(text.substr(inclusive ? 2 : 1));
    CompareOp op = less ? (inclusive ? CompareOp::LessEqual : CompareOp::Less)
                        : (inclusive ? CompareOp::GreaterEqual : CompareOp::Greater);
    return Comparison{op, bound};
  }
  if (text.front() == '[') {
    numeric_only("range");
    auto dots = text.find("..");
    if (text.back() != ']' || dots == std::string_view::npos) {
      throw ModelError(ErrorCode::SyntaxError, "malformed range '" + std::string(text) + "', expected [low..high]");
    }
    Range r{number(text.substr(1, dots - 1)), number(text.substr(dots + 2, text.size() - dots - 3))};
    if (r.low > r.high) throw ModelError(ErrorCode::SyntaxError, "empty range '" + std::string(text) + "'");
    return r;
  }
  if (text.find(',') != std::string_view::npos) {
    ValueSet set;
    for (auto item : split_list(text)) {
      if (item.empty()) throw ModelError(ErrorCode::SyntaxError, "empty item in '" + std::string(text) + "'");
      auto e = element_of(item, type, g, where);
      if (std::find(set.values.begin(), set.values.end(), e) == set.values.end()) set.values.push_back(e);
    }
    if (set.values.size() == 1) return ValueLiteral{set.values.front()};
    return set;
  }
  if (is_quantifier_letter(text)) return VarRef{text[0]};
  return ValueLiteral{element_of(text, type, g, where)};
}

QueryEntry parse_query_cell(std::string_view raw, const Glossary& g) {
  std::string_view text = trim(raw);
  auto eq = text.find('=');
  QueryEntry entry;
  auto header = g.resolve_header(trim(text.substr(0, eq)));
  entry.target = header.target;
  entry.args = std::move(header.args);
  if (eq == std::string_view::npos) return entry;

  if (!entry.target.is_function()) {
    throw ModelError(ErrorCode::NotAFunction,
                     "'" + g.raw_name(entry.target) + "' is a predicate; '=' only applies to functions");
  }
  auto rhs = trim(text.substr(eq + 1));
  if (rhs.empty()) throw ModelError(ErrorCode::SyntaxError, "missing value after '=' in '" + std::string(text) + "'");
  if (is_quantifier_letter(rhs)) {
    entry.value = Quantifier{rhs[0]};
  } else {
    entry.value = element_of(rhs, g.range(entry.target), g, "in '" + std::string(text) + "'");
  }
  return entry;
}

// ---------------------------------------------------------------------------
// Layout

namespace {

struct Line {
  std::string_view text;
  std::size_t number;
};

struct RawModel {
  std::optional<std::string> name;
  std::vector<RawTable> tables;
  SourceSpan span;
};

class LayoutReader {
 public:
  LayoutReader(std::string_view source, std::string file) : source_(source), file_(std::move(file)) {}

  std::vector<RawModel> run(std::vector<ParseError>& errors) {
    std::vector<RawModel> models;
    RawTable* current = nullptr;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= source_.size()) {
      auto end = source_.find('\n', start);
      if (end == std::string_view::npos) end = source_.size();
      std::string_view line = source_.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++number;
      start = end + 1;

      std::string_view content = trim(line);
      if (content.empty() || content.front() == '#') continue;
      try {
        if (content.front() == '|') {
          if (!current) throw ModelError(ErrorCode::SyntaxError, "table row outside of a table");
          read_row(line, number, *current);
          continue;
        }
        auto words = header_words(content, number, line);
        if (words.front() == "model") {
          if (words.size() != 2 || !quoted_.back()) {
            throw ModelError(ErrorCode::SyntaxError, "expected model \"<Name>\"");
          }
          models.push_back({words[1], {}, span(number, line, content)});
          current = nullptr;
          continue;
        }
        if (models.empty()) models.push_back({std::nullopt, {}, span(number, line, content)});
        models.back().tables.push_back(read_table_header(words, number, line, content));
        current = &models.back().tables.back();
      } catch (const ModelError& e) {
        errors.push_back({e.code(), e.what(), span(number, line, content)});
        // Skip the rows of a table whose header could not be read.
        if (content.front() != '|') current = &discard_;
        discard_.grid.clear();
        discard_.separators.clear();
      }
    }
    return models;
  }

 private:
  SourceSpan span(std::size_t line_no, std::string_view line, std::string_view part) const {
    auto column = static_cast<std::size_t>(part.data() - line.data()) + 1;
    return {file_, line_no, column, part.size()};
  }

  // Splits a header line into words, honouring double quotes.
  std::vector<std::string> header_words(std::string_view content, std::size_t, std::string_view) {
    std::vector<std::string> words;
    quoted_.clear();
    std::size_t i = 0;
    while (i < content.size()) {
      if (std::isspace(static_cast<unsigned char>(content[i]))) {
        ++i;
        continue;
      }
      if (content[i] == '"') {
        auto close = content.find('"', i + 1);
        if (close == std::string_view::npos) throw ModelError(ErrorCode::SyntaxError, "unterminated quoted name");
        words.emplace_back(content.substr(i + 1, close - i - 1));
        quoted_.push_back(true);
        i = close + 1;
        continue;
      }
      auto j = i;
      while (j < content.size() && !std::isspace(static_cast<unsigned char>(content[j])) && content[j] != '"') ++j;
      words.emplace_back(content.substr(i, j - i));
      quoted_.push_back(false);
      i = j;
    }
    return words;
  }

  RawTable read_table_header(const std::vector<std::string>& words, std::size_t number, std::string_view line,
                             std::string_view content) {
    static const std::pair<const char*, TableKind> kinds[] = {
        {"type", TableKind::Type},         {"predicate", TableKind::Predicate}, {"function", TableKind::Function},
        {"decision", TableKind::Decision}, {"fact", TableKind::Fact},           {"query", TableKind::Query}};
    RawTable t;
    t.span = span(number, line, content);
    auto kind = std::find_if(std::begin(kinds), std::end(kinds), [&](const auto& k) { return words[0] == k.first; });
    if (kind == std::end(kinds)) {
      throw ModelError(ErrorCode::SyntaxError, "expected a table header (type, predicate, function, decision, fact, "
                                               "query), found '" + words[0] + "'");
    }
    t.kind = kind->second;
    std::size_t i = 1;
    if (i < words.size() && quoted_[i]) t.name = words[i++];
    if (t.kind == TableKind::Decision) {
      if (!t.name) throw ModelError(ErrorCode::SyntaxError, "decision tables need a quoted name");
      if (i >= words.size()) throw ModelError(ErrorCode::SyntaxError, "decision table '" + *t.name + "' needs a hit policy");
      const auto& p = words[i++];
      if (p == "U") t.policy = HitPolicy::Unique;
      else if (p == "A") t.policy = HitPolicy::Any;
      else if (p == "F") t.policy = HitPolicy::First;
      else if (p == "Ch") t.policy = HitPolicy::Choice;
      else if (p == "C" || p == "R" || p == "O") {
        throw ModelError(ErrorCode::UnknownPolicy, "multiple-hit policy '" + p + "' is not supported");
      } else {
        throw ModelError(ErrorCode::UnknownPolicy, "unknown hit policy '" + p + "' (expected U, A, F or Ch)");
      }
    }
    if (i != words.size()) throw ModelError(ErrorCode::SyntaxError, "unexpected '" + words[i] + "' in table header");
    return t;
  }

  void read_row(std::string_view line, std::size_t number, RawTable& table) {
    std::vector<RawCell> cells;
    std::optional<std::size_t> separator;
    std::size_t i = line.find('|') + 1;
    auto take_separator = [&] {
      if (separator) throw ModelError(ErrorCode::SyntaxError, "more than one '||' in a row");
      separator = cells.size();
      ++i;
    };
    if (i < line.size() && line[i] == '|') take_separator();
    while (true) {
      auto bar = line.find('|', i);
      if (bar == std::string_view::npos) {
        if (!trim(line.substr(i)).empty()) throw ModelError(ErrorCode::SyntaxError, "row must end with '|'");
        break;
      }
      std::string_view cell = line.substr(i, bar - i);
      std::string_view t = trim(cell);
      auto sp = span(number, line, t.empty() ? cell : t);
      cells.push_back({std::string(t), sp});
      i = bar + 1;
      if (i < line.size() && line[i] == '|') take_separator();
      if (trim(line.substr(std::min(i, line.size()))).empty()) break;
    }
    table.grid.push_back(std::move(cells));
    table.separators.push_back(separator);
  }

  std::string_view source_;
  std::string file_;
  std::vector<bool> quoted_;
  RawTable discard_;
};

// ---------------------------------------------------------------------------
// Interpretation

class ModelBuilder {
 public:
  ModelBuilder(const RawModel& raw, std::string default_name, std::vector<ParseError>& errors)
      : raw_(raw), errors_(errors) {
    model_.name = raw.name ? *raw.name : std::move(default_name);
  }

  PdmnModel run() {
    for (const auto& t : raw_.tables) {
      if (t.kind == TableKind::Type) guard(t.span, [&] { read_types(t); });
    }
    for (const auto& t : raw_.tables) {
      if (t.kind == TableKind::Predicate || t.kind == TableKind::Function) guard(t.span, [&] { read_symbols(t); });
    }
    bool has_query = false;
    std::set<std::string> names;
    for (const auto& t : raw_.tables) {
      switch (t.kind) {
        case TableKind::Decision:
          if (!names.insert(*t.name).second) {
            error(ErrorCode::DuplicateDecl, "decision table '" + *t.name + "' is defined twice", t.span);
          }
          guard(t.span, [&] { read_decision(t); });
          break;
        case TableKind::Fact:
          guard(t.span, [&] { read_facts(t); });
          break;
        case TableKind::Query:
          has_query = true;
          guard(t.span, [&] { read_queries(t); });
          break;
        default:
          break;
      }
    }
    if (!has_query) model_.queries = QuerySet::all_symbols(model_.glossary);
    return std::move(model_);
  }

 private:
  void error(ErrorCode code, std::string message, const SourceSpan& span) {
    errors_.push_back({code, std::move(message), span});
  }

  template <class F>
  void guard(const SourceSpan& span, F&& f) {
    try {
      f();
    } catch (const ModelError& e) {
      error(e.code(), e.what(), span);
    }
  }

  // Drops a leading column-title row such as "| Name | Elements |".
  static std::size_t skip_titles(const RawTable& t, std::initializer_list<const char*> titles) {
    if (t.grid.empty() || t.grid[0].size() != titles.size()) return 0;
    std::size_t i = 0;
    for (const char* title : titles) {
      if (!iequals(t.grid[0][i++].text, title)) return 0;
    }
    return 1;
  }

  void check_plain(const RawTable& t, std::size_t r) {
    if (t.separators[r]) throw ModelError(ErrorCode::SyntaxError, "'||' is only allowed in decision tables");
  }

  void read_types(const RawTable& t) {
    for (std::size_t r = skip_titles(t, {"Name", "Elements"}); r < t.grid.size(); ++r) {
      const auto& row = t.grid[r];
      guard(row.empty() ? t.span : row[0].span, [&] {
        check_plain(t, r);
        if (row.size() != 2) throw ModelError(ErrorCode::SyntaxError, "type rows have two cells: name and elements");
        TypeDecl type{row[0].text, {}};
        for (auto item : split_list(row[1].text)) {
          if (item.empty()) throw ModelError(ErrorCode::InvalidType, "empty element in type '" + type.name + "'");
          type.elements.push_back(Element::parse(item));
        }
        model_.glossary.add_type(std::move(type));
      });
    }
  }

  void read_symbols(const RawTable& t) {
    bool function = t.kind == TableKind::Function;
    std::size_t first = function ? skip_titles(t, {"Name", "Type"}) : skip_titles(t, {"Name"});
    for (std::size_t r = first; r < t.grid.size(); ++r) {
      const auto& row = t.grid[r];
      guard(row.empty() ? t.span : row[0].span, [&] {
        check_plain(t, r);
        if (function) {
          if (row.size() != 2) throw ModelError(ErrorCode::SyntaxError, "function rows have two cells: name and type");
          model_.glossary.add_function(row[0].text, row[1].text);
        } else {
          if (row.size() != 1) throw ModelError(ErrorCode::SyntaxError, "predicate rows have one cell");
          model_.glossary.add_predicate(row[0].text);
        }
      });
    }
  }

  void read_queries(const RawTable& t) {
    for (std::size_t r = 0; r < t.grid.size(); ++r) {
      guard(t.span, [&] { check_plain(t, r); });
      for (const auto& cell : t.grid[r]) {
        if (cell.text.empty()) continue;
        guard(cell.span, [&] {
          auto entry = parse_query_cell(cell.text, model_.glossary);
          entry.span.value = cell.span;
          model_.queries.entries.push_back(std::move(entry));
        });
      }
    }
  }

  void read_facts(const RawTable& t) {
    FactTable facts{t.name.value_or(""), {}, {t.span}};
    for (std::size_t r = 0; r < t.grid.size(); ++r) {
      guard(t.span, [&] { check_plain(t, r); });
      for (const auto& cell : t.grid[r]) {
        if (cell.text.empty()) continue;
        guard(cell.span, [&] {
          auto entry = parse_query_cell(cell.text, model_.glossary);
          FactRow row{entry.target, {}, std::nullopt, {cell.span}};
          for (const auto& a : entry.args) {
            if (std::holds_alternative<Quantifier>(a)) {
              throw ModelError(ErrorCode::SyntaxError, "facts must be ground: '" + cell.text + "'");
            }
            row.args.push_back(std::get<Element>(a));
          }
          if (entry.target.is_function()) {
            if (!entry.value || std::holds_alternative<Quantifier>(*entry.value)) {
              throw ModelError(ErrorCode::SyntaxError, "function facts need a concrete value: '" + cell.text + "'");
            }
            row.value = std::get<Element>(*entry.value);
          }
          facts.rows.push_back(std::move(row));
        });
      }
    }
    model_.facts.push_back(std::move(facts));
  }

  void read_decision(const RawTable& t) {
    DecisionTable table;
    table.name = *t.name;
    table.policy = *t.policy;
    table.span.value = t.span;
    if (t.grid.empty()) throw ModelError(ErrorCode::InvalidTable, "decision table '" + table.name + "' is empty");

    const auto& head = t.grid[0];
    if (!t.separators[0]) {
      throw ModelError(ErrorCode::SyntaxError,
                       "the column-header row of '" + table.name + "' needs '||' between inputs and outputs");
    }
    const std::size_t n_in = *t.separators[0];
    const std::size_t width = head.size();
    bool headers_ok = true;
    for (std::size_t c = 0; c < width; ++c) {
      const auto& cell = head[c];
      Side side = c < n_in ? Side::Input : Side::Output;
      if (cell.text.empty()) {
        if (side == Side::Output && !table.outputs.empty()) {
          ++table.outputs.back().width;  // merged with the header on its left
          continue;
        }
        error(ErrorCode::SyntaxError, "empty column header", cell.span);
        headers_ok = false;
        continue;
      }
      try {
        auto h = model_.glossary.resolve_header(cell.text, side);
        h.span.value = cell.span;
        (side == Side::Input ? table.inputs : table.outputs).push_back(std::move(h));
      } catch (const ModelError& e) {
        error(e.code(), e.what(), cell.span);
        headers_ok = false;
      }
    }
    if (table.outputs.empty() && headers_ok) {
      throw ModelError(ErrorCode::InvalidTable, "decision table '" + table.name + "' has no output column");
    }
    if (!headers_ok) return;

    std::vector<std::size_t> body;
    for (std::size_t r = 1; r < t.grid.size(); ++r) {
      if (t.grid[r].size() != width || t.separators[r] != t.separators[0]) {
        error(ErrorCode::SyntaxError, "row does not line up with the column headers of '" + table.name + "'",
              t.grid[r].empty() ? t.span : t.grid[r][0].span);
        continue;
      }
      body.push_back(r);
    }

    bool probabilistic = false;
    if (body.size() >= 2) {
      const auto& first = t.grid[body[0]];
      const auto& second = t.grid[body[1]];
      bool blank_inputs = std::all_of(first.begin(), first.begin() + n_in, [](const RawCell& c) { return c.text.empty(); });
      bool numeric = std::all_of(second.begin() + n_in, second.end(),
                                 [](const RawCell& c) { return parse_number(c.text).has_value(); });
      probabilistic = blank_inputs && numeric;
    }
    if (!probabilistic) {
      for (const auto& o : table.outputs) {
        if (o.width > 1) {
          throw ModelError(ErrorCode::InvalidTable, "merged output header '" + model_.glossary.render_header(o) +
                                                        "' requires an output-value row");
        }
      }
    }
    try {
      quantifier_types(table, model_.glossary);
    } catch (const ModelError& e) {
      error(e.code(), e.what(), t.span);
      return;
    }

    auto context = [&](std::size_t c, CellPosition pos) {
      const ColumnHeader* col = c < n_in ? &table.inputs[c] : &table.outputs[table.slot_owner(c - n_in)];
      return CellContext{&model_.glossary, col, pos, probabilistic};
    };
    std::size_t b = 0;
    if (probabilistic) {
      std::vector<CellExpr> values;
      const auto& row = t.grid[body[0]];
      for (std::size_t c = n_in; c < width; ++c) {
        guard(row[c].span, [&] { values.push_back(parse_cell(row[c].text, context(c, CellPosition::ValueRow))); });
      }
      table.value_row = std::move(values);
      b = 1;
    }
    for (; b < body.size(); ++b) {
      const auto& row = t.grid[body[b]];
      RuleRow rule;
      rule.span.value = row.empty() ? t.span : row.front().span;
      bool ok = true;
      for (std::size_t c = 0; c < width; ++c) {
        auto pos = c < n_in ? CellPosition::Input : CellPosition::Output;
        try {
          auto cell = parse_cell(row[c].text, context(c, pos));
          (pos == CellPosition::Input ? rule.inputs : rule.outputs).push_back(std::move(cell));
        } catch (const ModelError& e) {
          error(e.code(), e.what(), row[c].span);
          ok = false;
        }
      }
      if (ok) table.rows.push_back(std::move(rule));
    }
    // Quantifiers introduced by VarRef cells must agree with the headers.
    try {
      quantifier_types(table, model_.glossary);
    } catch (const ModelError& e) {
      error(e.code(), e.what(), t.span);
    }
    model_.tables.push_back(std::move(table));
  }

  const RawModel& raw_;
  std::vector<ParseError>& errors_;
  PdmnModel model_;
};

std::string default_model_name(std::string_view file) {
  if (file.empty() || file == "-" || file == "<stdin>") return "model";
  auto stem = std::filesystem::path(std::string(file)).stem().string();
  return stem.empty() ? "model" : stem;
}

}  // namespace

std::vector<PdmnModel> parse_workbooks(std::string_view source, std::string_view file) {
  std::vector<ParseError> errors;
  auto raw = LayoutReader(source, std::string(file)).run(errors);
  bool any_table = std::any_of(raw.begin(), raw.end(), [](const RawModel& m) { return !m.tables.empty(); });
  if (!any_table && errors.empty()) {
    SourceSpan at{std::string(file), 1, 1, 0};
    errors.push_back({ErrorCode::InvalidTable, "no glossary Type table found", at});
  }
  std::vector<PdmnModel> models;
  std::set<std::string> names;
  for (const auto& m : raw) {
    models.push_back(ModelBuilder(m, default_model_name(file), errors).run());
    if (!names.insert(models.back().name).second) {
      errors.push_back({ErrorCode::DuplicateDecl, "model '" + models.back().name + "' is defined twice", m.span});
    }
  }
  if (!errors.empty()) throw ParseErrors(std::move(errors));
  return models;
}

PdmnModel parse_workbook(std::string_view source, std::string_view file, std::optional<std::string_view> model_name) {
  auto models = parse_workbooks(source, file);
  if (!model_name) return std::move(models.front());
  for (auto& m : models) {
    if (m.name == *model_name) return std::move(m);
  }
  std::string known;
  for (const auto& m : models) known += (known.empty() ? "" : ", ") + m.name;
  throw ParseErrors({{ErrorCode::UnknownSymbol,
                      "no model named '" + std::string(*model_name) + "' (available: " + known + ")",
                      {std::string(file), 1, 1, 0}}});
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string row(const std::vector<std::string>& cells, std::optional<std::size_t> separator = std::nullopt) {
  std::string out = "|";
  for (std::size_t i = 0; i <= cells.size(); ++i) {
    if (separator && *separator == i) out += "|";
    if (i == cells.size()) break;
    out += " " + cells[i] + " |";
  }
  return out + "\n";
}

std::string query_text(const QueryEntry& q, const Glossary& g) {
  ColumnHeader h{q.target, q.args, Side::Input, 1, {}};
  std::string out = g.render_header(h);
  if (q.value) out += " = " + to_string(*q.value);
  return out;
}

}  // namespace

std::string render_workbook(const PdmnModel& model) {
  const Glossary& g = model.glossary;
  std::ostringstream out;
  out << "model \"" << model.name << "\"\n";

  if (!g.types().empty()) {
    out << "\ntype\n" << row({"Name", "Elements"});
    for (const auto& t : g.types()) {
      std::string elements;
      for (const auto& e : t.elements) elements += (elements.empty() ? "" : ", ") + e.text;
      out << row({t.name, elements});
    }
  }
  if (!g.predicates().empty()) {
    out << "\npredicate\n" << row({"Name"});
    for (const auto& p : g.predicates()) out << row({p.raw_name});
  }
  if (!g.functions().empty()) {
    out << "\nfunction\n" << row({"Name", "Type"});
    for (const auto& f : g.functions()) out << row({f.raw_name, g.types()[f.range_type].name});
  }

  for (const auto& t : model.tables) {
    out << "\ndecision \"" << t.name << "\" " << to_string(t.policy) << "\n";
    std::vector<std::string> head;
    for (const auto& h : t.inputs) head.push_back(g.render_header(h));
    for (const auto& h : t.outputs) {
      head.push_back(g.render_header(h));
      for (std::size_t i = 1; i < h.width; ++i) head.emplace_back();
    }
    out << row(head, t.inputs.size());
    if (t.value_row) {
      std::vector<std::string> cells(t.inputs.size());
      for (const auto& v : *t.value_row) cells.push_back(to_string(v));
      out << row(cells, t.inputs.size());
    }
    for (const auto& r : t.rows) {
      std::vector<std::string> cells;
      for (const auto& c : r.inputs) cells.push_back(to_string(c));
      for (const auto& c : r.outputs) cells.push_back(to_string(c));
      out << row(cells, t.inputs.size());
    }
  }

  for (const auto& f : model.facts) {
    out << "\nfact";
    if (!f.name.empty()) out << " \"" << f.name << "\"";
    out << "\n";
    for (const auto& r : f.rows) {
      QueryEntry q{r.target, {}, std::nullopt, {}};
      for (const auto& a : r.args) q.args.emplace_back(a);
      if (r.value) q.value = *r.value;
      out << row({query_text(q, g)});
    }
  }

  if (!model.queries.implicit_all) {
    out << "\nquery\n";
    for (const auto& q : model.queries.entries) out << row({query_text(q, g)});
  }
  return out.str();
}

}  // namespace pdmn
