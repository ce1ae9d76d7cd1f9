#include "pdmn/cli.hpp"

#include "pdmn/emit.hpp"
#include "pdmn/workbook.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pdmn {

namespace {

using json = nlohmann::ordered_json;

enum Exit { Ok = 0, Invalid = 1, Unparsable = 2, Engine = 3 };

struct Options {
  std::string command;
  std::string file;
  std::optional<std::string> model;
  std::vector<std::string> queries;
  std::optional<std::size_t> max_choice_points;
  std::optional<unsigned> digits;
  unsigned threads = 1;
  bool json = false;
};

std::string format(const Diagnostic& d) {
  std::string out = d.span.str() + ": " + (d.is_error() ? "error" : "warning") + ": " + d.message + " [" + d.code + "]";
  if (!d.table.empty()) {
    out += " (table '" + d.table + "'";
    if (d.row) out += ", row " + std::to_string(*d.row);
    out += ")";
  }
  return out;
}

json to_json(const Diagnostic& d) {
  json j{{"severity", d.is_error() ? "error" : "warning"},
         {"code", d.code},
         {"message", d.message},
         {"file", d.span.file},
         {"line", d.span.line},
         {"column", d.span.column},
         {"table", d.table}};
  j["row"] = d.row ? json(*d.row) : json(nullptr);
  return j;
}

json to_json(const ParseError& e) {
  return {{"severity", "error"},      {"code", std::string(to_string(e.code))},
          {"message", e.message},     {"file", e.span.file},
          {"line", e.span.line},      {"column", e.span.column},
          {"table", ""},              {"row", nullptr}};
}

std::size_t default_cap() {
  if (const char* env = std::getenv("PDMN_MAX_CHOICE_POINTS")) {
    try {
      return std::stoul(env);
    } catch (const std::exception&) {
    }
  }
  return logic::QueryOptions{}.max_choice_points;
}

class Command {
 public:
  Command(Options options, std::istream& in, std::ostream& out, std::ostream& err)
      : o_(std::move(options)), in_(in), out_(out), err_(err) {}

  int run() {
    std::string source;
    if (!read_source(source)) return Unparsable;

    PdmnModel model;
    try {
      model = parse_workbook(source, o_.file == "-" ? "<stdin>" : o_.file, o_.model);
    } catch (const ParseErrors& e) {
      return report_parse_errors(e.errors());
    }
    model_name_ = model.name;

    try {
      if (!o_.queries.empty()) {
        model.queries = QuerySet{};
        for (const auto& q : o_.queries) model.queries.entries.push_back(parse_query_cell(q, model.glossary));
      }
    } catch (const ModelError& e) {
      return report_parse_errors({{e.code(), std::string(e.what()) + " (in --query)", {"<command line>", 1, 1, 0}}});
    }

    auto diagnostics = validate_model(model);
    if (o_.command == "check") return check(diagnostics);
    for (const auto& d : diagnostics) err_ << format(d) << "\n";
    if (has_errors(diagnostics)) return Invalid;

    TranslationOutput translation;
    try {
      translation = translate_model(model);
    } catch (const ModelError& e) {
      err_ << "error: " << e.what() << " [" << to_string(e.code()) << "]\n";
      return Invalid;
    }
    if (o_.command == "emit") {
      out_ << emit_program(translation);
      return Ok;
    }
    return evaluate(translation, diagnostics);
  }

 private:
  bool read_source(std::string& source) {
    std::stringstream buffer;
    if (o_.file == "-") {
      buffer << in_.rdbuf();
    } else {
      std::ifstream file(o_.file, std::ios::binary);
      if (!file) {
        err_ << "error: cannot open '" << o_.file << "'\n";
        return false;
      }
      buffer << file.rdbuf();
    }
    source = buffer.str();
    return true;
  }

  int report_parse_errors(const std::vector<ParseError>& errors) {
    if (o_.json) {
      json diagnostics = json::array();
      for (const auto& e : errors) diagnostics.push_back(to_json(e));
      out_ << json{{"model", model_name_}, {"results", json::array()}, {"diagnostics", diagnostics}}.dump(2) << "\n";
    }
    for (const auto& e : errors) err_ << e.str() << "\n";
    return Unparsable;
  }

  int check(const std::vector<Diagnostic>& diagnostics) {
    if (o_.json) {
      json list = json::array();
      for (const auto& d : diagnostics) list.push_back(to_json(d));
      out_ << json{{"model", model_name_}, {"results", json::array()}, {"diagnostics", list}}.dump(2) << "\n";
    } else {
      for (const auto& d : diagnostics) out_ << format(d) << "\n";
      auto errors = std::count_if(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) { return d.is_error(); });
      out_ << model_name_ << ": " << errors << " error(s), " << diagnostics.size() - errors << " warning(s)\n";
    }
    return has_errors(diagnostics) ? Invalid : Ok;
  }

  std::string decimal(const Rational& p) const {
    if (o_.digits) return to_rounded_decimal(p, *o_.digits);
    if (auto exact = to_exact_decimal(p)) return *exact;
    return to_fraction(p);
  }

  int evaluate(const TranslationOutput& translation, const std::vector<Diagnostic>& diagnostics) {
    logic::QueryOptions options;
    options.max_choice_points = o_.max_choice_points.value_or(default_cap());
    options.threads = std::max(1u, o_.threads);
    std::vector<logic::QueryResult> results;
    try {
      results = logic::query_exact(translation.program, options);
    } catch (const logic::EngineError& e) {
      err_ << "error: " << e.what() << "\n";
      return Engine;
    }
    if (o_.json) {
      json list = json::array();
      for (const auto& r : results) {
        std::string dec = o_.digits ? to_rounded_decimal(r.probability, *o_.digits)
                                    : to_exact_decimal(r.probability).value_or(to_rounded_decimal(r.probability, 17));
        list.push_back({{"query", r.query.str()},
                        {"probability", {{"decimal", dec}, {"fraction", to_fraction(r.probability)}}}});
      }
      json diags = json::array();
      for (const auto& d : diagnostics) diags.push_back(to_json(d));
      out_ << json{{"model", model_name_}, {"results", list}, {"diagnostics", diags}}.dump(2) << "\n";
    } else {
      for (const auto& r : results) out_ << r.query.str() << ": " << decimal(r.probability) << "\n";
    }
    return Ok;
  }

  Options o_;
  std::string model_name_;
  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compile pDMN workbooks to ProbLog and compute exact query probabilities", "pdmn"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "Workbook path, or - for stdin")->required();
    sub->add_option("--model", o.model, "Model to use when the file holds several");
    sub->add_option("--query", o.queries, "Query cell overriding the Query table (repeatable)");
  };
  auto* check = app.add_subcommand("check", "Parse and validate, printing diagnostics");
  add_common(check);
  check->add_flag("--json", o.json, "Machine-readable output");
  auto* emit = app.add_subcommand("emit", "Print the ProbLog translation");
  add_common(emit);
  auto* run = app.add_subcommand("run", "Evaluate the queries exactly");
  add_common(run);
  run->add_flag("--json", o.json, "Machine-readable output");
  run->add_option("--max-choice-points", o.max_choice_points,
                  "Enumeration cap (default $PDMN_MAX_CHOICE_POINTS or 30)");
  run->add_option("--digits", o.digits, "Round probabilities to this many decimals");
  run->add_option("--threads", o.threads, "Worker threads for enumeration")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? Ok : Unparsable;
  }
  o.command = app.get_subcommands().front()->get_name();
  return Command(std::move(o), in, out, err).run();
}

}  // namespace pdmn
