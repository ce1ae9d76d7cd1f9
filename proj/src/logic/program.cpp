#include "pdmn/logic.hpp"

#include <cctype>
#include <sstream>

namespace pdmn::logic {

bool Atom::is_ground() const {
  for (const auto& t : args) {
    if (t.is_variable()) return false;
  }
  return true;
}

std::string Atom::signature() const { return predicate + "/" + std::to_string(args.size()); }

std::string Atom::str() const {
  if (args.empty()) return predicate;
  std::string out = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i].name;
  }
  return out + ")";
}

Rational AnnotatedDisjunction::total() const {
  Rational sum = 0;
  for (const auto& a : alternatives) sum += a.probability.value();
  return sum;
}

std::string to_string(const Literal& literal) {
  return literal.negated ? "not(" + literal.atom.str() + ")" : literal.atom.str();
}

namespace {

std::string body_suffix(const std::vector<Literal>& body) {
  if (body.empty()) return "";
  std::string out = " :- ";
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += ", ";
    out += to_string(body[i]);
  }
  return out;
}

}  // namespace

std::string to_string(const Statement& statement) {
  if (const auto* c = std::get_if<Clause>(&statement)) {
    std::string out = c->probability ? c->probability->str() + "::" : "";
    return out + c->head.str() + body_suffix(c->body) + ".";
  }
  const auto& ad = std::get<AnnotatedDisjunction>(statement);
  std::string out;
  for (std::size_t i = 0; i < ad.alternatives.size(); ++i) {
    if (i) out += "; ";
    out += ad.alternatives[i].probability.str() + "::" + ad.alternatives[i].atom.str();
  }
  return out + body_suffix(ad.body) + ".";
}

UnsafeVariable::UnsafeVariable(std::string statement, std::string variable)
    : EngineError("unsafe variable " + variable + " in '" + statement +
                  "': it must occur in a positive body literal"),
      statement_(std::move(statement)),
      variable_(std::move(variable)) {}

namespace {

std::string describe_cycle(const std::vector<std::string>& cycle) {
  std::string out = "program is not stratified: negation through the cycle ";
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) out += " -> ";
    out += cycle[i];
  }
  return out;
}

}  // namespace

NotStratified::NotStratified(std::vector<std::string> cycle)
    : EngineError(describe_cycle(cycle)), cycle_(std::move(cycle)) {}

ChoiceSpaceTooLarge::ChoiceSpaceTooLarge(std::size_t choice_points, std::size_t cap)
    : EngineError(std::to_string(choice_points) + " independent choice points exceed the cap of " +
                  std::to_string(cap)),
      choice_points_(choice_points),
      cap_(cap) {}

ProgramSyntaxError::ProgramSyntaxError(std::size_t line, std::size_t column,
                                       const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Name, Variable, Number, LParen, RParen, Comma, Semicolon, Annot, Neck, Dot, Slash, NotOp, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  Token next() {
    std::size_t line = line_, col = col_;
    char c = peek();
    auto single = [&](Tok kind, std::size_t len) {
      std::string text(src_.substr(pos_, len));
      for (std::size_t i = 0; i < len; ++i) advance();
      return Token{kind, text, line, col};
    };
    auto is_digit = [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; };
    auto is_word = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) != 0 || ch == '_'; };

    if (is_digit(c) || (c == '-' && is_digit(peek(1)))) {
      std::size_t start = pos_;
      advance();
      while (is_digit(peek())) advance();
      if (peek() == '.' && is_digit(peek(1))) {
        advance();
        while (is_digit(peek())) advance();
      }
      return {Tok::Number, std::string(src_.substr(start, pos_ - start)), line, col};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (is_word(peek())) advance();
      std::string text(src_.substr(start, pos_ - start));
      bool var = std::isupper(static_cast<unsigned char>(text[0])) || text[0] == '_';
      return {var ? Tok::Variable : Tok::Name, text, line, col};
    }
    switch (c) {
      case '(': return single(Tok::LParen, 1);
      case ')': return single(Tok::RParen, 1);
      case ',': return single(Tok::Comma, 1);
      case ';': return single(Tok::Semicolon, 1);
      case '.': return single(Tok::Dot, 1);
      case '/': return single(Tok::Slash, 1);
      case ':':
        if (peek(1) == ':') return single(Tok::Annot, 2);
        if (peek(1) == '-') return single(Tok::Neck, 2);
        break;
      case '\\':
        if (peek(1) == '+') return single(Tok::NotOp, 2);
        break;
      default:
        break;
    }
    throw ProgramSyntaxError(line, col, std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  LogicProgram run() {
    LogicProgram program;
    while (peek().kind != Tok::End) statement(program);
    return program;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

  const Token& take() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ProgramSyntaxError(at.line, at.column, message);
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      fail(peek(), std::string("expected ") + what +
                       (peek().kind == Tok::End ? " before end of input" : ", found '" + peek().text + "'"));
    }
    return take();
  }

  void statement(LogicProgram& program) {
    if (peek().kind == Tok::Name && peek().text == "query" && peek(1).kind == Tok::LParen) {
      take();
      take();
      program.queries.push_back(atom());
      expect(Tok::RParen, "')'");
      expect(Tok::Dot, "'.'");
      return;
    }

    struct Head {
      std::optional<Probability> probability;
      Atom atom;
      const Token* at;
    };
    std::vector<Head> heads;
    do {
      if (!heads.empty()) take();  // ';'
      Head h{std::nullopt, {}, &peek()};
      if (peek().kind == Tok::Number) h.probability = probability();
      h.atom = atom();
      heads.push_back(std::move(h));
    } while (peek().kind == Tok::Semicolon);

    std::vector<Literal> body;
    if (peek().kind == Tok::Neck) {
      take();
      do {
        if (!body.empty()) take();  // ','
        body.push_back(literal());
      } while (peek().kind == Tok::Comma);
    }
    expect(Tok::Dot, "'.'");

    if (heads.size() == 1) {
      program.statements.emplace_back(Clause{std::move(heads[0].atom), std::move(body), heads[0].probability});
      return;
    }
    AnnotatedDisjunction ad;
    for (auto& h : heads) {
      if (!h.probability) fail(*h.at, "every alternative of an annotated disjunction needs a probability");
      ad.alternatives.push_back({*h.probability, std::move(h.atom)});
    }
    if (ad.total() > 1) fail(*heads.front().at, "annotated disjunction probabilities sum to more than 1");
    ad.body = std::move(body);
    program.statements.emplace_back(std::move(ad));
  }

  Probability probability() {
    const Token& first = take();
    std::string text = first.text;
    if (peek().kind == Tok::Slash) {
      take();
      text += "/" + expect(Tok::Number, "denominator").text;
    }
    expect(Tok::Annot, "'::'");
    auto p = Probability::parse(text);
    if (!p) fail(first, "invalid probability '" + text + "'");
    return *p;
  }

  Literal literal() {
    if (peek().kind == Tok::NotOp) {
      take();
      return {atom(), true};
    }
    if (peek().kind == Tok::Name && peek().text == "not" && peek(1).kind == Tok::LParen) {
      take();
      take();
      Literal lit{atom(), true};
      expect(Tok::RParen, "')'");
      return lit;
    }
    return {atom(), false};
  }

  Atom atom() {
    const Token& name = expect(Tok::Name, "predicate name");
    if (name.text == "not" || name.text == "query") fail(name, "'" + name.text + "' is reserved");
    Atom a{name.text};
    if (peek().kind == Tok::LParen) {
      take();
      do {
        if (!a.args.empty()) take();  // ','
        const Token& t = take();
        switch (t.kind) {
          case Tok::Name:
          case Tok::Number:
            a.args.push_back(Term::constant(t.text));
            break;
          case Tok::Variable:
            a.args.push_back(Term::variable(t.text));
            break;
          default:
            fail(t, "expected a constant or variable");
        }
      } while (peek().kind == Tok::Comma);
      expect(Tok::RParen, "')'");
    }
    return a;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

LogicProgram parse_program(std::string_view text) { return Parser(Lexer(text).run()).run(); }

}  // namespace pdmn::logic
