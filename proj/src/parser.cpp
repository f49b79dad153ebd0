// Recursive-descent reader for the fully parenthesized prefix syntax:
//
//   formula := (sub C C) | (not F) | (and F F) | (or F F) | (box N F) | (dia N F)
//   concept := top | bot | (atom A) | (not C) | (and C C) | (or C C)
//            | (some r C) | (all r C) | (box N C) | (dia N C)

#include <cctype>
#include <charconv>
#include <optional>

#include "nnmdl/syntax.hpp"

namespace nnmdl {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  enum Kind { LParen, RParen, Word, End } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token t{Token::End, "", line_, column_};
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (c == '(' || c == ')') {
      t.kind = c == '(' ? Token::LParen : Token::RParen;
      t.text = std::string(1, c);
      advance();
      return t;
    }
    t.kind = Token::Word;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')') {
      t.text.push_back(text_[pos_]);
      advance();
    }
    return t;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  Formula formula() {
    if (tok_.kind == Token::Word && (tok_.text == "top" || tok_.text == "bot"))
      throw ParseError("'" + tok_.text + "' is a concept, not a formula", tok_.line, tok_.column);
    expect(Token::LParen, "expected '(' to open a formula");
    Token head = take_word("expected a formula keyword");
    const std::string& kw = head.text;
    std::optional<Formula> result;
    if (kw == "sub") {
      Concept l = concept_expr();
      Concept r = concept_expr();
      result = Formula::inclusion(l, r);
    } else if (kw == "not") {
      result = Formula::negation(formula());
    } else if (kw == "and" || kw == "or") {
      Formula l = formula();
      Formula r = formula();
      result = kw == "and" ? Formula::conj(l, r) : Formula::disj(l, r);
    } else if (kw == "box" || kw == "dia") {
      int i = modality();
      Formula f = formula();
      result = kw == "box" ? Formula::box(i, f) : Formula::dia(i, f);
    } else if (is_concept_only(kw)) {
      throw ParseError("'" + kw + "' builds a concept where a formula is expected", head.line, head.column);
    } else {
      throw ParseError("unknown keyword '" + kw + "'", head.line, head.column);
    }
    expect(Token::RParen, "expected ')'");
    return *result;
  }

  Concept concept_expr() {
    if (tok_.kind == Token::Word) {
      Token w = tok_;
      shift();
      if (w.text == "top") return Concept::top();
      if (w.text == "bot") return Concept::bot();
      throw ParseError("expected a concept, got '" + w.text + "'", w.line, w.column);
    }
    expect(Token::LParen, "expected a concept");
    Token head = take_word("expected a concept keyword");
    const std::string& kw = head.text;
    std::optional<Concept> result;
    if (kw == "atom") {
      result = Concept::atom(identifier());
    } else if (kw == "not") {
      result = Concept::negation(concept_expr());
    } else if (kw == "and" || kw == "or") {
      Concept l = concept_expr();
      Concept r = concept_expr();
      result = kw == "and" ? Concept::conj(l, r) : Concept::disj(l, r);
    } else if (kw == "some" || kw == "all") {
      std::string role = identifier();
      Concept c = concept_expr();
      result = kw == "some" ? Concept::exists(role, c) : Concept::forall(role, c);
    } else if (kw == "box" || kw == "dia") {
      int i = modality();
      Concept c = concept_expr();
      result = kw == "box" ? Concept::box(i, c) : Concept::dia(i, c);
    } else if (kw == "sub") {
      throw ParseError("'sub' builds a formula where a concept is expected", head.line, head.column);
    } else {
      throw ParseError("unknown keyword '" + kw + "'", head.line, head.column);
    }
    expect(Token::RParen, "expected ')'");
    return *result;
  }

  void finish() {
    if (tok_.kind != Token::End) throw ParseError("trailing input '" + tok_.text + "'", tok_.line, tok_.column);
  }

 private:
  static bool is_concept_only(const std::string& kw) {
    return kw == "atom" || kw == "some" || kw == "all" || kw == "top" || kw == "bot";
  }

  void shift() { tok_ = lexer_.next(); }

  void expect(Token::Kind k, const char* msg) {
    if (tok_.kind != k) {
      std::string got = tok_.kind == Token::End ? "end of input" : "'" + tok_.text + "'";
      throw ParseError(std::string(msg) + ", got " + got, tok_.line, tok_.column);
    }
    shift();
  }

  Token take_word(const char* msg) {
    if (tok_.kind != Token::Word) {
      std::string got = tok_.kind == Token::End ? "end of input" : "'" + tok_.text + "'";
      throw ParseError(std::string(msg) + ", got " + got, tok_.line, tok_.column);
    }
    Token t = tok_;
    shift();
    return t;
  }

  std::string identifier() {
    Token t = take_word("expected an identifier");
    bool ok = std::isalpha(static_cast<unsigned char>(t.text[0])) != 0;
    for (char c : t.text) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_');
    if (!ok) throw ParseError("invalid identifier '" + t.text + "'", t.line, t.column);
    return t.text;
  }

  int modality() {
    Token t = take_word("expected a modality index");
    int value = 0;
    auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || end != t.text.data() + t.text.size())
      throw ParseError("invalid modality index '" + t.text + "'", t.line, t.column);
    if (value < 1) throw ParseError("modality index must be >= 1", t.line, t.column);
    return value;
  }

  Lexer lexer_;
  Token tok_{Token::End, "", 1, 1};
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(text);
  Formula f = p.formula();
  p.finish();
  return f;
}

Concept parse_concept(std::string_view text) {
  Parser p(text);
  Concept c = p.concept_expr();
  p.finish();
  return c;
}

}  // namespace nnmdl
