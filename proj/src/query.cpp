#include "geooutage/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <limits>
#include <set>
#include <unordered_map>

#include "geooutage/datetime.hpp"
#include "geooutage/turtle.hpp"

namespace geooutage {

namespace {

constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

const std::string kXsdString = std::string(kXsd) + "string";
const std::string kXsdInteger = std::string(kXsd) + "integer";
const std::string kXsdDecimal = std::string(kXsd) + "decimal";
const std::string kXsdDouble = std::string(kXsd) + "double";
const std::string kXsdDateTime = std::string(kXsd) + "dateTime";
const std::string kXsdDate = std::string(kXsd) + "date";

bool name_start_char(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool name_char(char c) { return name_start_char(c) || std::isdigit(static_cast<unsigned char>(c)); }

bool local_mid_char(char c) {
  return name_char(c) || c == '-' || c == '.';
}

enum class Tok {
  Word,     // bare name: keywords and 'a'
  Var,      // ?name, text holds the name
  Pname,    // prefix in .prefix, local in .text
  Iriref,
  String,   // decoded value
  Integer,
  Decimal,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Dot,
  Bang,
  AndAnd,
  OrOr,
  CaretCaret,
  Less,
  LessEq,
  Greater,
  GreaterEq,
  Equal,
  NotEqual,
  End,
};

struct Token {
  Tok type = Tok::End;
  std::string text;
  std::string prefix;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view input) : input_(input) {}

  Token next() {
    skip_trivia();
    Token t;
    t.line = line_;
    t.column = column_;
    if (at_end()) {
      return t;
    }
    const char c = peek();
    switch (c) {
      case '{': advance(); t.type = Tok::LBrace; return t;
      case '}': advance(); t.type = Tok::RBrace; return t;
      case '(': advance(); t.type = Tok::LParen; return t;
      case ')': advance(); t.type = Tok::RParen; return t;
      case '.': advance(); t.type = Tok::Dot; return t;
      default: break;
    }
    if (c == '?') {
      return lex_variable(t);
    }
    if (c == '"') {
      return lex_string(t);
    }
    if (c == '<') {
      return lex_less_or_iriref(t);
    }
    if (c == '>') {
      advance();
      t.type = Tok::Greater;
      if (peek() == '=') {
        advance();
        t.type = Tok::GreaterEq;
      }
      return t;
    }
    if (c == '=') {
      advance();
      t.type = Tok::Equal;
      return t;
    }
    if (c == '!') {
      advance();
      t.type = Tok::Bang;
      if (peek() == '=') {
        advance();
        t.type = Tok::NotEqual;
      }
      return t;
    }
    if (c == '&') {
      advance();
      if (peek() != '&') {
        fail(t, "expected '&&'");
      }
      advance();
      t.type = Tok::AndAnd;
      return t;
    }
    if (c == '|') {
      advance();
      if (peek() != '|') {
        fail(t, "expected '||'");
      }
      advance();
      t.type = Tok::OrOr;
      return t;
    }
    if (c == '^') {
      advance();
      if (peek() != '^') {
        fail(t, "expected '^^'");
      }
      advance();
      t.type = Tok::CaretCaret;
      return t;
    }
    if (c == '+' || c == '-' || (c >= '0' && c <= '9')) {
      return lex_number(t);
    }
    return lex_name(t);
  }

 private:
  bool at_end() const { return pos_ >= input_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < input_.size() ? input_[pos_ + ahead] : '\0';
  }
  void advance() {
    if (input_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ParseError(message, at.line, at.column);
  }
  [[noreturn]] void fail_here(const std::string& message) const {
    throw ParseError(message, line_, column_);
  }

  void skip_trivia() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') {
          advance();
        }
      } else {
        return;
      }
    }
  }

  Token lex_variable(Token t) {
    advance();  // '?'
    if (at_end() || !name_start_char(peek())) {
      fail(t, "expected variable name after '?'");
    }
    while (!at_end() && name_char(peek())) {
      t.text += peek();
      advance();
    }
    t.type = Tok::Var;
    return t;
  }

  // '<' opens an IRI when a '>' follows before any character that could not
  // occur inside one; otherwise it is the less-than operator.
  Token lex_less_or_iriref(Token t) {
    bool iriref = false;
    for (std::size_t ahead = 1; pos_ + ahead < input_.size(); ++ahead) {
      const char c = input_[pos_ + ahead];
      if (c == '>') {
        iriref = true;
        break;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '<' || c == '"' || c == '{' ||
          c == '}' || c == '|' || c == '^' || c == '`' || c == '\\') {
        break;
      }
    }
    advance();  // '<'
    if (!iriref) {
      t.type = Tok::Less;
      if (peek() == '=') {
        advance();
        t.type = Tok::LessEq;
      }
      return t;
    }
    while (peek() != '>') {
      t.text += peek();
      advance();
    }
    advance();  // '>'
    t.type = Tok::Iriref;
    return t;
  }

  // Named escapes only; the Turtle loader is the place where \u escapes
  // matter, analysis queries never need them.
  Token lex_string(Token t) {
    advance();  // '"'
    while (true) {
      if (at_end()) {
        fail(t, "unterminated string literal");
      }
      const char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\n' || c == '\r') {
        fail_here("newline inside string literal");
      }
      if (c == '\\') {
        advance();
        if (at_end()) {
          fail_here("dangling escape at end of input");
        }
        const char e = peek();
        advance();
        switch (e) {
          case 't': t.text += '\t'; break;
          case 'b': t.text += '\b'; break;
          case 'n': t.text += '\n'; break;
          case 'r': t.text += '\r'; break;
          case 'f': t.text += '\f'; break;
          case '"': t.text += '"'; break;
          case '\'': t.text += '\''; break;
          case '\\': t.text += '\\'; break;
          default: fail_here("unknown string escape");
        }
      } else {
        t.text += c;
        advance();
      }
    }
    t.type = Tok::String;
    return t;
  }

  Token lex_number(Token t) {
    if (peek() == '+' || peek() == '-') {
      t.text += peek();
      advance();
    }
    if (!(peek() >= '0' && peek() <= '9')) {
      fail(t, "expected digits in numeric literal");
    }
    while (peek() >= '0' && peek() <= '9') {
      t.text += peek();
      advance();
    }
    if (peek() == '.' && peek(1) >= '0' && peek(1) <= '9') {
      t.text += '.';
      advance();
      while (peek() >= '0' && peek() <= '9') {
        t.text += peek();
        advance();
      }
      t.type = Tok::Decimal;
    } else {
      t.type = Tok::Integer;
    }
    return t;
  }

  // Bare word (keyword or 'a'), or prefixed name when a ':' follows.
  Token lex_name(Token t) {
    std::string head;
    while (!at_end() && name_char(peek())) {
      head += peek();
      advance();
    }
    if (at_end() || peek() != ':') {
      if (head.empty()) {
        fail(t, "unexpected character");
      }
      t.type = Tok::Word;
      t.text = std::move(head);
      return t;
    }
    advance();  // ':'
    t.prefix = std::move(head);
    // Local part mirrors the Turtle rule: a '.' is consumed only when
    // another local character follows.
    while (!at_end()) {
      const char c = peek();
      if (c == '.' && !local_mid_char(peek(1))) {
        break;
      }
      if (!local_mid_char(c)) {
        break;
      }
      t.text += c;
      advance();
    }
    if (!t.text.empty() && t.text.back() == '.') {
      fail_here("prefixed name may not end with '.'");
    }
    t.type = Tok::Pname;
    return t;
  }

  std::string_view input_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

bool keyword_is(const Token& t, std::string_view keyword) {
  if (t.type != Tok::Word || t.text.size() != keyword.size()) {
    return false;
  }
  for (std::size_t i = 0; i < keyword.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(t.text[i])) != keyword[i]) {
      return false;
    }
  }
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view input) : lexer_(input) { shift(); }

  Query run() {
    while (keyword_is(current_, "PREFIX")) {
      parse_prefix();
    }
    parse_select();
    parse_where();
    parse_modifiers();
    if (current_.type != Tok::End) {
      fail(current_, "unexpected input after query");
    }
    validate();
    return std::move(query_);
  }

 private:
  void shift() { current_ = lexer_.next(); }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ParseError(message, at.line, at.column);
  }

  void expect(Tok type, const char* what) {
    if (current_.type != type) {
      fail(current_, std::string("expected ") + what);
    }
    shift();
  }

  void parse_prefix() {
    shift();  // PREFIX
    if (current_.type != Tok::Pname || !current_.text.empty()) {
      fail(current_, "expected 'name:' after PREFIX");
    }
    const std::string name = current_.prefix;
    shift();
    if (current_.type != Tok::Iriref) {
      fail(current_, "expected <iri> in PREFIX declaration");
    }
    try {
      prefixes_.add(name, current_.text);
    } catch (const DataError& e) {
      fail(current_, e.what());
    }
    shift();
  }

  void parse_select() {
    if (!keyword_is(current_, "SELECT")) {
      fail(current_, "expected SELECT");
    }
    shift();
    if (keyword_is(current_, "DISTINCT")) {
      query_.distinct = true;
      shift();
    }
    while (current_.type == Tok::Var) {
      query_.select_vars.push_back(current_.text);
      shift();
    }
    if (query_.select_vars.empty()) {
      fail(current_, "expected at least one ?variable after SELECT");
    }
  }

  void parse_where() {
    if (!keyword_is(current_, "WHERE")) {
      fail(current_, "expected WHERE");
    }
    shift();
    expect(Tok::LBrace, "'{'");
    while (current_.type != Tok::RBrace) {
      if (current_.type == Tok::End) {
        fail(current_, "unterminated graph pattern, expected '}'");
      }
      if (keyword_is(current_, "FILTER")) {
        parse_filter();
      } else {
        parse_triple_pattern();
      }
    }
    shift();  // '}'
  }

  void parse_triple_pattern() {
    TriplePattern pattern;
    pattern.subject = parse_slot(Position::Subject);
    pattern.predicate = parse_slot(Position::Predicate);
    pattern.object = parse_slot(Position::Object);
    query_.patterns.push_back(std::move(pattern));
    if (current_.type == Tok::Dot) {
      shift();
    } else if (current_.type != Tok::RBrace) {
      fail(current_, "expected '.' after triple pattern");
    }
  }

  enum class Position { Subject, Predicate, Object };

  PatternSlot parse_slot(Position position) {
    const Token at = current_;
    if (at.type == Tok::Var) {
      shift();
      return PatternSlot::variable(at.text);
    }
    Term term = parse_term(position);
    if (position != Position::Object && !term.is_iri()) {
      fail(at, "literals may only appear in object position");
    }
    return PatternSlot::constant(std::move(term));
  }

  Term parse_term(Position position) {
    const Token at = current_;
    switch (at.type) {
      case Tok::Iriref:
        shift();
        return Term::iri(at.text);
      case Tok::Pname:
        shift();
        return Term::iri(expand(at));
      case Tok::Word:
        if (at.text == "a" && position == Position::Predicate) {
          shift();
          return Term::iri(std::string(kRdfType));
        }
        fail(at, "unexpected '" + at.text + "' in triple pattern");
      case Tok::String:
      case Tok::Integer:
      case Tok::Decimal:
        return parse_literal();
      default:
        fail(at, "expected a term or ?variable");
    }
  }

  Term parse_literal() {
    const Token at = current_;
    if (at.type == Tok::Integer) {
      shift();
      return Term::typed(at.text, kXsdInteger);
    }
    if (at.type == Tok::Decimal) {
      shift();
      return Term::typed(at.text, kXsdDecimal);
    }
    if (at.type != Tok::String) {
      fail(at, "expected a literal");
    }
    shift();
    if (current_.type != Tok::CaretCaret) {
      return Term::plain(at.text);
    }
    shift();  // '^^'
    const Token dt = current_;
    if (dt.type == Tok::Iriref) {
      shift();
      return Term::typed(at.text, dt.text);
    }
    if (dt.type == Tok::Pname) {
      shift();
      return Term::typed(at.text, expand(dt));
    }
    fail(dt, "expected datatype IRI after '^^'");
  }

  std::string expand(const Token& pname) {
    const std::string* base = prefixes_.expansion(pname.prefix);
    if (base == nullptr) {
      fail(pname, "unknown prefix '" + pname.prefix + ":'");
    }
    return *base + pname.text;
  }

  void parse_filter() {
    shift();  // FILTER
    expect(Tok::LParen, "'(' after FILTER");
    query_.filters.push_back(parse_or());
    expect(Tok::RParen, "')' closing FILTER");
  }

  FilterExpr parse_or() {
    FilterExpr first = parse_and();
    if (current_.type != Tok::OrOr) {
      return first;
    }
    FilterExpr node;
    node.kind = FilterExpr::Kind::Or;
    node.children.push_back(std::move(first));
    while (current_.type == Tok::OrOr) {
      shift();
      node.children.push_back(parse_and());
    }
    return node;
  }

  FilterExpr parse_and() {
    FilterExpr first = parse_unary();
    if (current_.type != Tok::AndAnd) {
      return first;
    }
    FilterExpr node;
    node.kind = FilterExpr::Kind::And;
    node.children.push_back(std::move(first));
    while (current_.type == Tok::AndAnd) {
      shift();
      node.children.push_back(parse_unary());
    }
    return node;
  }

  FilterExpr parse_unary() {
    if (current_.type == Tok::Bang) {
      shift();
      FilterExpr node;
      node.kind = FilterExpr::Kind::Not;
      node.children.push_back(parse_unary());
      return node;
    }
    if (current_.type == Tok::LParen) {
      shift();
      FilterExpr inner = parse_or();
      expect(Tok::RParen, "')'");
      return inner;
    }
    return parse_comparison();
  }

  FilterExpr parse_comparison() {
    FilterExpr node;
    node.kind = FilterExpr::Kind::Compare;
    Comparison& cmp = node.comparison;
    const Token at = current_;
    bool var_first = true;
    if (at.type == Tok::Var) {
      cmp.var = at.text;
      shift();
    } else {
      cmp.literal = parse_literal();
      var_first = false;
    }
    cmp.op = parse_compare_op();
    if (var_first) {
      cmp.literal = parse_literal();
    } else {
      if (current_.type != Tok::Var) {
        fail(current_, "comparison needs a ?variable on one side");
      }
      cmp.var = current_.text;
      shift();
      cmp.op = flip(cmp.op);
    }
    return node;
  }

  CompareOp parse_compare_op() {
    CompareOp op;
    switch (current_.type) {
      case Tok::Less: op = CompareOp::Less; break;
      case Tok::LessEq: op = CompareOp::LessEq; break;
      case Tok::Greater: op = CompareOp::Greater; break;
      case Tok::GreaterEq: op = CompareOp::GreaterEq; break;
      case Tok::Equal: op = CompareOp::Equal; break;
      case Tok::NotEqual: op = CompareOp::NotEqual; break;
      default: fail(current_, "expected a comparison operator");
    }
    shift();
    return op;
  }

  static CompareOp flip(CompareOp op) {
    switch (op) {
      case CompareOp::Less: return CompareOp::Greater;
      case CompareOp::LessEq: return CompareOp::GreaterEq;
      case CompareOp::Greater: return CompareOp::Less;
      case CompareOp::GreaterEq: return CompareOp::LessEq;
      default: return op;
    }
  }

  void parse_modifiers() {
    if (keyword_is(current_, "ORDER")) {
      shift();
      if (!keyword_is(current_, "BY")) {
        fail(current_, "expected BY after ORDER");
      }
      shift();
      OrderBy order;
      if (keyword_is(current_, "ASC") || keyword_is(current_, "DESC")) {
        order.descending = keyword_is(current_, "DESC");
        shift();
        expect(Tok::LParen, "'('");
        if (current_.type != Tok::Var) {
          fail(current_, "expected ?variable in ORDER BY");
        }
        order.var = current_.text;
        shift();
        expect(Tok::RParen, "')'");
      } else if (current_.type == Tok::Var) {
        order.var = current_.text;
        shift();
      } else {
        fail(current_, "expected ?variable or ASC/DESC in ORDER BY");
      }
      query_.order_by = std::move(order);
    }
    if (keyword_is(current_, "LIMIT")) {
      shift();
      if (current_.type != Tok::Integer || current_.text.front() == '-' ||
          current_.text.front() == '+') {
        fail(current_, "expected a non-negative integer after LIMIT");
      }
      std::size_t n = 0;
      const auto [ptr, ec] =
          std::from_chars(current_.text.data(), current_.text.data() + current_.text.size(), n);
      if (ec != std::errc() || ptr != current_.text.data() + current_.text.size()) {
        fail(current_, "LIMIT value out of range");
      }
      query_.limit = n;
      shift();
    }
  }

  void validate() const {
    std::set<std::string> bgp_vars;
    for (const TriplePattern& p : query_.patterns) {
      for (const PatternSlot* slot : {&p.subject, &p.predicate, &p.object}) {
        if (slot->is_variable()) {
          bgp_vars.insert(slot->var);
        }
      }
    }
    const auto require = [&bgp_vars](const std::string& var) {
      if (!bgp_vars.contains(var)) {
        throw SemanticError("variable '?" + var + "' does not occur in the graph pattern");
      }
    };
    for (const std::string& var : query_.select_vars) {
      require(var);
    }
    if (query_.order_by.has_value()) {
      require(query_.order_by->var);
    }
    for (const FilterExpr& f : query_.filters) {
      require_filter_vars(f, require);
    }
  }

  template <typename Fn>
  static void require_filter_vars(const FilterExpr& expr, const Fn& require) {
    if (expr.kind == FilterExpr::Kind::Compare) {
      require(expr.comparison.var);
      return;
    }
    for (const FilterExpr& child : expr.children) {
      require_filter_vars(child, require);
    }
  }

  Lexer lexer_;
  Token current_;
  turtle::PrefixMap prefixes_;
  Query query_;
};

// ---- evaluation ----

// Value classes for filters and ORDER BY. Terms in different classes never
// compare true in a filter; ORDER BY sorts class by class.
enum class ValueClass { Number, DateTime, Date, String, Iri, Opaque };

struct TermValue {
  ValueClass cls = ValueClass::Opaque;
  double number = 0.0;
  TimeStamp instant{};
  DayStamp day{};
  const Term* term = nullptr;
};

bool parse_number(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') {
    ++first;  // from_chars does not accept a leading plus
  }
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

TermValue classify(const Term& term) {
  TermValue v;
  v.term = &term;
  if (term.is_iri()) {
    v.cls = ValueClass::Iri;
    return v;
  }
  if (term.kind() == Term::Kind::PlainLiteral || term.datatype() == kXsdString) {
    v.cls = ValueClass::String;
    return v;
  }
  const std::string& dt = term.datatype();
  if (dt == kXsdInteger || dt == kXsdDecimal || dt == kXsdDouble) {
    if (parse_number(term.text(), v.number)) {
      v.cls = ValueClass::Number;
    }
    return v;
  }
  if (dt == kXsdDateTime) {
    try {
      v.instant = parse_datetime(term.text());
      v.cls = ValueClass::DateTime;
    } catch (const LexicalError&) {
    }
    return v;
  }
  if (dt == kXsdDate) {
    try {
      v.day = parse_date(term.text());
      v.cls = ValueClass::Date;
    } catch (const LexicalError&) {
    }
    return v;
  }
  return v;
}

template <typename T>
int three_way(const T& a, const T& b) {
  if (a < b) {
    return -1;
  }
  return b < a ? 1 : 0;
}

// Comparison within one class; caller guarantees equal classes.
int compare_values(const TermValue& a, const TermValue& b) {
  switch (a.cls) {
    case ValueClass::Number: return three_way(a.number, b.number);
    case ValueClass::DateTime: return three_way(a.instant, b.instant);
    case ValueClass::Date: return three_way(a.day, b.day);
    case ValueClass::String:
    case ValueClass::Iri: return three_way(a.term->text(), b.term->text());
    case ValueClass::Opaque:
      if (const int dt = three_way(a.term->datatype(), b.term->datatype()); dt != 0) {
        return dt;
      }
      return three_way(a.term->text(), b.term->text());
  }
  return 0;
}

bool eval_comparison(const Comparison& cmp, const Term& bound) {
  const TermValue a = classify(bound);
  const TermValue b = classify(cmp.literal);
  if (a.cls != b.cls || a.cls == ValueClass::Iri || a.cls == ValueClass::Opaque) {
    return false;
  }
  const int c = compare_values(a, b);
  switch (cmp.op) {
    case CompareOp::Less: return c < 0;
    case CompareOp::LessEq: return c <= 0;
    case CompareOp::Greater: return c > 0;
    case CompareOp::GreaterEq: return c >= 0;
    case CompareOp::Equal: return c == 0;
    case CompareOp::NotEqual: return c != 0;
  }
  return false;
}

constexpr std::uint32_t kUnbound = std::numeric_limits<std::uint32_t>::max();

struct CompiledSlot {
  int var = -1;           // variable column, or
  std::uint32_t id = 0;   // dictionary id of a constant
};

struct CompiledPattern {
  CompiledSlot s, p, o;
  std::size_t estimate = 0;  // matches with only the constant slots bound
  std::size_t source = 0;    // position in the query's pattern list
};

bool bind(std::vector<std::uint32_t>& row, const CompiledSlot& slot, std::uint32_t id) {
  if (slot.var < 0) {
    return true;
  }
  std::uint32_t& cell = row[static_cast<std::size_t>(slot.var)];
  if (cell == kUnbound) {
    cell = id;
    return true;
  }
  return cell == id;
}

bool eval_filter(const FilterExpr& expr, const std::vector<std::uint32_t>& row,
                 const std::unordered_map<std::string, int>& columns, const Store& store) {
  switch (expr.kind) {
    case FilterExpr::Kind::Compare: {
      const int col = columns.at(expr.comparison.var);
      const Term& bound = store.dictionary().term_of(row[static_cast<std::size_t>(col)]);
      return eval_comparison(expr.comparison, bound);
    }
    case FilterExpr::Kind::And:
      return std::all_of(expr.children.begin(), expr.children.end(), [&](const FilterExpr& c) {
        return eval_filter(c, row, columns, store);
      });
    case FilterExpr::Kind::Or:
      return std::any_of(expr.children.begin(), expr.children.end(), [&](const FilterExpr& c) {
        return eval_filter(c, row, columns, store);
      });
    case FilterExpr::Kind::Not:
      return !eval_filter(expr.children.front(), row, columns, store);
  }
  return false;
}

}  // namespace

Query parse_query(const std::string& text) { return Parser(text).run(); }

int compare_terms_for_order(const Term& a, const Term& b) {
  const TermValue va = classify(a);
  const TermValue vb = classify(b);
  if (va.cls != vb.cls) {
    return static_cast<int>(va.cls) < static_cast<int>(vb.cls) ? -1 : 1;
  }
  return compare_values(va, vb);
}

SolutionTable evaluate(const Query& q, const Store& store) {
  SolutionTable table;
  table.variables = q.select_vars;

  // Assign variable columns in first-appearance order and compile pattern
  // slots to dictionary ids. A constant term the store has never seen means
  // the whole graph pattern is empty.
  std::unordered_map<std::string, int> columns;
  std::vector<CompiledPattern> patterns;
  bool unsatisfiable = false;
  for (std::size_t i = 0; i < q.patterns.size(); ++i) {
    const TriplePattern& p = q.patterns[i];
    CompiledPattern cp;
    cp.source = i;
    const auto compile_slot = [&columns, &store](const PatternSlot& slot, CompiledSlot& compiled) {
      if (slot.is_variable()) {
        const auto [it, inserted] = columns.try_emplace(slot.var, static_cast<int>(columns.size()));
        compiled.var = it->second;
        return true;
      }
      const auto id = store.dictionary().id_of(*slot.term);
      if (!id.has_value()) {
        return false;
      }
      compiled.id = *id;
      return true;
    };
    if (!compile_slot(p.subject, cp.s) || !compile_slot(p.predicate, cp.p) ||
        !compile_slot(p.object, cp.o)) {
      unsatisfiable = true;
      break;
    }
    IdPattern probe;
    if (cp.s.var < 0) probe.s = cp.s.id;
    if (cp.p.var < 0) probe.p = cp.p.id;
    if (cp.o.var < 0) probe.o = cp.o.id;
    cp.estimate = store.count(probe);
    patterns.push_back(cp);
  }

  std::vector<std::vector<std::uint32_t>> rows;
  if (!unsatisfiable) {
    rows.push_back(std::vector<std::uint32_t>(columns.size(), kUnbound));
  }

  // Greedy join order: cheapest pattern first, preferring patterns that
  // share a variable with those already joined so cross products only
  // happen when the query leaves no choice.
  std::vector<bool> var_bound(columns.size(), false);
  std::vector<bool> used(patterns.size(), false);
  for (std::size_t step = 0; step < patterns.size() && !rows.empty(); ++step) {
    std::size_t best = patterns.size();
    bool best_connected = false;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      if (used[i]) {
        continue;
      }
      const CompiledPattern& cp = patterns[i];
      bool connected = step == 0;
      bool has_var = false;
      for (const CompiledSlot* slot : {&cp.s, &cp.p, &cp.o}) {
        if (slot->var >= 0) {
          has_var = true;
          if (var_bound[static_cast<std::size_t>(slot->var)]) {
            connected = true;
          }
        }
      }
      if (!has_var) {
        connected = true;  // fully ground pattern, acts as an existence test
      }
      if (best == patterns.size() || std::pair(!connected, cp.estimate) <
                                         std::pair(!best_connected, patterns[best].estimate)) {
        best = i;
        best_connected = connected;
      }
    }

    const CompiledPattern& cp = patterns[best];
    used[best] = true;
    for (const CompiledSlot* slot : {&cp.s, &cp.p, &cp.o}) {
      if (slot->var >= 0) {
        var_bound[static_cast<std::size_t>(slot->var)] = true;
      }
    }

    std::vector<std::vector<std::uint32_t>> next;
    for (const std::vector<std::uint32_t>& row : rows) {
      IdPattern probe;
      const auto fill = [&row](const CompiledSlot& slot, std::optional<std::uint32_t>& out) {
        if (slot.var < 0) {
          out = slot.id;
        } else if (row[static_cast<std::size_t>(slot.var)] != kUnbound) {
          out = row[static_cast<std::size_t>(slot.var)];
        }
      };
      fill(cp.s, probe.s);
      fill(cp.p, probe.p);
      fill(cp.o, probe.o);
      for (const IdTriple& t : store.match_ids(probe)) {
        std::vector<std::uint32_t> extended = row;
        if (bind(extended, cp.s, t.s) && bind(extended, cp.p, t.p) && bind(extended, cp.o, t.o)) {
          next.push_back(std::move(extended));
        }
      }
    }
    rows = std::move(next);
  }

  // Filters, then projection carrying the ORDER BY key, then DISTINCT on
  // the projected columns, then the stable sort, then LIMIT.
  struct OutRow {
    std::vector<Term> cells;
    Term key = Term::plain("");
  };
  std::vector<OutRow> out;
  for (const std::vector<std::uint32_t>& row : rows) {
    const bool keep = std::all_of(q.filters.begin(), q.filters.end(), [&](const FilterExpr& f) {
      return eval_filter(f, row, columns, store);
    });
    if (!keep) {
      continue;
    }
    OutRow o;
    o.cells.reserve(q.select_vars.size());
    for (const std::string& var : q.select_vars) {
      o.cells.push_back(
          store.dictionary().term_of(row[static_cast<std::size_t>(columns.at(var))]));
    }
    if (q.order_by.has_value()) {
      o.key = store.dictionary().term_of(
          row[static_cast<std::size_t>(columns.at(q.order_by->var))]);
    }
    out.push_back(std::move(o));
  }

  if (q.distinct) {
    std::set<std::vector<Term>> seen;
    std::vector<OutRow> unique;
    for (OutRow& o : out) {
      if (seen.insert(o.cells).second) {
        unique.push_back(std::move(o));
      }
    }
    out = std::move(unique);
  }

  if (q.order_by.has_value()) {
    const bool desc = q.order_by->descending;
    std::stable_sort(out.begin(), out.end(), [desc](const OutRow& a, const OutRow& b) {
      const int c = compare_terms_for_order(a.key, b.key);
      return desc ? c > 0 : c < 0;
    });
  }

  if (q.limit.has_value() && out.size() > *q.limit) {
    out.resize(*q.limit);
  }

  table.rows.reserve(out.size());
  for (OutRow& o : out) {
    table.rows.push_back(std::move(o.cells));
  }
  return table;
}

}  // namespace geooutage
