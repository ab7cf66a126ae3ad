#include "geooutage/turtle.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace geooutage::turtle {

namespace {

constexpr std::string_view kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
constexpr std::string_view kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

bool local_start_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool local_mid_char(char c) { return local_start_char(c) || c == '-' || c == '.'; }

bool local_end_char(char c) { return local_start_char(c) || c == '-'; }

/// True when s can stand as the local part of a prefixed name without escapes.
bool safe_local_name(std::string_view s) {
  if (s.empty()) {
    return true;
  }
  if (!local_start_char(s.front()) || !local_end_char(s.back())) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), local_mid_char);
}

bool integer_lexical(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (i >= s.size()) {
    return false;
  }
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') {
      return false;
    }
  }
  return true;
}

// Digits on both sides of the point. Turtle also allows ".5", but the
// lexer here does not, so such lexicals stay in quoted form.
bool decimal_lexical(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  const std::size_t dot = s.find('.', i);
  if (dot == std::string_view::npos || dot == i || dot + 1 >= s.size()) {
    return false;
  }
  for (std::size_t k = i; k < dot; ++k) {
    if (s[k] < '0' || s[k] > '9') {
      return false;
    }
  }
  for (std::size_t k = dot + 1; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') {
      return false;
    }
  }
  return true;
}

std::string quote_literal(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (const char raw : s) {
    const unsigned char c = static_cast<unsigned char>(raw);
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04X", c);
          out += buf;
        } else {
          out += raw;
        }
    }
  }
  out += '"';
  return out;
}

std::string render_iri(const std::string& iri, const PrefixMap& prefixes) {
  if (auto compacted = prefixes.compact(iri)) {
    return *compacted;
  }
  return "<" + iri + ">";
}

std::string render_term(const Term& term, const PrefixMap& prefixes) {
  switch (term.kind()) {
    case Term::Kind::Iri:
      return render_iri(term.text(), prefixes);
    case Term::Kind::PlainLiteral:
      return quote_literal(term.text());
    case Term::Kind::TypedLiteral:
      if (term.datatype() == kXsdInteger && integer_lexical(term.text())) {
        return term.text();
      }
      if (term.datatype() == kXsdDecimal && decimal_lexical(term.text())) {
        return term.text();
      }
      return quote_literal(term.text()) + "^^" + render_iri(term.datatype(), prefixes);
  }
  return {};
}

void encode_utf8(std::uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += char(cp);
  } else if (cp < 0x800) {
    out += char(0xC0 | (cp >> 6));
    out += char(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += char(0xE0 | (cp >> 12));
    out += char(0x80 | ((cp >> 6) & 0x3F));
    out += char(0x80 | (cp & 0x3F));
  } else {
    out += char(0xF0 | (cp >> 18));
    out += char(0x80 | ((cp >> 12) & 0x3F));
    out += char(0x80 | ((cp >> 6) & 0x3F));
    out += char(0x80 | (cp & 0x3F));
  }
}

enum class Tok : std::uint8_t {
  AtPrefix,
  Pname,   // prefix stored in .prefix, local part in .text
  Iriref,  // .text holds the IRI
  String,  // .text holds the cooked literal
  Integer,
  Decimal,
  A,
  Dot,
  Semicolon,
  Comma,
  CaretCaret,
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
    if (c == '.') {
      advance();
      t.type = Tok::Dot;
      return t;
    }
    if (c == ';') {
      advance();
      t.type = Tok::Semicolon;
      return t;
    }
    if (c == ',') {
      advance();
      t.type = Tok::Comma;
      return t;
    }
    if (c == '^') {
      advance();
      if (at_end() || peek() != '^') {
        fail(t, "expected '^^'");
      }
      advance();
      t.type = Tok::CaretCaret;
      return t;
    }
    if (c == '<') {
      return lex_iriref(t);
    }
    if (c == '"') {
      return lex_string(t);
    }
    if (c == '@') {
      return lex_directive(t);
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

  Token lex_iriref(Token t) {
    advance();  // '<'
    while (!at_end() && peek() != '>') {
      if (peek() == '\n') {
        fail(t, "unterminated IRI");
      }
      t.text += peek();
      advance();
    }
    if (at_end()) {
      fail(t, "unterminated IRI");
    }
    advance();  // '>'
    t.type = Tok::Iriref;
    return t;
  }

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
          case 'u': t.text.append(read_unicode_escape(4)); break;
          case 'U': t.text.append(read_unicode_escape(8)); break;
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

  std::string read_unicode_escape(int digits) {
    std::uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      if (at_end()) {
        fail_here("truncated unicode escape");
      }
      const char c = peek();
      int v;
      if (c >= '0' && c <= '9') {
        v = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        v = c - 'a' + 10;
      } else if (c >= 'A' && c <= 'F') {
        v = c - 'A' + 10;
      } else {
        fail_here("invalid hex digit in unicode escape");
      }
      cp = cp * 16 + std::uint32_t(v);
      advance();
    }
    std::string out;
    encode_utf8(cp, out);
    return out;
  }

  Token lex_directive(Token t) {
    advance();  // '@'
    std::string word;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) {
      word += peek();
      advance();
    }
    if (word != "prefix") {
      fail(t, "unsupported directive '@" + word + "'");
    }
    t.type = Tok::AtPrefix;
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

  // Prefixed name, or the keyword 'a'.
  Token lex_name(Token t) {
    std::string head;
    while (!at_end() && local_mid_char(peek()) && peek() != '.') {
      head += peek();
      advance();
    }
    if (at_end() || peek() != ':') {
      if (head == "a") {
        t.type = Tok::A;
        return t;
      }
      fail(t, head.empty() ? "unexpected character" : "expected ':' in prefixed name");
    }
    advance();  // ':'
    t.prefix = std::move(head);
    // Local part: '.' allowed only when another local character follows,
    // so a statement-terminating dot is left for the next token.
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

class Parser {
 public:
  explicit Parser(std::string_view input) : lexer_(input) { shift(); }

  ParseResult run() {
    while (current_.type != Tok::End) {
      if (current_.type == Tok::AtPrefix) {
        parse_prefix_directive();
      } else {
        parse_statement();
      }
    }
    canonicalize(result_.triples);
    return std::move(result_);
  }

 private:
  void shift() { current_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, current_.line, current_.column);
  }

  void expect(Tok type, const char* what) {
    if (current_.type != type) {
      fail(std::string("expected ") + what);
    }
    shift();
  }

  void parse_prefix_directive() {
    shift();  // @prefix
    if (current_.type != Tok::Pname || !current_.text.empty()) {
      fail("expected prefix name ending in ':'");
    }
    std::string prefix = current_.prefix;
    shift();
    if (current_.type != Tok::Iriref) {
      fail("expected <IRI> in @prefix directive");
    }
    std::string iri = current_.text;
    const auto at_line = current_.line;
    const auto at_col = current_.column;
    shift();
    expect(Tok::Dot, "'.' after @prefix directive");
    try {
      result_.prefixes.add(std::move(prefix), std::move(iri));
    } catch (const DataError& e) {
      throw ParseError(e.what(), at_line, at_col);
    }
  }

  Term parse_iri() {
    if (current_.type == Tok::Iriref) {
      Term t = Term::iri(current_.text);
      shift();
      return t;
    }
    if (current_.type == Tok::Pname) {
      const std::string* ns = result_.prefixes.expansion(current_.prefix);
      if (ns == nullptr) {
        fail("unknown prefix '" + current_.prefix + ":'");
      }
      Term t = Term::iri(*ns + current_.text);
      shift();
      return t;
    }
    fail("expected IRI");
  }

  Term parse_verb() {
    if (current_.type == Tok::A) {
      shift();
      return Term::iri(std::string{kRdfType});
    }
    return parse_iri();
  }

  Term parse_object() {
    switch (current_.type) {
      case Tok::Iriref:
      case Tok::Pname:
        return parse_iri();
      case Tok::Integer: {
        Term t = Term::typed(current_.text, std::string{kXsdInteger});
        shift();
        return t;
      }
      case Tok::Decimal: {
        Term t = Term::typed(current_.text, std::string{kXsdDecimal});
        shift();
        return t;
      }
      case Tok::String: {
        std::string lexical = current_.text;
        shift();
        if (current_.type == Tok::CaretCaret) {
          shift();
          Term dt = parse_iri();
          return Term::typed(std::move(lexical), dt.text());
        }
        return Term::plain(std::move(lexical));
      }
      default:
        fail("expected object term");
    }
  }

  void parse_statement() {
    const Term subject = parse_iri();
    while (true) {
      const Term predicate = parse_verb();
      while (true) {
        Term object = parse_object();
        result_.triples.emplace_back(subject, predicate, std::move(object));
        if (current_.type == Tok::Comma) {
          shift();
          continue;
        }
        break;
      }
      if (current_.type == Tok::Semicolon) {
        // Tolerate trailing ';' before '.'.
        while (current_.type == Tok::Semicolon) {
          shift();
        }
        if (current_.type == Tok::Dot) {
          break;
        }
        continue;
      }
      break;
    }
    expect(Tok::Dot, "'.' at end of statement");
  }

  Lexer lexer_;
  Token current_;
  ParseResult result_;
};

}  // namespace

void PrefixMap::add(std::string prefix, std::string iri) {
  if (iri.empty()) {
    throw DataError("prefix '" + prefix + ":' maps to an empty IRI");
  }
  for (const auto& [p, existing] : entries_) {
    if (p == prefix) {
      if (existing == iri) {
        return;
      }
      throw DataError("conflicting redeclaration of prefix '" + prefix + ":'");
    }
  }
  entries_.emplace_back(std::move(prefix), std::move(iri));
}

const std::string* PrefixMap::expansion(std::string_view prefix) const {
  for (const auto& [p, iri] : entries_) {
    if (p == prefix) {
      return &iri;
    }
  }
  return nullptr;
}

std::optional<std::string> PrefixMap::compact(std::string_view iri) const {
  const std::pair<std::string, std::string>* best = nullptr;
  for (const auto& entry : entries_) {
    const auto& ns = entry.second;
    if (iri.size() < ns.size() || iri.substr(0, ns.size()) != ns) {
      continue;
    }
    if (!safe_local_name(iri.substr(ns.size()))) {
      continue;
    }
    if (best == nullptr || ns.size() > best->second.size()) {
      best = &entry;
    }
  }
  if (best == nullptr) {
    return std::nullopt;
  }
  return best->first + ":" + std::string{iri.substr(best->second.size())};
}

std::string serialize(std::vector<Triple> triples, const PrefixMap& prefixes,
                      const SerializeOptions& options) {
  canonicalize(triples);
  std::string out;
  for (const auto& [prefix, iri] : prefixes.entries()) {
    out += "@prefix " + prefix + ": <" + iri + "> .\n";
  }
  if (!prefixes.entries().empty() && !triples.empty()) {
    out += "\n";
  }

  if (!options.group_subjects) {
    for (const auto& t : triples) {
      out += render_term(t.subject, prefixes);
      out += ' ';
      out += render_term(t.predicate, prefixes);
      out += ' ';
      out += render_term(t.object, prefixes);
      out += " .\n";
    }
    return out;
  }

  std::size_t i = 0;
  while (i < triples.size()) {
    std::size_t j = i;
    while (j < triples.size() && triples[j].subject == triples[i].subject) {
      ++j;
    }
    out += render_term(triples[i].subject, prefixes);
    std::size_t k = i;
    while (k < j) {
      std::size_t m = k;
      while (m < j && triples[m].predicate == triples[k].predicate) {
        ++m;
      }
      out += (k == i) ? " " : " ;\n    ";
      out += render_term(triples[k].predicate, prefixes);
      for (std::size_t q = k; q < m; ++q) {
        out += (q == k) ? " " : ", ";
        out += render_term(triples[q].object, prefixes);
      }
      k = m;
    }
    out += " .\n";
    i = j;
  }
  return out;
}

ParseResult parse(std::string_view text) { return Parser{text}.run(); }

}  // namespace geooutage::turtle
