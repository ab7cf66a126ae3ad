#include "geooutage/rdf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace geooutage {

Triple::Triple(Term s, Term p, Term o)
    : subject(std::move(s)), predicate(std::move(p)), object(std::move(o)) {
  if (!subject.is_iri()) {
    throw std::invalid_argument("triple subject must be an IRI");
  }
  if (!predicate.is_iri()) {
    throw std::invalid_argument("triple predicate must be an IRI");
  }
}

void canonicalize(std::vector<Triple>& triples) {
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
}

std::string canonical_integer(std::int64_t value) { return std::to_string(value); }

std::string canonical_decimal(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("xsd:decimal requires a finite value");
  }
  if (value == 0.0) {
    return "0";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  std::string shortest(buf, res.ptr);

  bool negative = false;
  if (shortest.front() == '-') {
    negative = true;
    shortest.erase(shortest.begin());
  }

  std::string digits;
  long point = 0;  // digits to the left of the decimal point
  long exponent = 0;
  const auto epos = shortest.find_first_of("eE");
  std::string mantissa = shortest.substr(0, epos);
  if (epos != std::string::npos) {
    exponent = std::stol(shortest.substr(epos + 1));
  }
  const auto dot = mantissa.find('.');
  if (dot == std::string::npos) {
    digits = mantissa;
    point = long(digits.size());
  } else {
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    point = long(dot);
  }
  point += exponent;

  std::string out;
  if (point <= 0) {
    out = "0." + std::string(std::size_t(-point), '0') + digits;
  } else if (std::size_t(point) >= digits.size()) {
    out = digits + std::string(std::size_t(point) - digits.size(), '0');
  } else {
    out = digits.substr(0, std::size_t(point)) + "." + digits.substr(std::size_t(point));
  }

  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') {
      out.pop_back();
    }
    if (out.back() == '.') {
      out.pop_back();
    }
  }
  // Strip leading zeros ("007" never arises from to_chars, but "0.x" keeps its zero).
  return negative ? "-" + out : out;
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  // FNV-1a over kind, text, and datatype with separators.
  std::size_t h = 14695981039346656037ull;
  const auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  mix(static_cast<unsigned char>(t.kind()));
  for (const char c : t.text()) {
    mix(static_cast<unsigned char>(c));
  }
  mix(0);
  for (const char c : t.datatype()) {
    mix(static_cast<unsigned char>(c));
  }
  return h;
}

}  // namespace geooutage
