#include "geooutage/model.hpp"

#include "geooutage/errors.hpp"

namespace geooutage {

FipsCode FipsCode::parse(std::string_view text) {
  if (text.size() != 5) {
    throw LexicalError("FIPS code must be exactly 5 digits", text.size() < 5 ? text.size() : 5);
  }
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw LexicalError("FIPS code must contain only digits", i);
    }
  }
  return FipsCode{std::string{text}};
}

}  // namespace geooutage
