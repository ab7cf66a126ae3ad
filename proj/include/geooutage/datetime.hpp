#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "geooutage/errors.hpp"

namespace geooutage {

/// UTC instant with second precision. Serializes as YYYY-MM-DDTHH:MM:SSZ.
using TimeStamp = std::chrono::sys_seconds;

/// UTC calendar date. Serializes as YYYY-MM-DD.
using DayStamp = std::chrono::sys_days;

/// Renders t in the canonical YYYY-MM-DDTHH:MM:SSZ form.
std::string format_datetime(TimeStamp t);

/// Parses YYYY-MM-DDTHH:MM:SSZ. Also accepts the utility-report source form
/// "YYYY-MM-DD HH:MM:SS", interpreted as UTC. Throws LexicalError naming the
/// offending position otherwise.
TimeStamp parse_datetime(std::string_view text);

std::string format_date(DayStamp d);

/// Parses YYYY-MM-DD; throws LexicalError on malformed input.
DayStamp parse_date(std::string_view text);

/// Calendar day containing t.
DayStamp day_of(TimeStamp t);

/// True when t lies on a 15-minute boundary.
bool quarter_hour_aligned(TimeStamp t);

}  // namespace geooutage
