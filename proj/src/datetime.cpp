#include "geooutage/datetime.hpp"

#include <cstdio>

namespace geooutage {

namespace {

int parse_digits(std::string_view text, std::size_t pos, int count, const char* what) {
  if (pos + count > text.size()) {
    throw LexicalError(std::string("unexpected end of input while reading ") + what, text.size());
  }
  int value = 0;
  for (int i = 0; i < count; ++i) {
    const char c = text[pos + i];
    if (c < '0' || c > '9') {
      throw LexicalError(std::string("expected digit in ") + what, pos + i);
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c, const char* what) {
  if (pos >= text.size()) {
    throw LexicalError(std::string("unexpected end of input, expected ") + what, text.size());
  }
  if (text[pos] != c) {
    throw LexicalError(std::string("expected ") + what, pos);
  }
}

std::chrono::year_month_day parse_ymd(std::string_view text) {
  const int y = parse_digits(text, 0, 4, "year");
  expect_char(text, 4, '-', "'-' after year");
  const int mo = parse_digits(text, 5, 2, "month");
  if (mo < 1 || mo > 12) {
    throw LexicalError("month out of range", 5);
  }
  expect_char(text, 7, '-', "'-' after month");
  const int d = parse_digits(text, 8, 2, "day");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(mo)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) {
    throw LexicalError("day out of range for month", 8);
  }
  return ymd;
}

}  // namespace

std::string format_datetime(TimeStamp t) {
  using namespace std::chrono;
  const sys_days days = floor<std::chrono::days>(t);
  const year_month_day ymd{days};
  const hh_mm_ss hms{t - days};
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                int(hms.minutes().count()), int(hms.seconds().count()));
  return buf;
}

TimeStamp parse_datetime(std::string_view text) {
  const std::chrono::year_month_day ymd = parse_ymd(text);
  if (text.size() < 11 || (text[10] != 'T' && text[10] != ' ')) {
    throw LexicalError("expected 'T' or ' ' between date and time", 10);
  }
  const int h = parse_digits(text, 11, 2, "hour");
  if (h > 23) {
    throw LexicalError("hour out of range", 11);
  }
  expect_char(text, 13, ':', "':' after hour");
  const int mi = parse_digits(text, 14, 2, "minute");
  if (mi > 59) {
    throw LexicalError("minute out of range", 14);
  }
  expect_char(text, 16, ':', "':' after minute");
  const int s = parse_digits(text, 17, 2, "second");
  if (s > 59) {
    throw LexicalError("second out of range", 17);
  }
  std::size_t end = 19;
  if (end < text.size() && text[end] == 'Z') {
    ++end;
  }
  if (end != text.size()) {
    throw LexicalError("trailing characters after timestamp", end);
  }
  return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} +
         std::chrono::seconds{s};
}

std::string format_date(DayStamp d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

DayStamp parse_date(std::string_view text) {
  const std::chrono::year_month_day ymd = parse_ymd(text);
  if (text.size() != 10) {
    throw LexicalError("trailing characters after date", 10);
  }
  return std::chrono::sys_days{ymd};
}

DayStamp day_of(TimeStamp t) { return std::chrono::floor<std::chrono::days>(t); }

bool quarter_hour_aligned(TimeStamp t) {
  return t.time_since_epoch() % std::chrono::minutes{15} == std::chrono::seconds{0};
}

}  // namespace geooutage
