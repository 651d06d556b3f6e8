#include "newsgravity/dates.hpp"

#include <cctype>
#include <cstdio>

#include "newsgravity/errors.hpp"

namespace newsgravity {

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
  if (from + count > s.size()) return false;
  for (std::size_t i = from; i < from + count; ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

int to_int(const std::string& s, std::size_t from, std::size_t count) {
  int v = 0;
  for (std::size_t i = from; i < from + count; ++i) v = v * 10 + (s[i] - '0');
  return v;
}

int days_in_month(int year, int month) {
  static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return lengths[month - 1];
}

}  // namespace

std::int64_t days_from_civil(const CivilDate& d) {
  // Howard Hinnant's civil-days algorithm.
  std::int64_t y = d.year;
  const int m = d.month;
  const int day = d.day;
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + day - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned day = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                   static_cast<int>(day)};
}

int weekday(const CivilDate& d) {
  // 1970-01-01 was a Thursday.
  const std::int64_t days = days_from_civil(d);
  return static_cast<int>(((days % 7) + 11) % 7);
}

bool is_monday(const CivilDate& d) { return weekday(d) == 1; }

CivilDate parse_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !all_digits(s, 0, 4) ||
      !all_digits(s, 5, 2) || !all_digits(s, 8, 2))
    throw ParseError("invalid date '" + s + "' (expected YYYY-MM-DD)");
  CivilDate d{to_int(s, 0, 4), to_int(s, 5, 2), to_int(s, 8, 2)};
  if (d.month < 1 || d.month > 12 || d.day < 1 ||
      d.day > days_in_month(d.year, d.month))
    throw ParseError("invalid date '" + s + "'");
  return d;
}

CivilDate parse_datetime_utc_date(const std::string& s) {
  if (s.size() < 10) throw ParseError("invalid date-time '" + s + "'");
  CivilDate date = parse_date(s.substr(0, 10));
  if (s.size() == 10) return date;

  if (s[10] != 'T' && s[10] != ' ')
    throw ParseError("invalid date-time '" + s + "'");
  std::size_t pos = 11;
  if (!all_digits(s, pos, 2) || pos + 2 >= s.size() || s[pos + 2] != ':' ||
      !all_digits(s, pos + 3, 2))
    throw ParseError("invalid time in '" + s + "'");
  int hour = to_int(s, pos, 2);
  int minute = to_int(s, pos + 3, 2);
  int second = 0;
  pos += 5;
  if (pos < s.size() && s[pos] == ':') {
    if (!all_digits(s, pos + 1, 2)) throw ParseError("invalid time in '" + s + "'");
    second = to_int(s, pos + 1, 2);
    pos += 3;
    // Ignore fractional seconds.
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
        ++pos;
    }
  }
  if (hour > 23 || minute > 59 || second > 60)
    throw ParseError("invalid time in '" + s + "'");

  std::int64_t offset_minutes = 0;
  if (pos < s.size()) {
    if (s[pos] == 'Z') {
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      const int sign = s[pos] == '+' ? 1 : -1;
      ++pos;
      if (!all_digits(s, pos, 2)) throw ParseError("invalid offset in '" + s + "'");
      int oh = to_int(s, pos, 2);
      pos += 2;
      int om = 0;
      if (pos < s.size() && s[pos] == ':') ++pos;
      if (pos + 2 <= s.size() && all_digits(s, pos, 2)) {
        om = to_int(s, pos, 2);
        pos += 2;
      }
      offset_minutes = sign * (oh * 60 + om);
    }
  }
  if (pos != s.size()) throw ParseError("trailing characters in '" + s + "'");

  std::int64_t minutes_utc = days_from_civil(date) * 1440 + hour * 60 + minute -
                             offset_minutes;
  std::int64_t day_utc = minutes_utc >= 0 ? minutes_utc / 1440
                                          : (minutes_utc - 1439) / 1440;
  return civil_from_days(day_utc);
}

std::string to_string(const CivilDate& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return std::string(buf);
}

}  // namespace newsgravity
