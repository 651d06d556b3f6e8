#ifndef NEWSGRAVITY_DATES_HPP
#define NEWSGRAVITY_DATES_HPP

#include <cstdint>
#include <string>

namespace newsgravity {

/// Calendar date in the proleptic Gregorian calendar.
struct CivilDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  bool operator==(const CivilDate&) const = default;
};

/// Days since 1970-01-01 (negative before the epoch).
std::int64_t days_from_civil(const CivilDate& d);

CivilDate civil_from_days(std::int64_t days);

/// 0 = Sunday .. 6 = Saturday.
int weekday(const CivilDate& d);

bool is_monday(const CivilDate& d);

/// Parses "YYYY-MM-DD". Throws ParseError on malformed input.
CivilDate parse_date(const std::string& s);

/// Parses an ISO-8601 date or date-time and returns the UTC calendar date.
/// Accepts "YYYY-MM-DD", optionally followed by "T" or " " and "HH:MM[:SS]",
/// optionally followed by "Z" or a "+HH:MM"/"-HH:MM" offset. When an offset
/// is present the instant is converted to UTC before taking the date.
CivilDate parse_datetime_utc_date(const std::string& s);

/// "YYYY-MM-DD".
std::string to_string(const CivilDate& d);

}  // namespace newsgravity

#endif
