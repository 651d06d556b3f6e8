#include "newsgravity/calendar.hpp"

#include "newsgravity/errors.hpp"

namespace newsgravity {

WeekCalendar::WeekCalendar(CivilDate start, int n_weeks)
    : start_(start), start_days_(days_from_civil(start)), n_weeks_(n_weeks) {
  if (!is_monday(start))
    throw ConfigError("window start " + to_string(start) + " is not a Monday");
  if (n_weeks < 1) throw ConfigError("window must span at least one week");
}

int WeekCalendar::week_of(const CivilDate& date) const {
  const std::int64_t offset = days_from_civil(date) - start_days_;
  if (offset < 0 || offset >= static_cast<std::int64_t>(n_weeks_) * 7)
    throw OutOfWindowError("date " + to_string(date) + " outside window [" +
                           to_string(start_) + ", " +
                           to_string(week_end(n_weeks_ - 1)) + "]");
  return static_cast<int>(offset / 7);
}

bool WeekCalendar::contains(const CivilDate& date) const {
  const std::int64_t offset = days_from_civil(date) - start_days_;
  return offset >= 0 && offset < static_cast<std::int64_t>(n_weeks_) * 7;
}

CivilDate WeekCalendar::week_start(int week) const {
  return civil_from_days(start_days_ + static_cast<std::int64_t>(week) * 7);
}

CivilDate WeekCalendar::week_end(int week) const {
  return civil_from_days(start_days_ + static_cast<std::int64_t>(week) * 7 + 6);
}

}  // namespace newsgravity
