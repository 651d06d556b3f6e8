#ifndef NEWSGRAVITY_CALENDAR_HPP
#define NEWSGRAVITY_CALENDAR_HPP

#include "newsgravity/dates.hpp"

namespace newsgravity {

/// Observation window split into consecutive Monday-to-Sunday weeks.
class WeekCalendar {
public:
  /// Throws ConfigError unless start is a Monday and n_weeks >= 1.
  WeekCalendar(CivilDate start, int n_weeks);

  const CivilDate& start_date() const { return start_; }
  int n_weeks() const { return n_weeks_; }

  /// Week index for a date; throws OutOfWindowError outside the window.
  int week_of(const CivilDate& date) const;

  bool contains(const CivilDate& date) const;

  CivilDate week_start(int week) const;
  CivilDate week_end(int week) const;

private:
  CivilDate start_;
  std::int64_t start_days_;
  int n_weeks_;
};

}  // namespace newsgravity

#endif
