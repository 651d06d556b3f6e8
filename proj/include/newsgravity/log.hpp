#ifndef NEWSGRAVITY_LOG_HPP
#define NEWSGRAVITY_LOG_HPP

#include <iostream>
#include <sstream>
#include <string>

namespace newsgravity {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3 };

/// Threshold from the NEWSGRAVITY_LOG environment variable (default: warn).
LogLevel log_threshold();

inline bool log_enabled(LogLevel level) {
  return static_cast<int>(level) >= static_cast<int>(log_threshold());
}

template <typename... Args>
void log_line(LogLevel level, const char* tag, Args&&... args) {
  if (!log_enabled(level)) return;
  std::ostringstream os;
  os << "[" << tag << "] ";
  (os << ... << args);
  os << '\n';
  std::cerr << os.str();
}

#define NEWSGRAVITY_LOG_DEBUG(...) \
  ::newsgravity::log_line(::newsgravity::LogLevel::Debug, "debug", __VA_ARGS__)
#define NEWSGRAVITY_LOG_INFO(...) \
  ::newsgravity::log_line(::newsgravity::LogLevel::Info, "info", __VA_ARGS__)
#define NEWSGRAVITY_LOG_WARN(...) \
  ::newsgravity::log_line(::newsgravity::LogLevel::Warn, "warn", __VA_ARGS__)

}  // namespace newsgravity

#endif
