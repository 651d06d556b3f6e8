#include "newsgravity/log.hpp"

#include <cstdlib>

namespace newsgravity {

LogLevel log_threshold() {
  static const LogLevel level = [] {
    const char* env = std::getenv("NEWSGRAVITY_LOG");
    if (!env) return LogLevel::Warn;
    const std::string v(env);
    if (v == "debug") return LogLevel::Debug;
    if (v == "info") return LogLevel::Info;
    if (v == "warn") return LogLevel::Warn;
    if (v == "error") return LogLevel::Error;
    return LogLevel::Warn;
  }();
  return level;
}

}  // namespace newsgravity
