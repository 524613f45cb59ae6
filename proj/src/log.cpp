#include "nmfbs/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace nmfbs {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("NMFBS_LOG");
    if (!env) return LogLevel::Warn;
    const std::string s(env);
    if (s == "off") return LogLevel::Off;
    if (s == "error") return LogLevel::Error;
    if (s == "warn") return LogLevel::Warn;
    if (s == "info") return LogLevel::Info;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return level;
}

void log_message(LogLevel level, const std::string& msg) {
  static std::mutex mu;
  const char* tag = "";
  switch (level) {
    case LogLevel::Error: tag = "error"; break;
    case LogLevel::Warn: tag = "warn"; break;
    case LogLevel::Info: tag = "info"; break;
    case LogLevel::Debug: tag = "debug"; break;
    case LogLevel::Off: return;
  }
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[nmfbs:" << tag << "] " << msg << "\n";
}

}  // namespace nmfbs
