#pragma once

#include <sstream>
#include <string>

namespace nmfbs {

enum class LogLevel { Off = 0, Error = 1, Warn = 2, Info = 3, Debug = 4 };

/// Level parsed once from the NMFBS_LOG environment variable
/// (off|error|warn|info|debug; default warn).
LogLevel log_level();

void log_message(LogLevel level, const std::string& msg);

}  // namespace nmfbs

#define NMFBS_LOG_AT(level, expr)                                   \
  do {                                                              \
    if (static_cast<int>(::nmfbs::log_level()) >=                   \
        static_cast<int>(level)) {                                  \
      std::ostringstream nmfbs_log_oss;                             \
      nmfbs_log_oss << expr;                                        \
      ::nmfbs::log_message(level, nmfbs_log_oss.str());             \
    }                                                               \
  } while (0)

#define NMFBS_LOG_ERROR(expr) NMFBS_LOG_AT(::nmfbs::LogLevel::Error, expr)
#define NMFBS_LOG_WARN(expr) NMFBS_LOG_AT(::nmfbs::LogLevel::Warn, expr)
#define NMFBS_LOG_INFO(expr) NMFBS_LOG_AT(::nmfbs::LogLevel::Info, expr)
#define NMFBS_LOG_DEBUG(expr) NMFBS_LOG_AT(::nmfbs::LogLevel::Debug, expr)
