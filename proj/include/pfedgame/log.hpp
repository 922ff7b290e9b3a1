#pragma once

#include <string>

namespace pfedgame {

enum class LogLevel { quiet = 0, error = 1, warn = 2, info = 3, debug = 4 };

void set_log_level(LogLevel level);

/// Reads PFEDGAME_LOG (quiet|error|warn|info|debug). Unset keeps the default
/// (warn); an unrecognized value is ignored.
void set_log_level_from_env();

LogLevel log_level();

void log_msg(LogLevel level, const std::string& msg);

inline void log_info(const std::string& msg) { log_msg(LogLevel::info, msg); }
inline void log_warn(const std::string& msg) { log_msg(LogLevel::warn, msg); }
inline void log_error(const std::string& msg) { log_msg(LogLevel::error, msg); }
inline void log_debug(const std::string& msg) { log_msg(LogLevel::debug, msg); }

}  // namespace pfedgame
