#include "pfedgame/log.hpp"

#include <cstdlib>
#include <iostream>

namespace pfedgame {

namespace {
LogLevel g_level = LogLevel::warn;

const char* level_tag(LogLevel level) {
    switch (level) {
        case LogLevel::error: return "error";
        case LogLevel::warn: return "warn";
        case LogLevel::info: return "info";
        case LogLevel::debug: return "debug";
        default: return "";
    }
}
}  // namespace

void set_log_level(LogLevel level) { g_level = level; }

void set_log_level_from_env() {
    const char* v = std::getenv("PFEDGAME_LOG");
    if (!v) return;
    const std::string s(v);
    if (s == "quiet") g_level = LogLevel::quiet;
    else if (s == "error") g_level = LogLevel::error;
    else if (s == "warn") g_level = LogLevel::warn;
    else if (s == "info") g_level = LogLevel::info;
    else if (s == "debug") g_level = LogLevel::debug;
}

LogLevel log_level() { return g_level; }

void log_msg(LogLevel level, const std::string& msg) {
    if (static_cast<int>(level) > static_cast<int>(g_level)) return;
    std::cerr << "[pfedgame " << level_tag(level) << "] " << msg << "\n";
}

}  // namespace pfedgame
