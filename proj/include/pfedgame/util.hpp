#pragma once

#include <charconv>
#include <string>

namespace pfedgame {

/// Shortest decimal string that round-trips the double. Locale-independent,
/// so CSV output is byte-stable across runs and environments.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace pfedgame
