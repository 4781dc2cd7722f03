#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace odeim {

// Shortest decimal representation that round-trips the double exactly.
inline std::string dtos(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace odeim
