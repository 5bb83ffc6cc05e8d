#pragma once

#include <charconv>
#include <string>

namespace wirepol {

/// Shortest decimal string that parses back to exactly `v`.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

} // namespace wirepol
