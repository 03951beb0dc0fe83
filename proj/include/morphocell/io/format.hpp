#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace morphocell::io {

inline constexpr int significant_digits = 9;

/// Locale-independent %.9g; negative zero prints as "0".
inline std::string format_fixed(double v) {
    if (v == 0.0) v = 0.0;
    std::array<char, 64> buf{};
    auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, significant_digits);
    return std::string(buf.data(), ptr);
}

/// Shortest representation that reads back to the same double.
inline std::string format_shortest(double v) {
    if (v == 0.0) v = 0.0;
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

}  // namespace morphocell::io
