#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace affect {

/// Shortest round-tripping fixed-point rendering ("2", "-0.5"). Never emits
/// an exponent or a negative zero.
inline std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[512];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    if (res.ec != std::errc{}) return std::to_string(v);
    return std::string(buf, res.ptr);
}

/// Signed decimal: [+-]?digits(.digits)?
inline bool is_decimal(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    const std::size_t int_start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == int_start) return false;
    if (i < s.size() && s[i] == '.') {
        ++i;
        const std::size_t frac_start = i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
        if (i == frac_start) return false;
    }
    return i == s.size();
}

inline std::optional<double> parse_decimal(std::string_view s) {
    if (!is_decimal(s)) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::fixed);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    if (v == 0.0) v = 0.0;  // drop the sign of "-0"
    return v;
}

inline bool is_unsigned_int(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

inline std::optional<std::uint32_t> parse_unsigned(std::string_view s) {
    if (!is_unsigned_int(s)) return std::nullopt;
    std::uint32_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace affect
