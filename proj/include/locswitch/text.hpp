#pragma once

// Locale-independent number formatting and small string helpers shared by the
// file readers and writers.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace locswitch::text {

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

/// Fixed-point with `digits` decimals.
std::string format_fixed(double v, int digits);

std::optional<double> parse_double(std::string_view s) noexcept;
std::optional<std::uint64_t> parse_u64(std::string_view s) noexcept;

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace locswitch::text
