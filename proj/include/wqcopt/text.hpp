#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace wqcopt {

// %.17g-style serialization via std::to_chars: locale independent, 17
// significant digits, exact round-trip for every finite double.
std::string format_double(double v);

// std::from_chars over the whole string; nullopt if it does not parse.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::uint64_t fnv1a64(std::string_view s);
std::string to_hex(std::uint64_t v);

}  // namespace wqcopt
