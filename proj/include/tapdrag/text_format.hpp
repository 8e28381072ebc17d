#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tapdrag::text {

// Locale-independent fixed-point rendering. A value that rounds to zero is
// printed without a sign.
std::string fixed(double value, int fraction_digits);
void append_fixed(std::string& out, double value, int fraction_digits);

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<std::uint64_t> parse_uint(std::string_view s);

// Splits on runs of spaces/tabs; empty fields are dropped.
std::vector<std::string_view> split_ws(std::string_view line);
// Splits on every occurrence of `sep`; empty fields are kept.
std::vector<std::string_view> split(std::string_view s, char sep);

// Lines without their terminators; a trailing newline does not produce an
// empty final line. Handles "\r\n".
std::vector<std::string_view> lines(std::string_view text);

}  // namespace tapdrag::text
