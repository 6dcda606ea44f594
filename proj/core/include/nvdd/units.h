#ifndef NVDD_UNITS_H
#define NVDD_UNITS_H

#include <optional>
#include <string>
#include <string_view>

namespace nvdd::units {

enum class Dimension { Frequency, Time, Angle };

// Parses "<number><suffix>" (e.g. "2.8161MHz", "67.15us", "90deg") into SI base
// units (Hz, s, degrees). Returns nullopt for a malformed number, a missing or
// unknown suffix, or a suffix of the wrong dimension.
std::optional<double> parse_quantity(std::string_view text, Dimension dim);

// Canonical text for a value in base units. Picks the largest unit whose scaled
// value is >= 1 and round-trips bit-exactly through parse_quantity; falls back to
// the base unit otherwise.
std::string format_quantity(double value, Dimension dim);

// Shortest decimal text that round-trips bit-exactly ('.' decimal point).
std::string format_double(double value);

// Strict full-string double parse.
std::optional<double> parse_double(std::string_view text);

// Accepts "4pi", "0.5pi", "pi", "-pi" and plain radians.
std::optional<double> parse_angle_rad(std::string_view text);

}  // namespace nvdd::units

#endif  // NVDD_UNITS_H
