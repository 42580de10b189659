#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace rectsim {

/// Parse a SPICE-style number: a decimal float optionally followed by an
/// engineering suffix (f p n u m k meg g, case-insensitive). Returns nullopt
/// for anything else, including trailing garbage after a valid suffix.
std::optional<double> parse_spice_number(std::string_view token);

/// Render a double as the shortest decimal string that parses back to the
/// same value. Uses plain fixed notation for moderate magnitudes
/// (1e-4 <= |v| < 1e16) and scientific otherwise; never emits suffixes.
std::string format_number(double value);

/// Scientific notation with 9 significant digits, the CSV cell format.
std::string format_csv(double value);

} // namespace rectsim
