#pragma once

#include <string>

namespace shotnoise {

/// Shortest decimal representation that reads back to the same double.
/// Infinities are written as `inf` / `-inf`.
[[nodiscard]] std::string format_double(double x);

/// Round to `digits` significant decimal digits.
[[nodiscard]] double round_significant(double x, int digits);

}  // namespace shotnoise
