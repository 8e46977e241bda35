#pragma once

#include <cstddef>
#include <string>

namespace convexreg::cli {

/// 17 significant digits with a '.' decimal point, whatever the locale.
std::string format_double(double v);
std::string format_size(std::size_t v);
inline std::string format_bool(bool v) { return v ? "true" : "false"; }

}  // namespace convexreg::cli
