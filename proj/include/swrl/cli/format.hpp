#pragma once

#include <string>

namespace swrl::cli {

/// 17 significant digits, '.' decimal point, independent of the C locale.
std::string format_double(double x);

}  // namespace swrl::cli
