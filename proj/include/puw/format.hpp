#pragma once

#include <string>

namespace puw {

/// 17 significant digits, '.' decimal point,
/// "nan" / "inf" / "-inf" for non-finite values.
std::string format_real(double x);

/// RFC 4180 quoting: wraps in double quotes when the field contains a comma,
/// quote, CR or LF, doubling embedded quotes.
std::string csv_field(const std::string& s);

}  // namespace puw
