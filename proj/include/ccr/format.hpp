#pragma once

#include <string>

namespace ccr {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// strtod wrapper that insists the whole string is consumed.
/// Throws DomainError otherwise.
double parse_double(const std::string& text);

/// Same, for nonnegative integers.  Throws DomainError.
unsigned long long parse_uint(const std::string& text);

}  // namespace ccr
