#include "ccr/format.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>

#include "ccr/types.hpp"

namespace ccr {

std::string format_double(double v) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    char* end = nullptr;
    if (std::strtod(buf, &end) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  if (text.empty()) throw DomainError("empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw DomainError("malformed number '" + text + "'");
  }
  return v;
}

unsigned long long parse_uint(const std::string& text) {
  if (text.empty()) throw DomainError("empty integer");
  for (char c : text) {
    if (c < '0' || c > '9') throw DomainError("malformed integer '" + text + "'");
  }
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
  if (errno == ERANGE) throw DomainError("integer out of range '" + text + "'");
  return v;
}

}  // namespace ccr
