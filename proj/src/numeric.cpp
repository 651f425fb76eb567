#include "wattcast/numeric.hpp"

#include <cstdio>
#include <cstdlib>

#include "wattcast/error.hpp"

namespace wattcast {

std::string fmt_g12(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double parse_double(const std::string& token, int line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    fail(Errc::SyntaxError, "line " + std::to_string(line) + ": bad number '" + token + "'");
  }
  return v;
}

}  // namespace wattcast
