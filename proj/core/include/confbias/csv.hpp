#pragma once

#include <cstdio>
#include <string>

namespace confbias {

/// Full-precision numeric formatting for CSV output (17 significant digits).
inline std::string csv_num(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace confbias
