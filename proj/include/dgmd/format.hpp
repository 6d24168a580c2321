#pragma once

#include <cstdio>
#include <string>

namespace dgmd {

/// Shortest round-trippable-enough text for labels and reports (9 significant digits).
inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace dgmd
