#pragma once
// Small shared utilities: FNV-1a hashing for config provenance and
// round-trip-exact floating point formatting for CSV output.

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace shmod::util {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// 17 significant digits: enough for byte-wise reproducibility audits.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string hex16(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace shmod::util
