#ifndef EVENTDF_IO_HPP
#define EVENTDF_IO_HPP

#include <cstdint>
#include <cstdio>
#include <string>

namespace eventdf {

/// Locale-free float formatting with 9 significant digits.
inline std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

/// FNV-1a 64-bit hash, used for config provenance stamps.
inline std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

inline std::string hash_hex(std::uint64_t hash) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace eventdf

#endif
