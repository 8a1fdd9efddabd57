#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

#include "patchad/errors.hpp"

namespace patchad::detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), b.size());
}

inline std::uint32_t decode_u32(const unsigned char* p) noexcept {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

/// Reads exactly n bytes or throws LengthError naming `what`.
inline void read_exact(std::istream& in, char* dst, std::streamsize n, const char* what) {
  in.read(dst, n);
  if (in.gcount() != n) {
    throw LengthError(std::string("truncated ") + what + ": expected " + std::to_string(n) +
                      " bytes, got " + std::to_string(in.gcount()));
  }
}

inline std::uint32_t get_u32(std::istream& in, const char* what) {
  std::array<unsigned char, 4> b{};
  read_exact(in, reinterpret_cast<char*>(b.data()), 4, what);
  return decode_u32(b.data());
}

}  // namespace patchad::detail
