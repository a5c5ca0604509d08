#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "xmh/error.hpp"

// Little-endian primitive encoding shared by the matrix and model formats.

namespace xmh::detail {

inline void write_bytes(std::ostream& out, const char* data, std::size_t n) {
  out.write(data, static_cast<std::streamsize>(n));
  if (!out) fail(ErrorCode::io_failure, "write failed");
}

inline void read_exact(std::istream& in, char* data, std::size_t n,
                       const char* what) {
  in.read(data, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    fail(ErrorCode::truncated_file,
         std::string("unexpected end of file while reading ") + what);
  }
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  write_bytes(out, b, 4);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  write_bytes(out, b, 8);
}

inline void write_f64(std::ostream& out, double v) {
  write_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline void write_u8(std::ostream& out, std::uint8_t v) {
  const char b = static_cast<char>(v);
  write_bytes(out, &b, 1);
}

inline std::uint32_t read_u32(std::istream& in, const char* what) {
  char b[4];
  read_exact(in, b, 4, what);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

inline std::uint64_t read_u64(std::istream& in, const char* what) {
  char b[8];
  read_exact(in, b, 8, what);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

inline double read_f64(std::istream& in, const char* what) {
  return std::bit_cast<double>(read_u64(in, what));
}

inline std::uint8_t read_u8(std::istream& in, const char* what) {
  char b;
  read_exact(in, &b, 1, what);
  return static_cast<std::uint8_t>(b);
}

}  // namespace xmh::detail
