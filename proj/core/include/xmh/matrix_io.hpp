#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "xmh/common.hpp"

namespace xmh {

// Binary matrix layout, all little-endian:
//   bytes 0..7   magic "XMHMATRX"
//   bytes 8..11  u32 format version
//   bytes 12..19 u64 row count
//   bytes 20..27 u64 column count
//   then rows*cols IEEE-754 doubles, row-major.
inline constexpr char kMatrixMagic[9] = "XMHMATRX";
inline constexpr std::uint32_t kMatrixFormatVersion = 1;

void save_matrix(const Matrix& m, const std::filesystem::path& path);

/// Loads either the binary format or comma-separated text, detected from the
/// leading bytes.
Matrix load_matrix(const std::filesystem::path& path);

void save_matrix_csv(const Matrix& m, const std::filesystem::path& path);
Matrix load_matrix_csv(const std::filesystem::path& path);

// Stream variants used to embed matrix records in container files.
void write_matrix_record(std::ostream& out, const Matrix& m);
Matrix read_matrix_record(std::istream& in);

/// One objective value per line, "iteration,objective".
void write_trace_csv(const std::vector<double>& trace,
                     const std::filesystem::path& path);

}  // namespace xmh
