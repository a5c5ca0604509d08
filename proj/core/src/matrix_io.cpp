#include "xmh/matrix_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "xmh/detail/binary_io.hpp"
#include "xmh/error.hpp"

namespace xmh {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_failure, "cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_failure, "cannot open " + path.string());
  return in;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_matrix_record(std::ostream& out, const Matrix& m) {
  detail::write_bytes(out, kMatrixMagic, 8);
  detail::write_u32(out, kMatrixFormatVersion);
  detail::write_u64(out, static_cast<std::uint64_t>(m.rows()));
  detail::write_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      detail::write_f64(out, m(r, c));
    }
  }
}

Matrix read_matrix_record(std::istream& in) {
  char magic[8];
  detail::read_exact(in, magic, 8, "matrix magic");
  if (std::memcmp(magic, kMatrixMagic, 8) != 0) {
    fail(ErrorCode::bad_format, "not a matrix file (bad magic bytes)");
  }
  const std::uint32_t version = detail::read_u32(in, "matrix version");
  if (version != kMatrixFormatVersion) {
    fail(ErrorCode::version_mismatch,
         "unsupported matrix format version " + std::to_string(version));
  }
  const std::uint64_t rows = detail::read_u64(in, "matrix rows");
  const std::uint64_t cols = detail::read_u64(in, "matrix cols");
  constexpr std::uint64_t kMaxElements = 1ull << 34;  // 128 GiB of doubles
  if (cols != 0 && rows > kMaxElements / cols) {
    fail(ErrorCode::bad_format, "matrix header declares an implausible size");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::uint64_t r = 0; r < rows; ++r) {
    for (std::uint64_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          detail::read_f64(in, "matrix data");
    }
  }
  return m;
}

void save_matrix(const Matrix& m, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_matrix_record(out, m);
  out.flush();
  if (!out) fail(ErrorCode::io_failure, "write failed: " + path.string());
}

Matrix load_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  char head[8] = {};
  in.read(head, 8);
  const auto got = in.gcount();
  in.clear();
  in.seekg(0);
  if (got == 8 && std::memcmp(head, kMatrixMagic, 8) == 0) {
    return read_matrix_record(in);
  }
  // Fall back to comma-separated text.
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::istringstream lines(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = line.find(',', pos);
      const std::string tok =
          line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        fail(ErrorCode::bad_format, path.string() + ":" + std::to_string(line_no) +
                                        ": not a number: '" + tok + "'");
      }
      while (used < tok.size() && (tok[used] == ' ' || tok[used] == '\t')) ++used;
      if (used != tok.size()) {
        fail(ErrorCode::bad_format, path.string() + ":" + std::to_string(line_no) +
                                        ": trailing junk in '" + tok + "'");
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(ErrorCode::bad_format,
           path.string() + ":" + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    fail(ErrorCode::bad_format, path.string() + ": empty matrix file");
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  return m;
}

void save_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
  out.flush();
  if (!out) fail(ErrorCode::io_failure, "write failed: " + path.string());
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
  return load_matrix(path);
}

void write_trace_csv(const std::vector<double>& trace,
                     const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "iteration,objective\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << (i + 1) << ',' << format_double(trace[i]) << '\n';
  }
  out.flush();
  if (!out) fail(ErrorCode::io_failure, "write failed: " + path.string());
}

}  // namespace xmh
