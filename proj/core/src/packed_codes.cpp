#include "xmh/packed_codes.hpp"

#include <bit>
#include <string>

#include "xmh/error.hpp"

namespace xmh {

int hamming_distance(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                     const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::dimension_mismatch, "code lengths differ");
  }
  int count = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) ++count;
  }
  return count;
}

PackedCodes PackedCodes::pack(const CodeMatrix& codes) {
  if (!is_sign_matrix(codes)) {
    fail(ErrorCode::invalid_argument, "pack expects a +-1 matrix");
  }
  PackedCodes p;
  p.rows_ = codes.rows();
  p.bits_ = codes.cols();
  p.words_per_row_ = static_cast<std::size_t>((codes.cols() + 63) / 64);
  p.data_.assign(static_cast<std::size_t>(p.rows_) * p.words_per_row_, 0);
  for (Eigen::Index r = 0; r < p.rows_; ++r) {
    std::uint64_t* row = p.data_.data() + static_cast<std::size_t>(r) * p.words_per_row_;
    for (Eigen::Index j = 0; j < p.bits_; ++j) {
      if (codes(r, j) > 0.0) {
        row[static_cast<std::size_t>(j) / 64] |= 1ull << (j % 64);
      }
    }
  }
  return p;
}

CodeMatrix PackedCodes::unpack() const {
  CodeMatrix codes(rows_, bits_);
  for (Eigen::Index r = 0; r < rows_; ++r) {
    const std::uint64_t* w = row(r);
    for (Eigen::Index j = 0; j < bits_; ++j) {
      codes(r, j) = (w[static_cast<std::size_t>(j) / 64] >> (j % 64)) & 1u ? 1.0 : -1.0;
    }
  }
  return codes;
}

int PackedCodes::distance(Eigen::Index a, const PackedCodes& other,
                          Eigen::Index b) const {
  if (bits_ != other.bits_) {
    fail(ErrorCode::dimension_mismatch,
         "code lengths differ: " + std::to_string(bits_) + " vs " +
             std::to_string(other.bits_));
  }
  const std::uint64_t* ra = row(a);
  const std::uint64_t* rb = other.row(b);
  int count = 0;
  for (std::size_t w = 0; w < words_per_row_; ++w) {
    count += std::popcount(ra[w] ^ rb[w]);
  }
  return count;
}

}  // namespace xmh
