#pragma once

#include <cstdint>
#include <vector>

#include "xmh/common.hpp"

namespace xmh {

/// Number of disagreeing positions between two +-1 rows. Equals
/// (length - dot(a, b)) / 2.
int hamming_distance(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                     const Eigen::Ref<const Eigen::RowVectorXd>& b);

// Bit-packed +-1 codes: +1 maps to a set bit, -1 to a clear bit. Bit j of a
// row lives in word j/64 at position j%64. Padding bits in the last word are
// zero so XOR/popcount never sees them. pack followed by unpack is the
// identity on valid +-1 matrices.
class PackedCodes {
 public:
  PackedCodes() = default;

  static PackedCodes pack(const CodeMatrix& codes);
  CodeMatrix unpack() const;

  Eigen::Index rows() const { return rows_; }
  Eigen::Index bits() const { return bits_; }
  std::size_t words_per_row() const { return words_per_row_; }

  const std::uint64_t* row(Eigen::Index r) const {
    return data_.data() + static_cast<std::size_t>(r) * words_per_row_;
  }

  /// popcount(row(a) XOR other.row(b)); code lengths must match.
  int distance(Eigen::Index a, const PackedCodes& other, Eigen::Index b) const;

 private:
  Eigen::Index rows_ = 0;
  Eigen::Index bits_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> data_;
};

}  // namespace xmh
