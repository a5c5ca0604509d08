#pragma once

#include <cstdint>
#include <vector>

#include "xmh/common.hpp"

namespace xmh {

struct CenteredMatrix {
  Matrix centered;
  Vector mean;  // column means of the input, kept for out-of-sample centering
};

/// Subtracts per-column means.
CenteredMatrix zero_center(const Matrix& x);

/// Applies stored training means to new rows of the same modality.
Matrix center_with(const Matrix& x, const Vector& mean);

/// Maps a {0,1} multi-hot label matrix to the {-1,+1} convention used by
/// the training objectives. Every row must select at least one class.
SignLabelMatrix encode_labels(const Matrix& multi_hot);

struct ShuffleSplit {
  // Row r of the permuted data came from input row permutation[r]; the
  // labeled part is rows [0, labeled_count) of the permuted order.
  std::vector<std::size_t> permutation;
  ModalityList labeled_features;
  ModalityList unlabeled_features;
  Matrix labeled_labels;
  Matrix unlabeled_labels;

  Eigen::Index labeled_count() const { return labeled_labels.rows(); }
  Eigen::Index unlabeled_count() const { return unlabeled_labels.rows(); }
};

/// Applies one seeded permutation consistently to all modalities and the
/// label matrix, then takes the first ceil(fraction * n) rows as labeled.
ShuffleSplit shuffle_split(const ModalityList& features, const Matrix& labels,
                           double label_fraction, std::uint64_t seed);

}  // namespace xmh
