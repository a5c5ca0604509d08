#include "xmh/preprocess.hpp"

#include <cmath>
#include <string>

#include "xmh/error.hpp"
#include "xmh/rng.hpp"

namespace xmh {

CenteredMatrix zero_center(const Matrix& x) {
  if (x.rows() == 0 || x.cols() == 0) {
    fail(ErrorCode::dimension_mismatch, "cannot center an empty matrix");
  }
  CenteredMatrix result;
  result.mean = x.colwise().mean();
  result.centered = x.rowwise() - result.mean.transpose();
  return result;
}

Matrix center_with(const Matrix& x, const Vector& mean) {
  if (x.cols() != mean.size()) {
    fail(ErrorCode::dimension_mismatch,
         "feature dimension " + std::to_string(x.cols()) +
             " does not match mean of size " + std::to_string(mean.size()));
  }
  return x.rowwise() - mean.transpose();
}

SignLabelMatrix encode_labels(const Matrix& multi_hot) {
  SignLabelMatrix out(multi_hot.rows(), multi_hot.cols());
  for (Eigen::Index r = 0; r < multi_hot.rows(); ++r) {
    bool any = false;
    for (Eigen::Index c = 0; c < multi_hot.cols(); ++c) {
      const double v = multi_hot(r, c);
      if (v == 1.0) {
        out(r, c) = 1.0;
        any = true;
      } else if (v == 0.0) {
        out(r, c) = -1.0;
      } else {
        fail(ErrorCode::invalid_label,
             "label entry at (" + std::to_string(r) + "," + std::to_string(c) +
                 ") is " + std::to_string(v) + ", expected 0 or 1");
      }
    }
    if (!any) {
      fail(ErrorCode::invalid_label,
           "label row " + std::to_string(r) + " selects no class");
    }
  }
  return out;
}

ShuffleSplit shuffle_split(const ModalityList& features, const Matrix& labels,
                           double label_fraction, std::uint64_t seed) {
  if (features.empty()) {
    fail(ErrorCode::dimension_mismatch, "need at least one modality");
  }
  const Eigen::Index n = labels.rows();
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].rows() != n) {
      fail(ErrorCode::dimension_mismatch,
           "modality " + std::to_string(i) + " has " +
               std::to_string(features[i].rows()) + " rows, labels have " +
               std::to_string(n));
    }
  }
  if (!(label_fraction > 0.0 && label_fraction <= 1.0)) {
    fail(ErrorCode::invalid_argument, "label_fraction must lie in (0, 1]");
  }

  Rng rng(seed);
  ShuffleSplit split;
  split.permutation = rng.permutation(static_cast<std::size_t>(n));

  const Eigen::Index n_labeled = static_cast<Eigen::Index>(
      std::ceil(label_fraction * static_cast<double>(n)));
  const Eigen::Index n_unlabeled = n - n_labeled;

  auto take = [&](const Matrix& src, Eigen::Index offset, Eigen::Index count) {
    Matrix out(count, src.cols());
    for (Eigen::Index r = 0; r < count; ++r) {
      const std::size_t from = split.permutation[static_cast<std::size_t>(offset + r)];
      out.row(r) = src.row(static_cast<Eigen::Index>(from));
    }
    return out;
  };

  for (const Matrix& x : features) {
    split.labeled_features.push_back(take(x, 0, n_labeled));
    split.unlabeled_features.push_back(take(x, n_labeled, n_unlabeled));
  }
  split.labeled_labels = take(labels, 0, n_labeled);
  split.unlabeled_labels = take(labels, n_labeled, n_unlabeled);
  return split;
}

}  // namespace xmh
