#pragma once

#include <Eigen/Dense>
#include <vector>

namespace xmh {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Row-major semantics throughout: one item per row, one feature per column.
// ModalityMatrix holds one modality's features, SignLabelMatrix holds +-1
// ground-truth labels (or real-valued estimates), CodeMatrix holds +-1 codes.
using ModalityMatrix = Matrix;
using SignLabelMatrix = Matrix;
using CodeMatrix = Matrix;

using ModalityList = std::vector<Matrix>;

/// Sign with the fixed tie rule sign(0) = +1.
inline double sign_pm1(double v) { return v < 0.0 ? -1.0 : 1.0; }

inline Matrix sign_matrix(const Matrix& m) {
  return m.unaryExpr([](double v) { return v < 0.0 ? -1.0 : 1.0; });
}

/// True when every entry is exactly -1 or +1.
bool is_sign_matrix(const Matrix& m);

/// True when every entry is exactly 0 or 1.
bool is_multi_hot(const Matrix& m);

/// Ratio of largest to smallest singular value (inf for rank-deficient input).
double condition_number(const Matrix& m);

/// Condition numbers above this are treated as singular.
inline constexpr double kMaxConditionNumber = 1e12;

}  // namespace xmh
