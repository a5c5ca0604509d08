#include "xmh/label_stage.hpp"

#include <cmath>
#include <string>

#include "xmh/error.hpp"
#include "xmh/rng.hpp"

namespace xmh {

namespace {

void check_label_dims(const ModalityList& X, const SignLabelMatrix& L,
                      const ProjectionSet& proj, const CodeMatrix& H) {
  if (X.size() != proj.W.size()) {
    fail(ErrorCode::dimension_mismatch, "modality count != projection count");
  }
  const Eigen::Index n = L.rows();
  const Eigen::Index width = proj.width();
  if (H.rows() != n || H.cols() != width) {
    fail(ErrorCode::dimension_mismatch, "H shape does not match labels/width");
  }
  if (L.cols() != proj.V.rows()) {
    fail(ErrorCode::dimension_mismatch, "label width != V rows");
  }
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].rows() != n) {
      fail(ErrorCode::dimension_mismatch,
           "modality " + std::to_string(i) + " row count != label rows");
    }
    if (X[i].cols() != proj.W[i].rows()) {
      fail(ErrorCode::dimension_mismatch,
           "modality " + std::to_string(i) + " dim != W rows");
    }
  }
}

double ortho_penalty(const Matrix& m) {
  const Matrix g = m.transpose() * m;
  return (g - Matrix::Identity(g.rows(), g.cols())).squaredNorm();
}

}  // namespace

ProjectionSet init_projections(const std::vector<Eigen::Index>& dims,
                               Eigen::Index label_rows, Eigen::Index width,
                               std::uint64_t seed, Stage stage) {
  if (width <= 0) fail(ErrorCode::invalid_argument, "width must be positive");
  if (label_rows <= 0) fail(ErrorCode::invalid_argument, "label width must be positive");
  if (stage == Stage::label && label_rows != width) {
    fail(ErrorCode::invalid_argument, "label-stage V must be square");
  }
  for (const Eigen::Index d : dims) {
    if (d <= 0) fail(ErrorCode::invalid_argument, "modality dim must be positive");
  }
  Rng rng(seed);
  auto draw = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = rng.normal();
      }
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double norm = m.col(c).norm();
      if (norm > 0.0) m.col(c) /= norm;
    }
    return m;
  };

  ProjectionSet proj;
  proj.stage = stage;
  proj.W.reserve(dims.size());
  for (const Eigen::Index d : dims) {
    proj.W.push_back(draw(d, width));
  }
  proj.V = draw(label_rows, width);
  return proj;
}

double objective_label(const ModalityList& X, const SignLabelMatrix& L,
                       const ProjectionSet& proj, const CodeMatrix& H,
                       const Hyperparameters& hp) {
  check_label_dims(X, L, proj, H);
  double e = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    e += 0.5 * (H - X[i] * proj.W[i]).squaredNorm();
  }
  e += 0.5 * hp.alpha * (H - L * proj.V).squaredNorm();
  double reg = ortho_penalty(proj.V);
  for (const Matrix& w : proj.W) reg += ortho_penalty(w);
  e += 0.5 * hp.gamma * reg;
  return e;
}

Matrix grad_W_label(const Matrix& X_i, const CodeMatrix& H, const Matrix& W_i,
                    const Hyperparameters& hp) {
  if (X_i.rows() != H.rows() || X_i.cols() != W_i.rows() ||
      W_i.cols() != H.cols()) {
    fail(ErrorCode::dimension_mismatch, "grad_W_label shapes disagree");
  }
  const double inv_n = 1.0 / static_cast<double>(X_i.rows());
  const Matrix gram = W_i.transpose() * W_i;
  return inv_n * (X_i.transpose() * (X_i * W_i - H)) +
         2.0 * hp.gamma * W_i * (gram - Matrix::Identity(gram.rows(), gram.cols()));
}

Matrix grad_V_label(const SignLabelMatrix& L, const CodeMatrix& H,
                    const Matrix& V, const Hyperparameters& hp) {
  if (L.rows() != H.rows() || L.cols() != V.rows() || V.cols() != H.cols()) {
    fail(ErrorCode::dimension_mismatch, "grad_V_label shapes disagree");
  }
  const double inv_n = 1.0 / static_cast<double>(L.rows());
  const Matrix gram = V.transpose() * V;
  return hp.alpha * inv_n * (L.transpose() * (L * V - H)) +
         2.0 * hp.gamma * V * (gram - Matrix::Identity(gram.rows(), gram.cols()));
}

CodeMatrix update_H_label(const ModalityList& X, const std::vector<Matrix>& W,
                          const SignLabelMatrix& L, const Matrix& V,
                          const Hyperparameters& hp) {
  if (X.size() != W.size() || X.empty()) {
    fail(ErrorCode::dimension_mismatch, "modality count != projection count");
  }
  Matrix pre = hp.alpha * (L * V);
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].rows() != L.rows()) {
      fail(ErrorCode::dimension_mismatch, "modality rows != label rows");
    }
    pre += X[i] * W[i];
  }
  return sign_matrix(pre);
}

LabelStageResult train_label_stage(const ModalityList& X,
                                   const SignLabelMatrix& L,
                                   const Hyperparameters& hp) {
  hp.validate();
  if (L.rows() < 1) {
    fail(ErrorCode::invalid_argument, "label stage needs at least one labeled row");
  }
  std::vector<Eigen::Index> dims;
  dims.reserve(X.size());
  for (const Matrix& x : X) dims.push_back(x.cols());

  LabelStageResult result;
  result.projections =
      init_projections(dims, L.cols(), L.cols(), hp.seed, Stage::label);

  double prev = 0.0;
  for (std::uint32_t iter = 1; iter <= hp.max_iter_hash; ++iter) {
    result.codes =
        update_H_label(X, result.projections.W, L, result.projections.V, hp);
    result.projections.V -=
        hp.step * grad_V_label(L, result.codes, result.projections.V, hp);
    for (std::size_t i = 0; i < X.size(); ++i) {
      result.projections.W[i] -=
          hp.step * grad_W_label(X[i], result.codes, result.projections.W[i], hp);
    }
    const double e = objective_label(X, L, result.projections, result.codes, hp);
    if (!std::isfinite(e)) {
      fail(ErrorCode::divergence,
           "label stage objective is not finite at iteration " +
               std::to_string(iter));
    }
    result.objective_trace.push_back(e);
    result.iterations = iter;
    if (iter > 1) {
      const double rel = std::abs(e - prev) / std::max(prev, 1e-12);
      if (rel < hp.tol) break;
    }
    prev = e;
  }
  return result;
}

}  // namespace xmh
