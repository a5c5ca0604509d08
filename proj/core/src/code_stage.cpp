#include "xmh/code_stage.hpp"

#include <cmath>
#include <string>

#include "xmh/error.hpp"
#include "xmh/label_stage.hpp"

namespace xmh {

namespace {

struct CodeDims {
  Eigen::Index n_l = 0;
  Eigen::Index n_u = 0;
};

CodeDims check_code_dims(const ModalityList& X_l, const ModalityList& X_u,
                         const SignLabelMatrix& L_l, const SignLabelMatrix& L_u,
                         const ProjectionSet& proj, const CodeMatrix& B_l,
                         const CodeMatrix& B_u) {
  if (X_l.size() != proj.W.size() || X_u.size() != proj.W.size()) {
    fail(ErrorCode::dimension_mismatch, "modality count != projection count");
  }
  CodeDims dims{L_l.rows(), L_u.rows()};
  const Eigen::Index width = proj.width();
  if (B_l.rows() != dims.n_l || B_l.cols() != width) {
    fail(ErrorCode::dimension_mismatch, "B_l shape mismatch");
  }
  if (B_u.rows() != dims.n_u || (dims.n_u > 0 && B_u.cols() != width)) {
    fail(ErrorCode::dimension_mismatch, "B_u shape mismatch");
  }
  if (L_l.cols() != proj.V.rows() || (dims.n_u > 0 && L_u.cols() != proj.V.rows())) {
    fail(ErrorCode::dimension_mismatch, "label width != V rows");
  }
  for (std::size_t i = 0; i < X_l.size(); ++i) {
    if (X_l[i].rows() != dims.n_l || X_u[i].rows() != dims.n_u) {
      fail(ErrorCode::dimension_mismatch,
           "modality " + std::to_string(i) + " row counts disagree with labels");
    }
    if (X_l[i].cols() != proj.W[i].rows() ||
        (dims.n_u > 0 && X_u[i].cols() != proj.W[i].rows())) {
      fail(ErrorCode::dimension_mismatch,
           "modality " + std::to_string(i) + " dim != W rows");
    }
  }
  return dims;
}

double ortho_penalty(const Matrix& m) {
  const Matrix g = m.transpose() * m;
  return (g - Matrix::Identity(g.rows(), g.cols())).squaredNorm();
}

Matrix ortho_grad(const Matrix& m, double gamma) {
  const Matrix gram = m.transpose() * m;
  return 2.0 * gamma * m * (gram - Matrix::Identity(gram.rows(), gram.cols()));
}

}  // namespace

double objective_code(const ModalityList& X_l, const ModalityList& X_u,
                      const SignLabelMatrix& L_l, const SignLabelMatrix& L_u,
                      const ProjectionSet& proj, const CodeMatrix& B_l,
                      const CodeMatrix& B_u, const Hyperparameters& hp) {
  const CodeDims dims = check_code_dims(X_l, X_u, L_l, L_u, proj, B_l, B_u);
  const double beta_l = hp.resolved_beta_l(dims.n_l, dims.n_u);
  const double beta_u = hp.resolved_beta_u(dims.n_l, dims.n_u);

  // Term order mirrors the label-stage objective so the n_u = 0, beta_l = 1
  // case degenerates to it exactly, including floating-point rounding.
  double labeled = 0.0;
  for (std::size_t i = 0; i < X_l.size(); ++i) {
    labeled += 0.5 * (B_l - X_l[i] * proj.W[i]).squaredNorm();
  }
  labeled += 0.5 * hp.alpha * (B_l - L_l * proj.V).squaredNorm();
  double e = beta_l * labeled;

  if (dims.n_u > 0) {
    double unlabeled = 0.0;
    for (std::size_t i = 0; i < X_u.size(); ++i) {
      unlabeled += 0.5 * (B_u - X_u[i] * proj.W[i]).squaredNorm();
    }
    unlabeled += 0.5 * hp.alpha * (B_u - L_u * proj.V).squaredNorm();
    e += beta_u * unlabeled;
  }

  double reg = ortho_penalty(proj.V);
  for (const Matrix& w : proj.W) reg += ortho_penalty(w);
  return e + 0.5 * hp.gamma * reg;
}

Matrix grad_W_code(const Matrix& X_l_i, const Matrix& X_u_i,
                   const CodeMatrix& B_l, const CodeMatrix& B_u,
                   const Matrix& W_i, const Hyperparameters& hp) {
  if (X_l_i.rows() != B_l.rows() || X_l_i.cols() != W_i.rows() ||
      W_i.cols() != B_l.cols()) {
    fail(ErrorCode::dimension_mismatch, "grad_W_code labeled shapes disagree");
  }
  if (X_u_i.rows() != B_u.rows()) {
    fail(ErrorCode::dimension_mismatch, "grad_W_code unlabeled shapes disagree");
  }
  const Eigen::Index n_l = X_l_i.rows();
  const Eigen::Index n_u = X_u_i.rows();
  const double beta_l = hp.resolved_beta_l(n_l, n_u);
  const double beta_u = hp.resolved_beta_u(n_l, n_u);

  Matrix g = (beta_l * (1.0 / static_cast<double>(n_l))) *
             (X_l_i.transpose() * (X_l_i * W_i - B_l));
  if (n_u > 0) {
    g += (beta_u * (1.0 / static_cast<double>(n_u))) *
         (X_u_i.transpose() * (X_u_i * W_i - B_u));
  }
  return g + ortho_grad(W_i, hp.gamma);
}

Matrix grad_V_code(const SignLabelMatrix& L_l, const SignLabelMatrix& L_u,
                   const CodeMatrix& B_l, const CodeMatrix& B_u,
                   const Matrix& V, const Hyperparameters& hp) {
  if (L_l.rows() != B_l.rows() || L_l.cols() != V.rows() ||
      V.cols() != B_l.cols()) {
    fail(ErrorCode::dimension_mismatch, "grad_V_code labeled shapes disagree");
  }
  if (L_u.rows() != B_u.rows()) {
    fail(ErrorCode::dimension_mismatch, "grad_V_code unlabeled shapes disagree");
  }
  const Eigen::Index n_l = L_l.rows();
  const Eigen::Index n_u = L_u.rows();
  const double beta_l = hp.resolved_beta_l(n_l, n_u);
  const double beta_u = hp.resolved_beta_u(n_l, n_u);

  Matrix g = (hp.alpha * beta_l * (1.0 / static_cast<double>(n_l))) *
             (L_l.transpose() * (L_l * V - B_l));
  if (n_u > 0) {
    g += (hp.alpha * beta_u * (1.0 / static_cast<double>(n_u))) *
         (L_u.transpose() * (L_u * V - B_u));
  }
  return g + ortho_grad(V, hp.gamma);
}

std::pair<CodeMatrix, CodeMatrix> update_B(const ModalityList& X_l,
                                           const ModalityList& X_u,
                                           const SignLabelMatrix& L_l,
                                           const SignLabelMatrix& L_u,
                                           const ProjectionSet& proj,
                                           const Hyperparameters& hp) {
  if (X_l.size() != proj.W.size() || X_u.size() != proj.W.size()) {
    fail(ErrorCode::dimension_mismatch, "modality count != projection count");
  }
  Matrix pre_l = hp.alpha * (L_l * proj.V);
  for (std::size_t i = 0; i < X_l.size(); ++i) {
    pre_l += X_l[i] * proj.W[i];
  }
  CodeMatrix B_l = sign_matrix(pre_l);

  const Eigen::Index n_u = L_u.rows();
  CodeMatrix B_u(0, proj.width());
  if (n_u > 0) {
    Matrix pre_u = hp.alpha * (L_u * proj.V);
    for (std::size_t i = 0; i < X_u.size(); ++i) {
      pre_u += X_u[i] * proj.W[i];
    }
    B_u = sign_matrix(pre_u);
  }
  return {std::move(B_l), std::move(B_u)};
}

CodeStageResult train_code_stage(const ModalityList& X_l,
                                 const ModalityList& X_u,
                                 const SignLabelMatrix& L_l,
                                 const SignLabelMatrix& L_u,
                                 Eigen::Index code_length,
                                 const Hyperparameters& hp) {
  hp.validate();
  if (L_l.rows() < 1) {
    fail(ErrorCode::invalid_argument, "code stage needs at least one labeled row");
  }
  if (code_length < 1) {
    fail(ErrorCode::invalid_argument, "code length must be >= 1");
  }
  std::vector<Eigen::Index> dims;
  dims.reserve(X_l.size());
  for (const Matrix& x : X_l) dims.push_back(x.cols());

  CodeStageResult result;
  result.projections =
      init_projections(dims, L_l.cols(), code_length, hp.seed, Stage::code);

  double prev = 0.0;
  for (std::uint32_t iter = 1; iter <= hp.max_iter_hash; ++iter) {
    auto [B_l, B_u] = update_B(X_l, X_u, L_l, L_u, result.projections, hp);
    result.codes_labeled = std::move(B_l);
    result.codes_unlabeled = std::move(B_u);

    result.projections.V -=
        hp.step * grad_V_code(L_l, L_u, result.codes_labeled,
                              result.codes_unlabeled, result.projections.V, hp);
    for (std::size_t i = 0; i < X_l.size(); ++i) {
      result.projections.W[i] -=
          hp.step * grad_W_code(X_l[i], X_u[i], result.codes_labeled,
                                result.codes_unlabeled,
                                result.projections.W[i], hp);
    }
    const double e =
        objective_code(X_l, X_u, L_l, L_u, result.projections,
                       result.codes_labeled, result.codes_unlabeled, hp);
    if (!std::isfinite(e)) {
      fail(ErrorCode::divergence,
           "code stage objective is not finite at iteration " +
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

CodeMatrix encode_out_of_sample(const Matrix& X_centered, std::size_t modality,
                                const TrainedModel& model) {
  if (modality >= model.projections.W.size()) {
    fail(ErrorCode::invalid_argument,
         "modality index " + std::to_string(modality) + " out of range (K=" +
             std::to_string(model.projections.W.size()) + ")");
  }
  const Matrix& W = model.projections.W[modality];
  if (X_centered.cols() != W.rows()) {
    fail(ErrorCode::dimension_mismatch,
         "query dim " + std::to_string(X_centered.cols()) +
             " != modality dim " + std::to_string(W.rows()));
  }
  return sign_matrix(X_centered * W);
}

}  // namespace xmh
