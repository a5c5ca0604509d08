#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "xmh/types.hpp"

namespace xmh {

// Final training stage: learn code-stage projections and the unified +-1
// code matrix from labeled rows (ground-truth labels L_l) and unlabeled rows
// (estimated labels L_u), weighted by beta_l and beta_u:
//   E = beta_l (1/2 sum_i |B_l - X_l_i W_i|^2 + alpha/2 |B_l - L_l V|^2)
//     + beta_u (1/2 sum_i |B_u - X_u_i W_i|^2 + alpha/2 |B_u - L_u V|^2)
//     + gamma/2 (sum_i |W_i^T W_i - I|^2 + |V^T V - I|^2)
// An empty unlabeled set drops the beta_u block entirely.
//
// Gradient normalization matches the label stage: labeled data terms divide
// by n_l, unlabeled by n_u, and the orthogonality derivative is exact.

double objective_code(const ModalityList& X_l, const ModalityList& X_u,
                      const SignLabelMatrix& L_l, const SignLabelMatrix& L_u,
                      const ProjectionSet& proj, const CodeMatrix& B_l,
                      const CodeMatrix& B_u, const Hyperparameters& hp);

Matrix grad_W_code(const Matrix& X_l_i, const Matrix& X_u_i,
                   const CodeMatrix& B_l, const CodeMatrix& B_u,
                   const Matrix& W_i, const Hyperparameters& hp);

Matrix grad_V_code(const SignLabelMatrix& L_l, const SignLabelMatrix& L_u,
                   const CodeMatrix& B_l, const CodeMatrix& B_u,
                   const Matrix& V, const Hyperparameters& hp);

/// B_l = sign(sum_i X_l_i W_i + alpha L_l V),
/// B_u = sign(sum_i X_u_i W_i + alpha L_u V); sign(0) = +1.
std::pair<CodeMatrix, CodeMatrix> update_B(const ModalityList& X_l,
                                           const ModalityList& X_u,
                                           const SignLabelMatrix& L_l,
                                           const SignLabelMatrix& L_u,
                                           const ProjectionSet& proj,
                                           const Hyperparameters& hp);

struct CodeStageResult {
  ProjectionSet projections;
  CodeMatrix codes_labeled;    // B_l, n_l x c
  CodeMatrix codes_unlabeled;  // B_u, n_u x c (0 x c when no unlabeled rows)
  std::vector<double> objective_trace;
  std::uint32_t iterations = 0;
};

/// Same alternation scheme as the label stage at code width `code_length`.
CodeStageResult train_code_stage(const ModalityList& X_l,
                                 const ModalityList& X_u,
                                 const SignLabelMatrix& L_l,
                                 const SignLabelMatrix& L_u,
                                 Eigen::Index code_length,
                                 const Hyperparameters& hp);

/// sign(X W_i) for already-centered query features of modality i. Center
/// queries with the model's stored means (center_with) before calling.
CodeMatrix encode_out_of_sample(const Matrix& X_centered, std::size_t modality,
                                const TrainedModel& model);

}  // namespace xmh
