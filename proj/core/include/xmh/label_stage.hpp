#pragma once

#include <cstdint>
#include <vector>

#include "xmh/types.hpp"

namespace xmh {

// First training stage: learn per-modality projections W_i and a label
// projection V over the labeled subset by alternating a closed-form sign
// update of the temporary code matrix H with fixed-step gradient descent
// on the projections.
//
// Objective (reported by objective_label, H entries in {-1,+1}):
//   E = 1/2 sum_i |H - X_i W_i|_F^2 + alpha/2 |H - L V|_F^2
//     + gamma/2 (sum_i |W_i^T W_i - I|_F^2 + |V^T V - I|_F^2)
//
// The gradients divide each data-fidelity term by the row count so one step
// size works across dataset sizes; the orthogonality term uses its exact
// derivative 2*gamma*W(W^T W - I).

/// Seeded Gaussian init; every column is scaled to unit Euclidean norm.
/// label_rows is the row count of V (equal to width in the label stage,
/// the label width in the code stage).
ProjectionSet init_projections(const std::vector<Eigen::Index>& dims,
                               Eigen::Index label_rows, Eigen::Index width,
                               std::uint64_t seed, Stage stage);

double objective_label(const ModalityList& X, const SignLabelMatrix& L,
                       const ProjectionSet& proj, const CodeMatrix& H,
                       const Hyperparameters& hp);

Matrix grad_W_label(const Matrix& X_i, const CodeMatrix& H, const Matrix& W_i,
                    const Hyperparameters& hp);

Matrix grad_V_label(const SignLabelMatrix& L, const CodeMatrix& H,
                    const Matrix& V, const Hyperparameters& hp);

/// H = sign(sum_i X_i W_i + alpha L V); the elementwise minimizer of the
/// objective over H, with sign(0) = +1.
CodeMatrix update_H_label(const ModalityList& X, const std::vector<Matrix>& W,
                          const SignLabelMatrix& L, const Matrix& V,
                          const Hyperparameters& hp);

struct LabelStageResult {
  ProjectionSet projections;
  CodeMatrix codes;  // final H
  std::vector<double> objective_trace;  // one value per iteration
  std::uint32_t iterations = 0;
};

/// Runs the alternating loop until the relative objective change drops
/// below hp.tol or hp.max_iter_hash iterations. Throws
/// Error(ErrorCode::divergence) if the objective stops being finite.
LabelStageResult train_label_stage(const ModalityList& X,
                                   const SignLabelMatrix& L,
                                   const Hyperparameters& hp);

}  // namespace xmh
