#pragma once

#include <vector>

#include "xmh/types.hpp"

namespace xmh {

// Second training stage: estimate a real-valued label matrix L_u for the
// unlabeled rows from the label-stage projections. Each modality proposes
// candidate codes H_i = sign(X_i W_i); a fuzzy membership p_i(r) weighs how
// well modality i explains row r, and L_u is the weighted least-squares fit
// of the candidates through V. Memberships and labels alternate, each step
// being the exact minimizer of
//   E = sum_i sum_r p_i(r)^m |L_u(r,:) V - H_i(r,:)|^2
// given the other block, so E never increases.

/// Per-modality membership vectors over the unlabeled rows.
/// memberships(i, r) is modality i's weight for row r; each column lies on
/// the probability simplex.
struct MembershipState {
  Matrix memberships;  // K x n_u
  double fuzzifier = 2.0;

  std::size_t modalities() const {
    return static_cast<std::size_t>(memberships.rows());
  }
  Eigen::Index items() const { return memberships.cols(); }

  /// Verifies the simplex invariant (columns sum to 1 within 1e-9,
  /// entries in [0,1]); throws Error(ErrorCode::check_failed) otherwise.
  void verify_simplex() const;
};

/// H_i = sign(X_i W_i) per modality, sign(0) = +1.
std::vector<CodeMatrix> candidate_codes(const ModalityList& X_u,
                                        const ProjectionSet& label_proj);

double fuzzy_objective(const SignLabelMatrix& L_u, const Matrix& V,
                       const std::vector<CodeMatrix>& H_u,
                       const MembershipState& memberships);

/// Closed-form simplex weights for one row given the squared distances d_i:
///   p_i = 1 / sum_k (d_i / d_k)^(1/(m-1)),
/// the minimizer of sum_i p_i^m d_i subject to sum p_i = 1, p_i >= 0.
/// Distances <= 1e-12 split membership uniformly among the zero-distance
/// entries and zero the rest.
std::vector<double> membership_row(const std::vector<double>& distances,
                                   double fuzzifier);

/// Membership update over all rows, with d_i(r) = |L_u(r,:) V - H_i(r,:)|^2.
MembershipState update_memberships(const SignLabelMatrix& L_u, const Matrix& V,
                                   const std::vector<CodeMatrix>& H_u,
                                   double fuzzifier);

/// Stationary point of the objective in L_u:
///   L_u = (sum_i P_i^m)^-1 (sum_i P_i^m H_i) V^T (V V^T)^-1.
/// V must be square with condition number below kMaxConditionNumber.
SignLabelMatrix update_estimated_labels(const std::vector<CodeMatrix>& H_u,
                                        const MembershipState& memberships,
                                        const Matrix& V);

struct FuzzyResult {
  SignLabelMatrix labels;  // L_u, real-valued
  MembershipState memberships;
  std::vector<double> objective_trace;  // value after each iteration
};

/// Runs the alternation for hp.max_iter_fuzzy iterations starting from
/// uniform memberships and L_u = H_1 (the first modality's candidates).
/// The objective trace is verified to be non-increasing.
FuzzyResult estimate_labels(const ModalityList& X_u,
                            const ProjectionSet& label_proj,
                            const Hyperparameters& hp);

}  // namespace xmh
