#include "xmh/fuzzy_label.hpp"

#include <Eigen/LU>
#include <cmath>
#include <string>

#include "xmh/error.hpp"

namespace xmh {

namespace {

constexpr double kZeroDistance = 1e-12;

void check_fuzzy_dims(const SignLabelMatrix& L_u, const Matrix& V,
                      const std::vector<CodeMatrix>& H_u) {
  if (H_u.empty()) {
    fail(ErrorCode::dimension_mismatch, "need at least one candidate code matrix");
  }
  if (L_u.cols() != V.rows()) {
    fail(ErrorCode::dimension_mismatch, "label width != V rows");
  }
  for (std::size_t i = 0; i < H_u.size(); ++i) {
    if (H_u[i].rows() != L_u.rows() || H_u[i].cols() != V.cols()) {
      fail(ErrorCode::dimension_mismatch,
           "candidate codes " + std::to_string(i) + " shape mismatch");
    }
  }
}

// d_i(r) = squared norm of row r of (L_u V - H_i); the diagonal of D_i^T D_i.
Matrix squared_row_distances(const SignLabelMatrix& L_u, const Matrix& V,
                             const std::vector<CodeMatrix>& H_u) {
  const Matrix projected = L_u * V;
  Matrix d(static_cast<Eigen::Index>(H_u.size()), L_u.rows());
  for (std::size_t i = 0; i < H_u.size(); ++i) {
    d.row(static_cast<Eigen::Index>(i)) =
        (projected - H_u[i]).rowwise().squaredNorm().transpose();
  }
  return d;
}

}  // namespace

void MembershipState::verify_simplex() const {
  for (Eigen::Index r = 0; r < memberships.cols(); ++r) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < memberships.rows(); ++i) {
      const double p = memberships(i, r);
      if (!(p >= 0.0 && p <= 1.0 + 1e-12)) {
        fail(ErrorCode::check_failed,
             "membership out of [0,1] at row " + std::to_string(r));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      fail(ErrorCode::check_failed,
           "membership column " + std::to_string(r) + " sums to " +
               std::to_string(sum));
    }
  }
}

std::vector<CodeMatrix> candidate_codes(const ModalityList& X_u,
                                        const ProjectionSet& label_proj) {
  if (X_u.size() != label_proj.W.size()) {
    fail(ErrorCode::dimension_mismatch, "modality count != projection count");
  }
  std::vector<CodeMatrix> codes;
  codes.reserve(X_u.size());
  for (std::size_t i = 0; i < X_u.size(); ++i) {
    if (X_u[i].cols() != label_proj.W[i].rows()) {
      fail(ErrorCode::dimension_mismatch,
           "modality " + std::to_string(i) + " dim != W rows");
    }
    codes.push_back(sign_matrix(X_u[i] * label_proj.W[i]));
  }
  return codes;
}

double fuzzy_objective(const SignLabelMatrix& L_u, const Matrix& V,
                       const std::vector<CodeMatrix>& H_u,
                       const MembershipState& memberships) {
  check_fuzzy_dims(L_u, V, H_u);
  if (memberships.memberships.rows() != static_cast<Eigen::Index>(H_u.size()) ||
      memberships.memberships.cols() != L_u.rows()) {
    fail(ErrorCode::dimension_mismatch, "membership shape mismatch");
  }
  const Matrix d = squared_row_distances(L_u, V, H_u);
  const double m = memberships.fuzzifier;
  double e = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index r = 0; r < d.cols(); ++r) {
      e += std::pow(memberships.memberships(i, r), m) * d(i, r);
    }
  }
  return e;
}

std::vector<double> membership_row(const std::vector<double>& distances,
                                   double fuzzifier) {
  if (distances.empty()) {
    fail(ErrorCode::invalid_argument, "need at least one distance");
  }
  if (fuzzifier <= 1.0) {
    fail(ErrorCode::invalid_argument, "fuzzifier must be > 1");
  }
  const std::size_t K = distances.size();
  std::vector<double> p(K, 0.0);

  std::size_t zero_count = 0;
  for (const double d : distances) {
    if (d <= kZeroDistance) ++zero_count;
  }
  if (zero_count > 0) {
    // A candidate matches exactly; split membership among the exact ones.
    for (std::size_t i = 0; i < K; ++i) {
      p[i] = distances[i] <= kZeroDistance
                 ? 1.0 / static_cast<double>(zero_count)
                 : 0.0;
    }
    return p;
  }
  const double expo = 1.0 / (fuzzifier - 1.0);
  for (std::size_t i = 0; i < K; ++i) {
    double denom = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      denom += std::pow(distances[i] / distances[k], expo);
    }
    p[i] = 1.0 / denom;
  }
  return p;
}

MembershipState update_memberships(const SignLabelMatrix& L_u, const Matrix& V,
                                   const std::vector<CodeMatrix>& H_u,
                                   double fuzzifier) {
  check_fuzzy_dims(L_u, V, H_u);
  const Matrix d = squared_row_distances(L_u, V, H_u);
  const Eigen::Index K = d.rows();
  const Eigen::Index n = d.cols();

  MembershipState state;
  state.fuzzifier = fuzzifier;
  state.memberships.resize(K, n);
  std::vector<double> row(static_cast<std::size_t>(K));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index i = 0; i < K; ++i) {
      row[static_cast<std::size_t>(i)] = d(i, r);
    }
    const std::vector<double> p = membership_row(row, fuzzifier);
    for (Eigen::Index i = 0; i < K; ++i) {
      state.memberships(i, r) = p[static_cast<std::size_t>(i)];
    }
  }
  state.verify_simplex();
  return state;
}

SignLabelMatrix update_estimated_labels(const std::vector<CodeMatrix>& H_u,
                                        const MembershipState& memberships,
                                        const Matrix& V) {
  if (H_u.empty()) {
    fail(ErrorCode::dimension_mismatch, "need at least one candidate code matrix");
  }
  if (V.rows() != V.cols()) {
    fail(ErrorCode::dimension_mismatch, "V must be square to invert");
  }
  const Eigen::Index n = H_u.front().rows();
  const Eigen::Index width = V.cols();
  if (memberships.memberships.rows() != static_cast<Eigen::Index>(H_u.size()) ||
      memberships.memberships.cols() != n) {
    fail(ErrorCode::dimension_mismatch, "membership shape mismatch");
  }
  const double cond = condition_number(V);
  if (!(cond < kMaxConditionNumber)) {
    fail(ErrorCode::singular_matrix,
         "label projection condition number " + std::to_string(cond) +
             " exceeds " + std::to_string(kMaxConditionNumber));
  }

  const double m = memberships.fuzzifier;
  // Row r solves min sum_i p_i(r)^m |L(r,:) V - H_i(r,:)|^2: average the
  // candidates with weights p_i^m, then undo the V transform.
  Matrix weighted = Matrix::Zero(n, width);
  Vector total = Vector::Zero(n);
  for (std::size_t i = 0; i < H_u.size(); ++i) {
    const auto p = memberships.memberships.row(static_cast<Eigen::Index>(i));
    for (Eigen::Index r = 0; r < n; ++r) {
      const double w = std::pow(p(r), m);
      weighted.row(r) += w * H_u[i].row(r);
      total(r) += w;
    }
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    if (total(r) <= 0.0) {
      fail(ErrorCode::check_failed,
           "membership weights vanish at row " + std::to_string(r));
    }
    weighted.row(r) /= total(r);
  }

  const Matrix gram = V * V.transpose();
  return gram.lu().solve(V * weighted.transpose()).transpose();
}

FuzzyResult estimate_labels(const ModalityList& X_u,
                            const ProjectionSet& label_proj,
                            const Hyperparameters& hp) {
  hp.validate();
  if (X_u.empty() || X_u.front().rows() == 0) {
    fail(ErrorCode::invalid_argument, "no unlabeled rows to estimate");
  }
  const std::vector<CodeMatrix> H_u = candidate_codes(X_u, label_proj);
  const Eigen::Index K = static_cast<Eigen::Index>(H_u.size());
  const Eigen::Index n = H_u.front().rows();

  FuzzyResult result;
  result.memberships.fuzzifier = hp.fuzzifier;
  result.memberships.memberships =
      Matrix::Constant(K, n, 1.0 / static_cast<double>(K));
  result.labels = H_u.front();  // arbitrary candidate as the starting point

  double prev = fuzzy_objective(result.labels, label_proj.V, H_u, result.memberships);
  for (std::uint32_t iter = 1; iter <= hp.max_iter_fuzzy; ++iter) {
    result.memberships =
        update_memberships(result.labels, label_proj.V, H_u, hp.fuzzifier);
    result.labels =
        update_estimated_labels(H_u, result.memberships, label_proj.V);
    const double e =
        fuzzy_objective(result.labels, label_proj.V, H_u, result.memberships);
    // Both sub-updates minimize the objective exactly in their block, so the
    // alternation cannot increase it; a rise beyond fp slack is a bug.
    if (!(e <= prev + 1e-9) || !std::isfinite(e)) {
      fail(ErrorCode::check_failed,
           "label estimation objective rose at iteration " +
               std::to_string(iter) + " (" + std::to_string(prev) + " -> " +
               std::to_string(e) + ")");
    }
    result.objective_trace.push_back(e);
    prev = e;
  }
  return result;
}

}  // namespace xmh
