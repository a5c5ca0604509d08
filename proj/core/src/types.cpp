#include "xmh/types.hpp"

#include <string>

#include "xmh/error.hpp"

namespace xmh {

void ProjectionSet::validate() const {
  const Eigen::Index w = V.cols();
  if (w <= 0) fail(ErrorCode::dimension_mismatch, "projection width must be positive");
  if (stage == Stage::label && V.rows() != V.cols()) {
    fail(ErrorCode::dimension_mismatch, "label-stage V must be square");
  }
  for (std::size_t i = 0; i < W.size(); ++i) {
    if (W[i].cols() != w) {
      fail(ErrorCode::dimension_mismatch,
           "projection " + std::to_string(i) + " width " +
               std::to_string(W[i].cols()) + " != " + std::to_string(w));
    }
  }
}

bool operator==(const ProjectionSet& a, const ProjectionSet& b) {
  if (a.stage != b.stage || a.W.size() != b.W.size()) return false;
  for (std::size_t i = 0; i < a.W.size(); ++i) {
    if (a.W[i].rows() != b.W[i].rows() || a.W[i].cols() != b.W[i].cols() ||
        a.W[i] != b.W[i]) {
      return false;
    }
  }
  return a.V.rows() == b.V.rows() && a.V.cols() == b.V.cols() && a.V == b.V;
}

void Hyperparameters::validate() const {
  if (alpha < 0.0) fail(ErrorCode::invalid_argument, "alpha must be >= 0");
  if (gamma <= 0.0) fail(ErrorCode::invalid_argument, "gamma must be > 0");
  if (step < 0.0) fail(ErrorCode::invalid_argument, "step must be >= 0");
  if (fuzzifier <= 1.0) fail(ErrorCode::invalid_argument, "fuzzifier must be > 1");
  if (max_iter_hash < 1) fail(ErrorCode::invalid_argument, "max_iter_hash must be >= 1");
  if (max_iter_fuzzy < 1) fail(ErrorCode::invalid_argument, "max_iter_fuzzy must be >= 1");
  if (tol <= 0.0) fail(ErrorCode::invalid_argument, "tol must be > 0");
  if (beta_l && *beta_l <= 0.0) fail(ErrorCode::invalid_argument, "beta_l must be > 0");
  if (beta_u && *beta_u <= 0.0) fail(ErrorCode::invalid_argument, "beta_u must be > 0");
}

double Hyperparameters::resolved_beta_l(Eigen::Index n_labeled,
                                        Eigen::Index n_unlabeled) const {
  if (beta_l) return *beta_l;
  if (n_unlabeled == 0) return 1.0;  // n_u/n would zero the only data term
  const double n = static_cast<double>(n_labeled + n_unlabeled);
  return static_cast<double>(n_unlabeled) / n;
}

double Hyperparameters::resolved_beta_u(Eigen::Index n_labeled,
                                        Eigen::Index n_unlabeled) const {
  if (beta_u) return *beta_u;
  if (n_unlabeled == 0) return 0.0;
  const double n = static_cast<double>(n_labeled + n_unlabeled);
  return 0.1 * static_cast<double>(n_labeled) / n;
}

bool operator==(const Hyperparameters& a, const Hyperparameters& b) {
  return a.alpha == b.alpha && a.gamma == b.gamma && a.beta_l == b.beta_l &&
         a.beta_u == b.beta_u && a.step == b.step &&
         a.fuzzifier == b.fuzzifier && a.max_iter_hash == b.max_iter_hash &&
         a.max_iter_fuzzy == b.max_iter_fuzzy && a.seed == b.seed &&
         a.tol == b.tol;
}

void TrainedModel::validate() const {
  if (projections.stage != Stage::code) {
    fail(ErrorCode::inconsistent_model, "model must hold code-stage projections");
  }
  projections.validate();
  if (projections.width() != static_cast<Eigen::Index>(code_length)) {
    fail(ErrorCode::inconsistent_model, "projection width != code length");
  }
  if (projections.V.rows() != static_cast<Eigen::Index>(label_width)) {
    fail(ErrorCode::inconsistent_model, "label projection rows != label width");
  }
  if (feature_means.size() != projections.W.size()) {
    fail(ErrorCode::inconsistent_model, "one mean vector per modality required");
  }
  for (std::size_t i = 0; i < feature_means.size(); ++i) {
    if (feature_means[i].size() != projections.W[i].rows()) {
      fail(ErrorCode::inconsistent_model,
           "mean vector " + std::to_string(i) + " does not match W rows");
    }
  }
  if (codes.cols() != static_cast<Eigen::Index>(code_length)) {
    fail(ErrorCode::inconsistent_model, "database codes width != code length");
  }
  if (!is_sign_matrix(codes)) {
    fail(ErrorCode::inconsistent_model, "database codes must be +-1 valued");
  }
}

bool operator==(const TrainedModel& a, const TrainedModel& b) {
  if (!(a.projections == b.projections)) return false;
  if (a.feature_means.size() != b.feature_means.size()) return false;
  for (std::size_t i = 0; i < a.feature_means.size(); ++i) {
    if (a.feature_means[i].size() != b.feature_means[i].size() ||
        a.feature_means[i] != b.feature_means[i]) {
      return false;
    }
  }
  return a.codes.rows() == b.codes.rows() && a.codes.cols() == b.codes.cols() &&
         a.codes == b.codes && a.label_width == b.label_width &&
         a.code_length == b.code_length && a.hp == b.hp;
}

}  // namespace xmh
