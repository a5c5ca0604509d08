#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xmh/common.hpp"

namespace xmh {

enum class Stage { label, code };

/// Per-modality projections plus the label projection for one stage.
/// Column counts all equal the stage's code width; V is square in the
/// label stage.
struct ProjectionSet {
  Stage stage = Stage::label;
  std::vector<Matrix> W;  // W[i]: d_i x width
  Matrix V;               // l x width

  Eigen::Index width() const { return V.cols(); }
  std::size_t modalities() const { return W.size(); }

  void validate() const;  // throws on inconsistent column counts
};

bool operator==(const ProjectionSet& a, const ProjectionSet& b);

struct Hyperparameters {
  double alpha = 100.0;  // label-agreement weight
  double gamma = 0.01;   // orthogonality weight
  // Labeled/unlabeled weights for the code stage. Unset means "derive from
  // the split": beta_l = n_u/n, beta_u = 0.1*n_l/n (beta_l = 1 when n_u = 0).
  std::optional<double> beta_l;
  std::optional<double> beta_u;
  double step = 0.001;      // gradient step
  double fuzzifier = 2.0;   // m > 1
  std::uint32_t max_iter_hash = 400;
  std::uint32_t max_iter_fuzzy = 15;
  std::uint64_t seed = 1;
  double tol = 1e-6;        // relative objective-change stopping threshold

  // alpha = 0 and step = 0 are permitted (label-free ablation, no-op
  // descent); everything else must be strictly positive, fuzzifier > 1.
  void validate() const;

  double resolved_beta_l(Eigen::Index n_labeled, Eigen::Index n_unlabeled) const;
  double resolved_beta_u(Eigen::Index n_labeled, Eigen::Index n_unlabeled) const;
};

bool operator==(const Hyperparameters& a, const Hyperparameters& b);

/// Everything needed to encode queries and search the training database.
/// `codes` rows follow the original input order of the training set.
struct TrainedModel {
  ProjectionSet projections;          // code stage: W[i] d_i x c, V l x c
  std::vector<Vector> feature_means;  // per-modality training column means
  CodeMatrix codes;                   // unified database codes, n x c
  std::uint32_t label_width = 0;      // l
  std::uint32_t code_length = 0;      // c
  Hyperparameters hp;

  std::size_t modalities() const { return projections.W.size(); }

  void validate() const;  // throws Error(inconsistent_model)
};

bool operator==(const TrainedModel& a, const TrainedModel& b);

}  // namespace xmh
