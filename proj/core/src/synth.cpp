#include "xmh/synth.hpp"

#include <cmath>
#include <string>

#include "xmh/error.hpp"
#include "xmh/rng.hpp"

namespace xmh {

void SynthSpec::validate() const {
  if (classes < 1) fail(ErrorCode::invalid_argument, "need at least one class");
  if (items < classes) {
    fail(ErrorCode::invalid_argument, "need at least as many items as classes");
  }
  if (dims.empty()) fail(ErrorCode::invalid_argument, "need at least one modality");
  if (noise.size() != dims.size()) {
    fail(ErrorCode::invalid_argument, "one noise level per modality required");
  }
  for (const Eigen::Index d : dims) {
    if (d < 1) fail(ErrorCode::invalid_argument, "modality dims must be >= 1");
  }
  for (const double s : noise) {
    if (s < 0.0 || !std::isfinite(s)) {
      fail(ErrorCode::invalid_argument, "noise levels must be finite and >= 0");
    }
  }
  if (multi_label_prob < 0.0 || multi_label_prob >= 1.0) {
    fail(ErrorCode::invalid_argument, "multi_label_prob must lie in [0, 1)");
  }
}

SynthDataset generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const Eigen::Index latent_dim = spec.classes;

  // Latent class prototypes.
  Matrix prototypes(spec.classes, latent_dim);
  for (Eigen::Index c = 0; c < spec.classes; ++c) {
    for (Eigen::Index j = 0; j < latent_dim; ++j) {
      prototypes(c, j) = rng.normal();
    }
  }

  // Fixed per-modality transforms. kSignalScale sets the per-coordinate
  // signal magnitude; the data-fidelity terms need feature energy comparable
  // to the label terms for the fixed-step optimization to make progress, so
  // noise levels should be read relative to this scale.
  constexpr double kSignalScale = 6.0;
  std::vector<Matrix> transforms;
  const double scale = kSignalScale / std::sqrt(static_cast<double>(latent_dim));
  for (const Eigen::Index d : spec.dims) {
    Matrix a(latent_dim, d);
    for (Eigen::Index r = 0; r < latent_dim; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) {
        a(r, c) = scale * rng.normal();
      }
    }
    transforms.push_back(std::move(a));
  }

  SynthDataset data;
  data.labels = Matrix::Zero(spec.items, spec.classes);
  for (std::size_t i = 0; i < spec.dims.size(); ++i) {
    data.features.emplace_back(spec.items, spec.dims[i]);
  }

  for (Eigen::Index item = 0; item < spec.items; ++item) {
    const Eigen::Index primary = static_cast<Eigen::Index>(
        rng.uniform_index(static_cast<std::uint64_t>(spec.classes)));
    data.labels(item, primary) = 1.0;
    for (Eigen::Index c = 0; c < spec.classes; ++c) {
      if (c != primary && rng.uniform01() < spec.multi_label_prob) {
        data.labels(item, c) = 1.0;
      }
    }

    // The item's latent position is the mean of its class prototypes.
    Eigen::RowVectorXd latent = Eigen::RowVectorXd::Zero(latent_dim);
    double count = 0.0;
    for (Eigen::Index c = 0; c < spec.classes; ++c) {
      if (data.labels(item, c) > 0.0) {
        latent += prototypes.row(c);
        count += 1.0;
      }
    }
    latent /= count;

    for (std::size_t i = 0; i < spec.dims.size(); ++i) {
      Eigen::RowVectorXd x = latent * transforms[i];
      for (Eigen::Index j = 0; j < spec.dims[i]; ++j) {
        x(j) += spec.noise[i] * rng.normal();
      }
      data.features[i].row(item) = x;
    }
  }
  return data;
}

}  // namespace xmh
