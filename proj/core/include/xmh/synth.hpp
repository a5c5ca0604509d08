#pragma once

#include <cstdint>
#include <vector>

#include "xmh/common.hpp"

namespace xmh {

// Deterministic synthetic multimodal dataset with known class structure.
// Each class draws a latent prototype; each item picks one class uniformly
// (plus extra classes with the configured probability) and every modality
// emits a modality-specific linear transform of the item's prototype plus
// Gaussian noise. Linear generation matches the linear hashing functions,
// so retrieval quality is controllable through the noise levels.

struct SynthSpec {
  Eigen::Index items = 0;          // n >= classes
  Eigen::Index classes = 0;        // label width
  std::vector<Eigen::Index> dims;  // feature dimension per modality
  std::vector<double> noise;       // sigma per modality, >= 0
  double multi_label_prob = 0.0;   // chance of adding each extra class
  std::uint64_t seed = 1;

  std::size_t modalities() const { return dims.size(); }
  void validate() const;  // throws Error(invalid_argument)
};

struct SynthDataset {
  ModalityList features;  // one n x d_i matrix per modality
  Matrix labels;          // n x classes multi-hot {0,1}
};

SynthDataset generate(const SynthSpec& spec);

}  // namespace xmh
