#pragma once

#include <cstdint>
#include <filesystem>

#include "xmh/types.hpp"

namespace xmh {

// Model container, all little-endian:
//   magic "XMHMODEL", u32 version,
//   u32 K, u32 label width, u32 code length, u64 database rows,
//   u64 d_i per modality,
//   hyperparameter block,
//   then matrix records: W_1..W_K, V, mean_1..mean_K (1 x d_i), codes.
// Loading verifies every shape against the header.
inline constexpr char kModelMagic[9] = "XMHMODEL";
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace xmh
