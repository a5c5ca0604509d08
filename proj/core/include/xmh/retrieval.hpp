#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xmh/packed_codes.hpp"
#include "xmh/types.hpp"

namespace xmh {

/// rel(q, d) = 1 iff query q and database item d share at least one class.
/// Accepts {0,1} or {-1,+1} label matrices; an entry marks membership when
/// it is positive.
std::vector<std::vector<std::uint8_t>> relevance_matrix(
    const Matrix& query_labels, const Matrix& db_labels);

/// Database indices sorted by ascending Hamming distance from query row q;
/// ties break by ascending database index. Counting sort over the distance
/// range keeps this linear in the database size.
std::vector<std::uint32_t> rank_database(const PackedCodes& queries,
                                         Eigen::Index q,
                                         const PackedCodes& database);

/// AP = (1/R) * sum_k precision@k * rel@k over the ranking, R = number of
/// relevant items (clamped to the cutoff length when one is given).
/// Returns nullopt when the query has no relevant item.
std::optional<double> average_precision(
    std::span<const std::uint32_t> ranking,
    const std::vector<std::uint8_t>& relevant, std::uint32_t cutoff = 0);

struct EvalReport {
  std::string task;
  std::uint32_t code_length = 0;
  double map = 0.0;
  // Aligned with query order; -1 marks queries with no relevant item,
  // which are excluded from the mean.
  std::vector<double> per_query_ap;
  std::uint32_t evaluated_queries = 0;
  std::uint32_t excluded_queries = 0;
  std::uint32_t cutoff = 0;  // 0 = full ranking
};

struct EvalOptions {
  // When set, database codes are re-encoded from these centered-at-load raw
  // features with the database modality's projection instead of using the
  // model's stored unified codes.
  const Matrix* database_features = nullptr;
  std::uint32_t cutoff = 0;
  std::string task_name;  // defaults to "m<q>->m<d>" (1-based)
};

/// Cross-modal retrieval: encodes raw query features out-of-sample with the
/// query modality's projection and ranks the database side (the model's
/// unified codes by default) by Hamming distance. database_labels rows must
/// align with the database codes.
EvalReport evaluate_cross_modal(const TrainedModel& model,
                                const Matrix& query_features,
                                const Matrix& query_labels,
                                const Matrix& database_labels,
                                std::size_t query_modality,
                                std::size_t database_modality,
                                const EvalOptions& opts = {});

/// Single-modality baseline: ranks by squared Euclidean distance on raw
/// features with the same tie rule and relevance convention.
EvalReport evaluate_raw_features(const Matrix& query_features,
                                 const Matrix& db_features,
                                 const Matrix& query_labels,
                                 const Matrix& db_labels,
                                 std::uint32_t cutoff = 0);

void write_report_csv(const std::vector<EvalReport>& reports,
                      const std::filesystem::path& path);
void write_per_query_csv(const std::vector<EvalReport>& reports,
                         const std::filesystem::path& path);

/// Text table, one row per task, one column per code length.
std::string format_map_table(const std::vector<EvalReport>& reports);

}  // namespace xmh
