#include "xmh/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "xmh/code_stage.hpp"
#include "xmh/error.hpp"
#include "xmh/parallel.hpp"
#include "xmh/preprocess.hpp"

namespace xmh {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::io_failure, "cannot open " + path.string() + " for writing");
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Shared MAP assembly once per-query rankings are available.
EvalReport map_from_rankings(
    const std::function<std::vector<std::uint32_t>(std::size_t)>& rank_query,
    const std::vector<std::vector<std::uint8_t>>& relevance,
    std::uint32_t cutoff) {
  const std::size_t n_queries = relevance.size();
  EvalReport report;
  report.cutoff = cutoff;
  report.per_query_ap.assign(n_queries, -1.0);

  parallel_for(n_queries, [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      const auto ranking = rank_query(q);
      const auto ap = average_precision(ranking, relevance[q], cutoff);
      if (ap) report.per_query_ap[q] = *ap;
    }
  });

  double sum = 0.0;
  for (const double ap : report.per_query_ap) {
    if (ap >= 0.0) {
      sum += ap;
      ++report.evaluated_queries;
    } else {
      ++report.excluded_queries;
    }
  }
  report.map = report.evaluated_queries > 0
                   ? sum / static_cast<double>(report.evaluated_queries)
                   : 0.0;
  return report;
}

}  // namespace

std::vector<std::vector<std::uint8_t>> relevance_matrix(
    const Matrix& query_labels, const Matrix& db_labels) {
  if (query_labels.cols() != db_labels.cols()) {
    fail(ErrorCode::dimension_mismatch, "label widths differ");
  }
  const Eigen::Index nq = query_labels.rows();
  const Eigen::Index nd = db_labels.rows();
  std::vector<std::vector<std::uint8_t>> rel(static_cast<std::size_t>(nq));
  for (Eigen::Index q = 0; q < nq; ++q) {
    auto& row = rel[static_cast<std::size_t>(q)];
    row.assign(static_cast<std::size_t>(nd), 0);
    for (Eigen::Index d = 0; d < nd; ++d) {
      for (Eigen::Index c = 0; c < query_labels.cols(); ++c) {
        if (query_labels(q, c) > 0.0 && db_labels(d, c) > 0.0) {
          row[static_cast<std::size_t>(d)] = 1;
          break;
        }
      }
    }
  }
  return rel;
}

std::vector<std::uint32_t> rank_database(const PackedCodes& queries,
                                         Eigen::Index q,
                                         const PackedCodes& database) {
  const std::size_t n = static_cast<std::size_t>(database.rows());
  // Counting sort: distances lie in [0, bits]; appending ascending indices
  // per bucket realizes the documented tie rule.
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(database.bits()) + 2, 0);
  std::vector<int> dist(n);
  for (std::size_t d = 0; d < n; ++d) {
    dist[d] = queries.distance(q, database, static_cast<Eigen::Index>(d));
    ++counts[static_cast<std::size_t>(dist[d]) + 1];
  }
  for (std::size_t b = 1; b < counts.size(); ++b) counts[b] += counts[b - 1];
  std::vector<std::uint32_t> order(n);
  for (std::size_t d = 0; d < n; ++d) {
    order[counts[static_cast<std::size_t>(dist[d])]++] = static_cast<std::uint32_t>(d);
  }
  return order;
}

std::optional<double> average_precision(
    std::span<const std::uint32_t> ranking,
    const std::vector<std::uint8_t>& relevant, std::uint32_t cutoff) {
  std::size_t total_relevant = 0;
  for (const std::uint8_t r : relevant) total_relevant += r;
  if (total_relevant == 0) return std::nullopt;

  const std::size_t depth =
      cutoff > 0 ? std::min<std::size_t>(cutoff, ranking.size()) : ranking.size();
  const std::size_t denom = std::min(total_relevant, depth);

  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < depth; ++k) {
    if (relevant[ranking[k]]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  return sum / static_cast<double>(denom);
}

EvalReport evaluate_cross_modal(const TrainedModel& model,
                                const Matrix& query_features,
                                const Matrix& query_labels,
                                const Matrix& database_labels,
                                std::size_t query_modality,
                                std::size_t database_modality,
                                const EvalOptions& opts) {
  if (query_modality >= model.modalities() ||
      database_modality >= model.modalities()) {
    fail(ErrorCode::invalid_argument, "modality index out of range");
  }
  if (query_features.rows() != query_labels.rows()) {
    fail(ErrorCode::dimension_mismatch, "query features/labels row mismatch");
  }

  const Matrix centered =
      center_with(query_features, model.feature_means[query_modality]);
  const PackedCodes query_codes =
      PackedCodes::pack(encode_out_of_sample(centered, query_modality, model));

  PackedCodes db_codes;
  if (opts.database_features != nullptr) {
    const Matrix db_centered = center_with(*opts.database_features,
                                           model.feature_means[database_modality]);
    db_codes = PackedCodes::pack(
        encode_out_of_sample(db_centered, database_modality, model));
  } else {
    db_codes = PackedCodes::pack(model.codes);
  }
  if (db_codes.rows() != database_labels.rows()) {
    fail(ErrorCode::dimension_mismatch,
         "database codes/labels row mismatch: " + std::to_string(db_codes.rows()) +
             " vs " + std::to_string(database_labels.rows()));
  }

  const auto relevance = relevance_matrix(query_labels, database_labels);
  EvalReport report = map_from_rankings(
      [&](std::size_t q) {
        return rank_database(query_codes, static_cast<Eigen::Index>(q), db_codes);
      },
      relevance, opts.cutoff);
  report.task = opts.task_name.empty()
                    ? "m" + std::to_string(query_modality + 1) + "->m" +
                          std::to_string(database_modality + 1)
                    : opts.task_name;
  report.code_length = model.code_length;
  return report;
}

EvalReport evaluate_raw_features(const Matrix& query_features,
                                 const Matrix& db_features,
                                 const Matrix& query_labels,
                                 const Matrix& db_labels,
                                 std::uint32_t cutoff) {
  if (query_features.cols() != db_features.cols()) {
    fail(ErrorCode::dimension_mismatch, "feature dims differ");
  }
  if (query_features.rows() != query_labels.rows() ||
      db_features.rows() != db_labels.rows()) {
    fail(ErrorCode::dimension_mismatch, "features/labels row mismatch");
  }
  const auto relevance = relevance_matrix(query_labels, db_labels);
  const std::size_t nd = static_cast<std::size_t>(db_features.rows());

  EvalReport report = map_from_rankings(
      [&](std::size_t q) {
        std::vector<double> dist(nd);
        for (std::size_t d = 0; d < nd; ++d) {
          dist[d] = (db_features.row(static_cast<Eigen::Index>(d)) -
                     query_features.row(static_cast<Eigen::Index>(q)))
                        .squaredNorm();
        }
        std::vector<std::uint32_t> order(nd);
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t a, std::uint32_t b) {
                           return dist[a] < dist[b];
                         });
        return order;
      },
      relevance, cutoff);
  report.task = "raw";
  report.code_length = 0;
  return report;
}

void write_report_csv(const std::vector<EvalReport>& reports,
                      const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "task,bits,queries,evaluated,excluded,cutoff,map\n";
  for (const EvalReport& r : reports) {
    out << r.task << ',' << r.code_length << ',' << r.per_query_ap.size() << ','
        << r.evaluated_queries << ',' << r.excluded_queries << ',' << r.cutoff
        << ',' << format_double(r.map) << '\n';
  }
  out.flush();
  if (!out) fail(ErrorCode::io_failure, "write failed: " + path.string());
}

void write_per_query_csv(const std::vector<EvalReport>& reports,
                         const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "task,bits,query,ap\n";
  for (const EvalReport& r : reports) {
    for (std::size_t q = 0; q < r.per_query_ap.size(); ++q) {
      out << r.task << ',' << r.code_length << ',' << q << ',';
      if (r.per_query_ap[q] >= 0.0) out << format_double(r.per_query_ap[q]);
      out << '\n';
    }
  }
  out.flush();
  if (!out) fail(ErrorCode::io_failure, "write failed: " + path.string());
}

std::string format_map_table(const std::vector<EvalReport>& reports) {
  // Rows are tasks, columns are code lengths, MAP in the cells.
  std::vector<std::string> tasks;
  std::vector<std::uint32_t> bits;
  for (const EvalReport& r : reports) {
    if (std::find(tasks.begin(), tasks.end(), r.task) == tasks.end()) {
      tasks.push_back(r.task);
    }
    if (std::find(bits.begin(), bits.end(), r.code_length) == bits.end()) {
      bits.push_back(r.code_length);
    }
  }
  std::sort(bits.begin(), bits.end());

  std::ostringstream out;
  out << "task";
  for (const auto b : bits) out << '\t' << b << " bits";
  out << '\n';
  for (const auto& task : tasks) {
    out << task;
    for (const auto b : bits) {
      const auto it = std::find_if(reports.begin(), reports.end(),
                                   [&](const EvalReport& r) {
                                     return r.task == task && r.code_length == b;
                                   });
      out << '\t';
      if (it != reports.end()) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.4f", it->map);
        out << buf;
      } else {
        out << "-";
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace xmh
