#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "xmh/retrieval.hpp"
#include "xmh/rng.hpp"

using namespace xmh;

namespace {

CodeMatrix random_codes(Rng& rng, Eigen::Index rows, Eigen::Index bits) {
  CodeMatrix m(rows, bits);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < bits; ++c) {
      m(r, c) = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    }
  }
  return m;
}

Matrix random_multi_hot(Rng& rng, Eigen::Index rows, Eigen::Index classes) {
  Matrix m = Matrix::Zero(rows, classes);
  for (Eigen::Index r = 0; r < rows; ++r) {
    m(r, static_cast<Eigen::Index>(
             rng.uniform_index(static_cast<std::uint64_t>(classes)))) = 1.0;
    for (Eigen::Index c = 0; c < classes; ++c) {
      if (rng.uniform01() < 0.3) m(r, c) = 1.0;
    }
  }
  return m;
}

}  // namespace

TEST_CASE("relevance requires a shared positive label") {
  Matrix q(2, 3), d(3, 3);
  q << 1, 0, 0, 0, 1, 1;
  d << 1, 1, 0, 0, 0, 1, 0, 1, 0;
  const auto rel = relevance_matrix(q, d);
  CHECK(rel[0] == std::vector<std::uint8_t>{1, 0, 0});
  CHECK(rel[1] == std::vector<std::uint8_t>{1, 1, 1});
}

TEST_CASE("ranking sorts by distance with index tie-break") {
  // database rows at distances 3, 1, 2, 0 from the all-ones query
  CodeMatrix db = Matrix::Ones(4, 8);
  db.row(0).head(3).setConstant(-1.0);
  db.row(1).head(1).setConstant(-1.0);
  db.row(2).head(2).setConstant(-1.0);
  const CodeMatrix q = Matrix::Ones(1, 8);
  const auto ranking =
      rank_database(PackedCodes::pack(q), 0, PackedCodes::pack(db));
  CHECK(ranking == std::vector<std::uint32_t>{3, 1, 2, 0});
}

TEST_CASE("all-equal distances yield the identity permutation") {
  const CodeMatrix db = Matrix::Ones(5, 6);
  const CodeMatrix q = -Matrix::Ones(1, 6);
  const auto ranking =
      rank_database(PackedCodes::pack(q), 0, PackedCodes::pack(db));
  CHECK(ranking == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
}

TEST_CASE("ranking is always a permutation and respects row permutations") {
  // distances 0..n-1 are pairwise distinct by construction
  const Eigen::Index n = 12, c = 16;
  CodeMatrix db = Matrix::Ones(n, c);
  for (Eigen::Index i = 0; i < n; ++i) {
    db.row(i).head(i).setConstant(-1.0);
  }
  const CodeMatrix q = Matrix::Ones(1, c);
  const PackedCodes pq = PackedCodes::pack(q);
  const auto base = rank_database(pq, 0, PackedCodes::pack(db));

  std::vector<std::uint32_t> sorted = base;
  std::sort(sorted.begin(), sorted.end());
  for (std::uint32_t i = 0; i < n; ++i) CHECK(sorted[i] == i);

  Rng rng(61);
  const auto perm = rng.permutation(static_cast<std::size_t>(n));
  CodeMatrix shuffled(n, c);
  for (Eigen::Index i = 0; i < n; ++i) {
    shuffled.row(i) = db.row(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]));
  }
  const auto moved = rank_database(pq, 0, PackedCodes::pack(shuffled));
  // with distinct distances, position k must hold the same original row
  for (Eigen::Index k = 0; k < n; ++k) {
    CHECK(perm[moved[static_cast<std::size_t>(k)]] == base[static_cast<std::size_t>(k)]);
  }
}

TEST_CASE("average precision hand cases") {
  const std::vector<std::uint32_t> ranking = {0, 1, 2};
  SUBCASE("relevance pattern 1,0,1") {
    const auto ap = average_precision(ranking, {1, 0, 1});
    REQUIRE(ap.has_value());
    CHECK(*ap == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  }
  SUBCASE("all relevant ranked first") {
    const auto ap = average_precision(ranking, {1, 1, 0});
    REQUIRE(ap.has_value());
    CHECK(*ap == 1.0);
  }
  SUBCASE("no relevant item excludes the query") {
    CHECK_FALSE(average_precision(ranking, {0, 0, 0}).has_value());
  }
  SUBCASE("cutoff 1 scores only the top item") {
    const auto ap = average_precision(ranking, {1, 0, 1}, 1);
    REQUIRE(ap.has_value());
    CHECK(*ap == 1.0);
    const auto miss = average_precision(ranking, {0, 1, 1}, 1);
    REQUIRE(miss.has_value());
    CHECK(*miss == 0.0);
  }
}

namespace {

TrainedModel make_identity_model(Eigen::Index dim, Eigen::Index bits,
                                 const CodeMatrix& db_codes,
                                 Eigen::Index label_width) {
  TrainedModel model;
  model.projections.stage = Stage::code;
  Matrix w = Matrix::Zero(dim, bits);
  for (Eigen::Index i = 0; i < std::min(dim, bits); ++i) w(i, i) = 1.0;
  model.projections.W = {w, w};
  model.projections.V = Matrix::Ones(label_width, bits);
  model.feature_means = {Vector::Zero(dim), Vector::Zero(dim)};
  model.codes = db_codes;
  model.label_width = static_cast<std::uint32_t>(label_width);
  model.code_length = static_cast<std::uint32_t>(bits);
  return model;
}

}  // namespace

TEST_CASE("self-retrieval with unique classes reaches MAP 1") {
  // queries are the database; every query's class is unique to itself and
  // the codes are pairwise distinct, so each query's own row ranks first
  const Eigen::Index n = 6, bits = 8;
  CodeMatrix codes = Matrix::Ones(n, bits);
  for (Eigen::Index i = 0; i < n; ++i) codes.row(i).head(i).setConstant(-1.0);
  const Matrix labels = Matrix::Identity(n, n);
  const TrainedModel model = make_identity_model(bits, bits, codes, n);

  // feed the codes as features: identity W keeps them, sign() is a no-op
  const EvalReport report =
      evaluate_cross_modal(model, codes, labels, labels, 0, 1);
  CHECK(report.map == 1.0);
  CHECK(report.evaluated_queries == n);
  CHECK(report.excluded_queries == 0);
}

TEST_CASE("random codes score near the relevant-item prevalence") {
  Rng rng(63);
  const Eigen::Index nq = 60, nd = 800, bits = 16, classes = 4;
  const CodeMatrix qcodes = random_codes(rng, nq, bits);
  const CodeMatrix dcodes = random_codes(rng, nd, bits);
  const Matrix qlabels = random_multi_hot(rng, nq, classes);
  const Matrix dlabels = random_multi_hot(rng, nd, classes);

  const TrainedModel model = make_identity_model(bits, bits, dcodes, classes);
  const EvalReport report =
      evaluate_cross_modal(model, qcodes, qlabels, dlabels, 0, 1);

  const auto rel = relevance_matrix(qlabels, dlabels);
  double prevalence = 0.0;
  for (const auto& row : rel) {
    prevalence += std::accumulate(row.begin(), row.end(), 0.0) /
                  static_cast<double>(nd);
  }
  prevalence /= static_cast<double>(nq);
  CHECK(report.map == doctest::Approx(prevalence).epsilon(0.08));
}

TEST_CASE("MAP is the mean of the reported per-query APs") {
  Rng rng(64);
  const CodeMatrix qcodes = random_codes(rng, 10, 8);
  const CodeMatrix dcodes = random_codes(rng, 40, 8);
  const Matrix qlabels = random_multi_hot(rng, 10, 3);
  const Matrix dlabels = random_multi_hot(rng, 40, 3);
  const TrainedModel model = make_identity_model(8, 8, dcodes, 3);
  const EvalReport r = evaluate_cross_modal(model, qcodes, qlabels, dlabels, 0, 1);

  double sum = 0.0;
  std::uint32_t count = 0;
  for (const double ap : r.per_query_ap) {
    CHECK(ap <= 1.0);
    if (ap >= 0.0) {
      sum += ap;
      ++count;
    }
  }
  CHECK(count == r.evaluated_queries);
  CHECK(r.map == doctest::Approx(sum / count).epsilon(1e-12));
  CHECK(r.map >= 0.0);
  CHECK(r.map <= 1.0);
}

TEST_CASE("raw-feature evaluation ranks by euclidean distance") {
  Matrix db(3, 2);
  db << 0, 0, 1, 1, 5, 5;
  Matrix q(1, 2);
  q << 0.9, 0.9;
  Matrix qlabel(1, 2), dlabel(3, 2);
  qlabel << 1, 0;
  dlabel << 0, 1, 1, 0, 1, 0;  // relevant items: rows 1 and 2
  const EvalReport r = evaluate_raw_features(q, db, qlabel, dlabel);
  // ranking is [1, 0, 2]: AP = (1/2)(1/1 + 2/3)
  CHECK(r.map == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("report table lays tasks against code lengths") {
  EvalReport a;
  a.task = "m1->m2";
  a.code_length = 16;
  a.map = 0.5;
  EvalReport b;
  b.task = "m2->m1";
  b.code_length = 16;
  b.map = 0.25;
  const std::string table = format_map_table({a, b});
  CHECK(table.find("m1->m2") != std::string::npos);
  CHECK(table.find("16 bits") != std::string::npos);
  CHECK(table.find("0.5000") != std::string::npos);
}
