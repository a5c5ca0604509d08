#include "xmh/model_io.hpp"

#include <cstring>
#include <fstream>
#include <string>

#include "xmh/detail/binary_io.hpp"
#include "xmh/error.hpp"
#include "xmh/matrix_io.hpp"

namespace xmh {

namespace {

void write_hyperparameters(std::ostream& out, const Hyperparameters& hp) {
  detail::write_f64(out, hp.alpha);
  detail::write_f64(out, hp.gamma);
  detail::write_u8(out, hp.beta_l.has_value() ? 1 : 0);
  detail::write_f64(out, hp.beta_l.value_or(0.0));
  detail::write_u8(out, hp.beta_u.has_value() ? 1 : 0);
  detail::write_f64(out, hp.beta_u.value_or(0.0));
  detail::write_f64(out, hp.step);
  detail::write_f64(out, hp.fuzzifier);
  detail::write_u32(out, hp.max_iter_hash);
  detail::write_u32(out, hp.max_iter_fuzzy);
  detail::write_u64(out, hp.seed);
  detail::write_f64(out, hp.tol);
}

Hyperparameters read_hyperparameters(std::istream& in) {
  Hyperparameters hp;
  hp.alpha = detail::read_f64(in, "alpha");
  hp.gamma = detail::read_f64(in, "gamma");
  const bool has_beta_l = detail::read_u8(in, "beta_l flag") != 0;
  const double beta_l = detail::read_f64(in, "beta_l");
  if (has_beta_l) hp.beta_l = beta_l;
  const bool has_beta_u = detail::read_u8(in, "beta_u flag") != 0;
  const double beta_u = detail::read_f64(in, "beta_u");
  if (has_beta_u) hp.beta_u = beta_u;
  hp.step = detail::read_f64(in, "step");
  hp.fuzzifier = detail::read_f64(in, "fuzzifier");
  hp.max_iter_hash = detail::read_u32(in, "max_iter_hash");
  hp.max_iter_fuzzy = detail::read_u32(in, "max_iter_fuzzy");
  hp.seed = detail::read_u64(in, "seed");
  hp.tol = detail::read_f64(in, "tol");
  return hp;
}

}  // namespace

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  model.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_failure, "cannot open " + path.string() + " for writing");

  detail::write_bytes(out, kModelMagic, 8);
  detail::write_u32(out, kModelFormatVersion);
  const std::uint32_t K = static_cast<std::uint32_t>(model.modalities());
  detail::write_u32(out, K);
  detail::write_u32(out, model.label_width);
  detail::write_u32(out, model.code_length);
  detail::write_u64(out, static_cast<std::uint64_t>(model.codes.rows()));
  for (std::size_t i = 0; i < K; ++i) {
    detail::write_u64(out, static_cast<std::uint64_t>(model.projections.W[i].rows()));
  }
  write_hyperparameters(out, model.hp);

  for (const Matrix& w : model.projections.W) write_matrix_record(out, w);
  write_matrix_record(out, model.projections.V);
  for (const Vector& mean : model.feature_means) {
    write_matrix_record(out, mean.transpose());
  }
  write_matrix_record(out, model.codes);

  out.flush();
  if (!out) fail(ErrorCode::io_failure, "write failed: " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_failure, "cannot open " + path.string());

  char magic[8];
  detail::read_exact(in, magic, 8, "model magic");
  if (std::memcmp(magic, kModelMagic, 8) != 0) {
    fail(ErrorCode::bad_format, "not a model file (bad magic bytes)");
  }
  const std::uint32_t version = detail::read_u32(in, "model version");
  if (version != kModelFormatVersion) {
    fail(ErrorCode::version_mismatch,
         "unsupported model format version " + std::to_string(version));
  }

  const std::uint32_t K = detail::read_u32(in, "modality count");
  if (K == 0 || K > 1024) {
    fail(ErrorCode::bad_format, "implausible modality count " + std::to_string(K));
  }
  TrainedModel model;
  model.label_width = detail::read_u32(in, "label width");
  model.code_length = detail::read_u32(in, "code length");
  const std::uint64_t rows = detail::read_u64(in, "database rows");
  std::vector<std::uint64_t> dims(K);
  for (std::uint32_t i = 0; i < K; ++i) {
    dims[i] = detail::read_u64(in, "modality dim");
  }
  model.hp = read_hyperparameters(in);

  model.projections.stage = Stage::code;
  for (std::uint32_t i = 0; i < K; ++i) {
    Matrix w = read_matrix_record(in);
    if (w.rows() != static_cast<Eigen::Index>(dims[i]) ||
        w.cols() != static_cast<Eigen::Index>(model.code_length)) {
      fail(ErrorCode::inconsistent_model,
           "projection " + std::to_string(i) + " shape disagrees with header");
    }
    model.projections.W.push_back(std::move(w));
  }
  model.projections.V = read_matrix_record(in);
  if (model.projections.V.rows() != static_cast<Eigen::Index>(model.label_width) ||
      model.projections.V.cols() != static_cast<Eigen::Index>(model.code_length)) {
    fail(ErrorCode::inconsistent_model, "label projection shape disagrees with header");
  }
  for (std::uint32_t i = 0; i < K; ++i) {
    Matrix mean = read_matrix_record(in);
    if (mean.rows() != 1 || mean.cols() != static_cast<Eigen::Index>(dims[i])) {
      fail(ErrorCode::inconsistent_model,
           "mean vector " + std::to_string(i) + " shape disagrees with header");
    }
    model.feature_means.emplace_back(mean.transpose());
  }
  model.codes = read_matrix_record(in);
  if (model.codes.rows() != static_cast<Eigen::Index>(rows) ||
      model.codes.cols() != static_cast<Eigen::Index>(model.code_length)) {
    fail(ErrorCode::inconsistent_model, "database codes shape disagrees with header");
  }
  model.validate();
  return model;
}

}  // namespace xmh
