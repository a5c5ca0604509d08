#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "xmh/error.hpp"
#include "xmh/label_stage.hpp"
#include "xmh/model_io.hpp"
#include "xmh/rng.hpp"

using namespace xmh;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "xmh_model_tests";
  fs::create_directories(dir);
  return dir / name;
}

TrainedModel make_model(std::uint64_t seed) {
  Rng rng(seed);
  TrainedModel model;
  model.projections = init_projections({5, 3}, 2, 4, seed, Stage::code);
  model.feature_means = {Vector::Zero(5), Vector::Zero(3)};
  for (auto& mean : model.feature_means) {
    for (Eigen::Index i = 0; i < mean.size(); ++i) mean(i) = rng.normal();
  }
  CodeMatrix codes(7, 4);
  for (Eigen::Index r = 0; r < 7; ++r) {
    for (Eigen::Index c = 0; c < 4; ++c) {
      codes(r, c) = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    }
  }
  model.codes = codes;
  model.label_width = 2;
  model.code_length = 4;
  model.hp.beta_l = 0.25;  // one beta set, one auto: both forms round-trip
  model.hp.seed = seed;
  return model;
}

ErrorCode catch_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::io_failure;
}

void patch_byte(const fs::path& path, std::streamoff offset, char value) {
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(offset);
  f.write(&value, 1);
}

}  // namespace

TEST_CASE("model round-trip is bit exact with two modalities") {
  const TrainedModel model = make_model(8);
  const auto path = temp_file("model.xmh");
  save_model(model, path);
  const TrainedModel back = load_model(path);
  CHECK(back == model);
  CHECK(back.projections.W[0] == model.projections.W[0]);
  CHECK(back.projections.W[1] == model.projections.W[1]);
  CHECK(back.hp.beta_l == model.hp.beta_l);
  CHECK_FALSE(back.hp.beta_u.has_value());
}

TEST_CASE("corrupted magic bytes fail with a format error") {
  const auto path = temp_file("magic.xmh");
  save_model(make_model(9), path);
  patch_byte(path, 0, 'Z');
  CHECK(catch_code([&] { load_model(path); }) == ErrorCode::bad_format);
}

TEST_CASE("unsupported version fails with a version error") {
  const auto path = temp_file("version.xmh");
  save_model(make_model(10), path);
  patch_byte(path, 8, 42);
  CHECK(catch_code([&] { load_model(path); }) == ErrorCode::version_mismatch);
}

TEST_CASE("truncation fails with a truncation error") {
  const auto path = temp_file("trunc.xmh");
  save_model(make_model(11), path);
  fs::resize_file(path, fs::file_size(path) - 16);
  CHECK(catch_code([&] { load_model(path); }) == ErrorCode::truncated_file);
}

TEST_CASE("header/payload disagreement fails with an inconsistency error") {
  const auto path = temp_file("shape.xmh");
  save_model(make_model(12), path);
  // label width lives right after magic+version+K
  patch_byte(path, 16, 3);
  CHECK(catch_code([&] { load_model(path); }) == ErrorCode::inconsistent_model);
}

TEST_CASE("saving an inconsistent model is rejected") {
  TrainedModel model = make_model(13);
  model.code_length = 5;  // no longer matches the projections
  CHECK(catch_code([&] { save_model(model, temp_file("bad.xmh")); }) ==
        ErrorCode::inconsistent_model);
}
