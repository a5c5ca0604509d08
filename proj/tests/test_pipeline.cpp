#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "xmh/error.hpp"
#include "xmh/matrix_io.hpp"
#include "xmh/model_io.hpp"
#include "xmh/pipeline.hpp"

using namespace xmh;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "xmh_pipeline_tests" / name;
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunConfig small_run(const fs::path& dir, std::uint64_t seed) {
  RunConfig cfg;
  cfg.synth_items = 160;
  cfg.synth_classes = 3;
  cfg.synth_dims = {10, 8};
  cfg.synth_noise = {3.0, 3.0};
  cfg.synth_multi_label_prob = 0.2;
  cfg.synth_test_fraction = 0.1;
  cfg.synth_out = (dir / "data").string();
  cfg.hp.seed = seed;
  cfg.hp.max_iter_hash = 60;
  cfg.label_fraction = 0.5;
  cfg.code_length = 12;
  cfg.train_features = {(dir / "data_train_mod1.xmat").string(),
                        (dir / "data_train_mod2.xmat").string()};
  cfg.train_labels = (dir / "data_train_labels.xmat").string();
  cfg.test_features = {(dir / "data_test_mod1.xmat").string(),
                       (dir / "data_test_mod2.xmat").string()};
  cfg.test_labels = (dir / "data_test_labels.xmat").string();
  cfg.model_path = (dir / "model.xmh").string();
  cfg.report_path = (dir / "report.csv").string();
  cfg.trace_prefix = (dir / "trace").string();
  return cfg;
}

}  // namespace

TEST_CASE("hyperparameter defaults") {
  const Hyperparameters hp;
  CHECK(hp.alpha == 100.0);
  CHECK(hp.gamma == 0.01);
  CHECK(hp.step == 0.001);
  CHECK(hp.max_iter_hash == 400);
  CHECK(hp.max_iter_fuzzy == 15);
  CHECK_FALSE(hp.beta_l.has_value());
  CHECK_FALSE(hp.beta_u.has_value());
}

TEST_CASE("beta defaults derive from the split sizes") {
  const Hyperparameters hp;
  CHECK(hp.resolved_beta_l(25, 75) == doctest::Approx(0.75));
  CHECK(hp.resolved_beta_u(25, 75) == doctest::Approx(0.1 * 0.25));
  // no unlabeled rows: the labeled term must keep full weight
  CHECK(hp.resolved_beta_l(100, 0) == 1.0);
  CHECK(hp.resolved_beta_u(100, 0) == 0.0);
}

TEST_CASE("config serialization round-trips losslessly") {
  RunConfig cfg;
  cfg.train_features = {"a.xmat", "b.xmat"};
  cfg.train_labels = "labels.xmat";
  cfg.test_features = {"qa.xmat", "qb.xmat"};
  cfg.test_labels = "qlabels.xmat";
  cfg.label_fraction = 0.123456789012345;
  cfg.code_length = 96;
  cfg.hp.alpha = 17.25;
  cfg.hp.beta_l = 0.3333333333333333;
  cfg.hp.beta_u.reset();
  cfg.hp.seed = 1234567890123ull;
  cfg.hp.tol = 3.5e-7;
  cfg.model_path = "out/model.xmh";
  cfg.trace_prefix = "out/tr";
  cfg.encode_input = "enc.xmat";
  cfg.modality = 2;
  cfg.map_cutoff = 50;
  cfg.database_side = "encoded";
  cfg.synth_dims = {64, 32, 16};
  cfg.synth_noise = {2.5, 2.0, 1.0};
  cfg.synth_multi_label_prob = 0.125;

  const RunConfig back = parse_config_text(serialize_config(cfg));
  CHECK(back == cfg);

  // and via a file
  const auto path = temp_dir("config") / "run.cfg";
  save_config(cfg, path);
  CHECK(load_config(path) == cfg);
}

TEST_CASE("config parser reports unknown keys and bad values") {
  try {
    parse_config_text("no_such_key = 3\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
    CHECK(std::string(e.what()).find("no_such_key") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("alpha = abc\n"), Error);
  CHECK_THROWS_AS(parse_config_text("alpha\n"), Error);
  // comments and blank lines are fine
  const RunConfig cfg = parse_config_text("# comment\n\nalpha = 4\n");
  CHECK(cfg.hp.alpha == 4.0);
}

TEST_CASE("synth command writes parseable, deterministic datasets") {
  const auto dir = temp_dir("synth");
  RunConfig cfg = small_run(dir, 21);
  std::ostringstream log;
  cmd_synth(cfg, log);
  const Matrix m1 = load_matrix(cfg.train_features[0]);
  const Matrix labels = load_matrix(cfg.train_labels);
  CHECK(m1.rows() == 144);  // ceil(0.9 * 160)
  CHECK(m1.cols() == 10);
  CHECK(labels.rows() == 144);
  CHECK(is_multi_hot(labels));
  const Matrix t1 = load_matrix(cfg.test_features[0]);
  CHECK(t1.rows() == 16);

  // rerun into a second directory and compare bytes
  const auto dir2 = temp_dir("synth2");
  RunConfig cfg2 = small_run(dir2, 21);
  cmd_synth(cfg2, log);
  CHECK(slurp(cfg.train_features[0]) == slurp(cfg2.train_features[0]));
  CHECK(slurp(cfg.test_labels) == slurp(cfg2.test_labels));
}

TEST_CASE("train and eval run the full pipeline deterministically") {
  const auto dir_a = temp_dir("run_a");
  const auto dir_b = temp_dir("run_b");
  std::ostringstream log;

  RunConfig a = small_run(dir_a, 33);
  cmd_synth(a, log);
  const TrainedModel model = cmd_train(a, log);
  CHECK(model.code_length == 12);
  CHECK(model.codes.rows() == 144);
  CHECK(is_sign_matrix(model.codes));
  // resolved betas are recorded in the model
  CHECK(model.hp.beta_l.has_value());
  CHECK(*model.hp.beta_l == doctest::Approx(0.5));

  const auto reports = cmd_eval(a, log);
  REQUIRE(reports.size() == 2);
  for (const auto& r : reports) {
    CHECK(r.map >= 0.0);
    CHECK(r.map <= 1.0);
  }

  RunConfig b = small_run(dir_b, 33);
  cmd_synth(b, log);
  cmd_train(b, log);
  cmd_eval(b, log);

  CHECK(slurp(a.model_path) == slurp(b.model_path));
  CHECK(slurp(a.report_path) == slurp(b.report_path));
  CHECK(slurp(a.trace_prefix + "_label.csv") == slurp(b.trace_prefix + "_label.csv"));
  CHECK(slurp(a.trace_prefix + "_fuzzy.csv") == slurp(b.trace_prefix + "_fuzzy.csv"));
  CHECK(slurp(a.trace_prefix + "_code.csv") == slurp(b.trace_prefix + "_code.csv"));

  // the model file itself round-trips
  CHECK(load_model(a.model_path) == model);
}

TEST_CASE("label_fraction 1.0 skips label estimation") {
  const auto dir = temp_dir("full_labels");
  std::ostringstream log;
  RunConfig cfg = small_run(dir, 5);
  cfg.label_fraction = 1.0;
  cmd_synth(cfg, log);
  const TrainedModel model = cmd_train(cfg, log);
  CHECK(model.codes.rows() == 144);
  CHECK(log.str().find("skipped") != std::string::npos);
  // fuzzy trace exists but records no iterations
  std::ifstream trace(cfg.trace_prefix + "_fuzzy.csv");
  std::string header, extra;
  std::getline(trace, header);
  CHECK(header == "iteration,objective");
  CHECK_FALSE(std::getline(trace, extra));
}

TEST_CASE("encode command reproduces database codes for training rows") {
  const auto dir = temp_dir("encode");
  std::ostringstream log;
  RunConfig cfg = small_run(dir, 8);
  cmd_synth(cfg, log);
  cmd_train(cfg, log);

  cfg.encode_input = cfg.test_features[1];
  cfg.modality = 2;
  cfg.codes_path = (dir / "codes.xmat").string();
  cmd_encode(cfg, log);
  const Matrix codes = load_matrix(cfg.codes_path);
  CHECK(codes.rows() == 16);
  CHECK(codes.cols() == 12);
  CHECK(is_sign_matrix(codes));
}

TEST_CASE("eval can re-encode the database side") {
  const auto dir = temp_dir("encoded_db");
  std::ostringstream log;
  RunConfig cfg = small_run(dir, 9);
  cmd_synth(cfg, log);
  cmd_train(cfg, log);
  cfg.database_side = "encoded";
  const auto reports = cmd_eval(cfg, log);
  REQUIRE(reports.size() == 2);
  for (const auto& r : reports) {
    CHECK(r.map > 0.0);
    CHECK(r.map <= 1.0);
  }
  cfg.database_side = "bogus";
  CHECK_THROWS_AS(cmd_eval(cfg, log), Error);
}

TEST_CASE("missing input files surface as io errors") {
  RunConfig cfg;
  cfg.train_features = {"/nonexistent/xmh/a.xmat"};
  cfg.train_labels = "/nonexistent/xmh/l.xmat";
  std::ostringstream log;
  try {
    cmd_train(cfg, log);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io_failure);
  }
}
