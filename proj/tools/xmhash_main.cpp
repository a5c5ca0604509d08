// Command line front end for the cross-modal hashing toolkit.
//
// Subcommands: synth, train, encode, eval, gradcheck. Every flag mirrors a
// RunConfig field; --config loads a key=value file first and explicit flags
// override it. Exit codes: 0 success, 2 configuration or input errors,
// 3 numeric errors, 4 verification-suite failure.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xmh/error.hpp"
#include "xmh/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCheckFailed = 4;

int exit_code_for(const xmh::Error& e) {
  switch (e.code()) {
    case xmh::ErrorCode::singular_matrix:
    case xmh::ErrorCode::divergence:
    case xmh::ErrorCode::check_failed:
      return kExitNumeric;
    default:
      return kExitConfig;
  }
}

// Pre-scan for --config so flag defaults come from the file.
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" || arg == "-c") {
      if (i + 1 < argc) return argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      return arg.substr(9);
    }
  }
  return {};
}

void add_common_options(CLI::App* app, xmh::RunConfig& cfg, std::string& config_path) {
  app->add_option("-c,--config", config_path, "key=value config file");
  app->add_option("--seed", cfg.hp.seed, "PRNG seed");
}

void add_hyper_options(CLI::App* app, xmh::RunConfig& cfg,
                       std::string& beta_l, std::string& beta_u) {
  app->add_option("--alpha", cfg.hp.alpha, "label-agreement weight");
  app->add_option("--gamma", cfg.hp.gamma, "orthogonality weight");
  app->add_option("--beta-l", beta_l, "labeled weight, number or 'auto'");
  app->add_option("--beta-u", beta_u, "unlabeled weight, number or 'auto'");
  app->add_option("--step", cfg.hp.step, "gradient step size");
  app->add_option("--fuzzifier", cfg.hp.fuzzifier, "membership fuzzifier (> 1)");
  app->add_option("--max-iter-hash", cfg.hp.max_iter_hash,
                  "iteration cap for both hashing stages");
  app->add_option("--max-iter-fuzzy", cfg.hp.max_iter_fuzzy,
                  "iteration cap for label estimation");
  app->add_option("--tol", cfg.hp.tol, "relative objective-change tolerance");
}

void apply_beta(const std::string& text, std::optional<double>& beta) {
  if (text.empty()) return;  // flag not given
  if (text == "auto") {
    beta.reset();
    return;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    beta = v;
  } catch (const std::exception&) {
    throw xmh::Error(xmh::ErrorCode::invalid_argument,
                     "beta must be a number or 'auto', got '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cross-modal hashing toolkit"};
  app.require_subcommand(1);

  xmh::RunConfig cfg;
  const std::string preload = find_config_path(argc, argv);
  try {
    if (!preload.empty()) cfg = xmh::load_config(preload);
  } catch (const xmh::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::string config_path;
  std::string beta_l_text, beta_u_text;

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  add_common_options(synth, cfg, config_path);
  synth->add_option("--items", cfg.synth_items, "number of items");
  synth->add_option("--classes", cfg.synth_classes, "number of classes");
  synth->add_option("--dims", cfg.synth_dims, "feature dims, one per modality")
      ->delimiter(',');
  synth->add_option("--noise", cfg.synth_noise, "noise sigma, one per modality")
      ->delimiter(',');
  synth->add_option("--multi-label-prob", cfg.synth_multi_label_prob,
                    "chance of each extra class");
  synth->add_option("--test-fraction", cfg.synth_test_fraction,
                    "held-out share written as the test partition");
  synth->add_option("--out", cfg.synth_out, "output file prefix");

  CLI::App* train = app.add_subcommand("train", "train a hashing model");
  add_common_options(train, cfg, config_path);
  add_hyper_options(train, cfg, beta_l_text, beta_u_text);
  train->add_option("--train-features", cfg.train_features,
                    "training feature files, one per modality")
      ->delimiter(',');
  train->add_option("--train-labels", cfg.train_labels, "training label file");
  train->add_option("--label-fraction", cfg.label_fraction,
                    "share of training rows treated as labeled, (0,1]");
  train->add_option("--bits", cfg.code_length, "code length");
  train->add_option("--model", cfg.model_path, "output model file");
  train->add_option("--trace-prefix", cfg.trace_prefix,
                    "write objective traces with this prefix");

  CLI::App* encode = app.add_subcommand("encode", "encode features with a model");
  add_common_options(encode, cfg, config_path);
  encode->add_option("--model", cfg.model_path, "model file");
  encode->add_option("--features", cfg.encode_input, "feature file to encode");
  encode->add_option("--modality", cfg.modality, "1-based modality index");
  encode->add_option("--codes", cfg.codes_path, "output code file");

  CLI::App* eval = app.add_subcommand("eval", "evaluate cross-modal retrieval");
  add_common_options(eval, cfg, config_path);
  eval->add_option("--model", cfg.model_path, "model file");
  eval->add_option("--test-features", cfg.test_features,
                   "query feature files, one per modality")
      ->delimiter(',');
  eval->add_option("--test-labels", cfg.test_labels, "query label file");
  eval->add_option("--train-features", cfg.train_features,
                   "database feature files (only used with --database encoded)")
      ->delimiter(',');
  eval->add_option("--train-labels", cfg.train_labels, "database label file");
  eval->add_option("--report", cfg.report_path, "output report CSV");
  eval->add_option("--map-cutoff", cfg.map_cutoff, "MAP@R cutoff, 0 = full ranking");
  eval->add_option("--database", cfg.database_side,
                   "database codes: 'unified' (stored) or 'encoded'");

  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "run the built-in verification suites");
  add_common_options(gradcheck, cfg, config_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    apply_beta(beta_l_text, cfg.hp.beta_l);
    apply_beta(beta_u_text, cfg.hp.beta_u);

    if (synth->parsed()) {
      xmh::cmd_synth(cfg, std::cout);
    } else if (train->parsed()) {
      xmh::cmd_train(cfg, std::cout);
    } else if (encode->parsed()) {
      xmh::cmd_encode(cfg, std::cout);
    } else if (eval->parsed()) {
      xmh::cmd_eval(cfg, std::cout);
    } else if (gradcheck->parsed()) {
      if (!xmh::cmd_gradcheck(cfg, std::cout)) return kExitCheckFailed;
    }
  } catch (const xmh::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
