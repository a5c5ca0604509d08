#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "xmh/retrieval.hpp"
#include "xmh/synth.hpp"
#include "xmh/types.hpp"

namespace xmh {

// Batch front end: a RunConfig drives the synth / train / encode / eval /
// gradcheck commands. Configs serialize to diff-able key=value text and
// round-trip losslessly; command-line flags override file values.

struct RunConfig {
  // Dataset paths. Feature lists hold one file per modality, in order.
  std::vector<std::string> train_features;
  std::string train_labels;
  std::vector<std::string> test_features;
  std::string test_labels;

  double label_fraction = 1.0;  // share of training rows with labels, (0,1]
  std::uint32_t code_length = 32;
  Hyperparameters hp;

  std::string model_path = "model.xmh";
  std::string report_path = "report.csv";
  std::string trace_prefix;  // empty = do not write objective traces
  std::string encode_input;  // feature file for `encode`
  std::string codes_path = "codes.xmat";
  std::uint32_t modality = 1;  // 1-based query modality for `encode`
  std::uint32_t map_cutoff = 0;
  std::string database_side = "unified";  // "unified" | "encoded"

  // Synthetic dataset settings (`synth` command).
  std::uint64_t synth_items = 2000;
  std::uint32_t synth_classes = 4;
  std::vector<std::uint64_t> synth_dims = {64, 32};
  std::vector<double> synth_noise = {2.5, 2.0};
  double synth_multi_label_prob = 0.2;
  double synth_test_fraction = 0.05;
  std::string synth_out = "synth";
};

bool operator==(const RunConfig& a, const RunConfig& b);

std::string serialize_config(const RunConfig& cfg);
RunConfig parse_config_text(const std::string& text);

void save_config(const RunConfig& cfg, const std::filesystem::path& path);
RunConfig load_config(const std::filesystem::path& path);

/// Writes <out>_{train,test}_mod<i>.xmat and <out>_{train,test}_labels.xmat.
/// With synth_test_fraction = 0 only the train files are written.
void cmd_synth(const RunConfig& cfg, std::ostream& log);

/// Full pipeline: center, split, label stage, label estimation (skipped when
/// every row is labeled), code stage; persists the model and objective
/// traces. Returns the trained model.
TrainedModel cmd_train(const RunConfig& cfg, std::ostream& log);

/// Encodes a feature file out-of-sample with the configured modality.
void cmd_encode(const RunConfig& cfg, std::ostream& log);

/// Evaluates every ordered cross-modal task and writes the report CSVs.
std::vector<EvalReport> cmd_eval(const RunConfig& cfg, std::ostream& log);

/// Runs the verification suites; returns true when everything passed.
bool cmd_gradcheck(const RunConfig& cfg, std::ostream& log);

}  // namespace xmh
