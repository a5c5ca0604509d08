#include "xmh/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "xmh/code_stage.hpp"
#include "xmh/error.hpp"
#include "xmh/fuzzy_label.hpp"
#include "xmh/label_stage.hpp"
#include "xmh/matrix_io.hpp"
#include "xmh/model_io.hpp"
#include "xmh/preprocess.hpp"
#include "xmh/selfcheck.hpp"

namespace xmh {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  if (value.empty()) return out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = value.find(',', pos);
    out.push_back(value.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::invalid_argument, "config key " + key + ": bad number '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::invalid_argument, "config key " + key + ": bad integer '" + value + "'");
  }
}

std::uint32_t parse_u32(const std::string& key, const std::string& value) {
  const std::uint64_t v = parse_u64(key, value);
  if (v > 0xffffffffull) {
    fail(ErrorCode::invalid_argument, "config key " + key + ": value too large");
  }
  return static_cast<std::uint32_t>(v);
}

std::string beta_to_string(const std::optional<double>& beta) {
  return beta ? format_double(*beta) : "auto";
}

std::optional<double> parse_beta(const std::string& key, const std::string& value) {
  if (value == "auto") return std::nullopt;
  return parse_double(key, value);
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.train_features == b.train_features && a.train_labels == b.train_labels &&
         a.test_features == b.test_features && a.test_labels == b.test_labels &&
         a.label_fraction == b.label_fraction && a.code_length == b.code_length &&
         a.hp == b.hp && a.model_path == b.model_path &&
         a.report_path == b.report_path && a.trace_prefix == b.trace_prefix &&
         a.encode_input == b.encode_input && a.codes_path == b.codes_path &&
         a.modality == b.modality && a.map_cutoff == b.map_cutoff &&
         a.database_side == b.database_side && a.synth_items == b.synth_items &&
         a.synth_classes == b.synth_classes && a.synth_dims == b.synth_dims &&
         a.synth_noise == b.synth_noise &&
         a.synth_multi_label_prob == b.synth_multi_label_prob &&
         a.synth_test_fraction == b.synth_test_fraction &&
         a.synth_out == b.synth_out;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "# xmhash run configuration\n";
  out << "train_features = " << join(cfg.train_features) << '\n';
  out << "train_labels = " << cfg.train_labels << '\n';
  out << "test_features = " << join(cfg.test_features) << '\n';
  out << "test_labels = " << cfg.test_labels << '\n';
  out << "label_fraction = " << format_double(cfg.label_fraction) << '\n';
  out << "code_length = " << cfg.code_length << '\n';
  out << "alpha = " << format_double(cfg.hp.alpha) << '\n';
  out << "gamma = " << format_double(cfg.hp.gamma) << '\n';
  out << "beta_l = " << beta_to_string(cfg.hp.beta_l) << '\n';
  out << "beta_u = " << beta_to_string(cfg.hp.beta_u) << '\n';
  out << "step = " << format_double(cfg.hp.step) << '\n';
  out << "fuzzifier = " << format_double(cfg.hp.fuzzifier) << '\n';
  out << "max_iter_hash = " << cfg.hp.max_iter_hash << '\n';
  out << "max_iter_fuzzy = " << cfg.hp.max_iter_fuzzy << '\n';
  out << "seed = " << cfg.hp.seed << '\n';
  out << "tol = " << format_double(cfg.hp.tol) << '\n';
  out << "model = " << cfg.model_path << '\n';
  out << "report = " << cfg.report_path << '\n';
  out << "trace_prefix = " << cfg.trace_prefix << '\n';
  out << "encode_input = " << cfg.encode_input << '\n';
  out << "codes = " << cfg.codes_path << '\n';
  out << "modality = " << cfg.modality << '\n';
  out << "map_cutoff = " << cfg.map_cutoff << '\n';
  out << "database_side = " << cfg.database_side << '\n';
  out << "synth_items = " << cfg.synth_items << '\n';
  out << "synth_classes = " << cfg.synth_classes << '\n';
  {
    std::vector<std::string> dims;
    for (const auto d : cfg.synth_dims) dims.push_back(std::to_string(d));
    out << "synth_dims = " << join(dims) << '\n';
  }
  {
    std::vector<std::string> noise;
    for (const auto s : cfg.synth_noise) noise.push_back(format_double(s));
    out << "synth_noise = " << join(noise) << '\n';
  }
  out << "synth_multi_label_prob = " << format_double(cfg.synth_multi_label_prob) << '\n';
  out << "synth_test_fraction = " << format_double(cfg.synth_test_fraction) << '\n';
  out << "synth_out = " << cfg.synth_out << '\n';
  return out.str();
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::invalid_argument,
           "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    if (key == "train_features") cfg.train_features = split_list(value);
    else if (key == "train_labels") cfg.train_labels = value;
    else if (key == "test_features") cfg.test_features = split_list(value);
    else if (key == "test_labels") cfg.test_labels = value;
    else if (key == "label_fraction") cfg.label_fraction = parse_double(key, value);
    else if (key == "code_length") cfg.code_length = parse_u32(key, value);
    else if (key == "alpha") cfg.hp.alpha = parse_double(key, value);
    else if (key == "gamma") cfg.hp.gamma = parse_double(key, value);
    else if (key == "beta_l") cfg.hp.beta_l = parse_beta(key, value);
    else if (key == "beta_u") cfg.hp.beta_u = parse_beta(key, value);
    else if (key == "step") cfg.hp.step = parse_double(key, value);
    else if (key == "fuzzifier") cfg.hp.fuzzifier = parse_double(key, value);
    else if (key == "max_iter_hash") cfg.hp.max_iter_hash = parse_u32(key, value);
    else if (key == "max_iter_fuzzy") cfg.hp.max_iter_fuzzy = parse_u32(key, value);
    else if (key == "seed") cfg.hp.seed = parse_u64(key, value);
    else if (key == "tol") cfg.hp.tol = parse_double(key, value);
    else if (key == "model") cfg.model_path = value;
    else if (key == "report") cfg.report_path = value;
    else if (key == "trace_prefix") cfg.trace_prefix = value;
    else if (key == "encode_input") cfg.encode_input = value;
    else if (key == "codes") cfg.codes_path = value;
    else if (key == "modality") cfg.modality = parse_u32(key, value);
    else if (key == "map_cutoff") cfg.map_cutoff = parse_u32(key, value);
    else if (key == "database_side") cfg.database_side = value;
    else if (key == "synth_items") cfg.synth_items = parse_u64(key, value);
    else if (key == "synth_classes") cfg.synth_classes = parse_u32(key, value);
    else if (key == "synth_dims") {
      cfg.synth_dims.clear();
      for (const auto& tok : split_list(value)) {
        cfg.synth_dims.push_back(parse_u64(key, trim(tok)));
      }
    } else if (key == "synth_noise") {
      cfg.synth_noise.clear();
      for (const auto& tok : split_list(value)) {
        cfg.synth_noise.push_back(parse_double(key, trim(tok)));
      }
    } else if (key == "synth_multi_label_prob") {
      cfg.synth_multi_label_prob = parse_double(key, value);
    } else if (key == "synth_test_fraction") {
      cfg.synth_test_fraction = parse_double(key, value);
    } else if (key == "synth_out") {
      cfg.synth_out = value;
    } else {
      fail(ErrorCode::invalid_argument,
           "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::io_failure, "cannot open " + path.string() + " for writing");
  out << serialize_config(cfg);
  out.flush();
  if (!out) fail(ErrorCode::io_failure, "write failed: " + path.string());
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_failure, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

SynthSpec synth_spec_from(const RunConfig& cfg) {
  SynthSpec spec;
  spec.items = static_cast<Eigen::Index>(cfg.synth_items);
  spec.classes = static_cast<Eigen::Index>(cfg.synth_classes);
  for (const auto d : cfg.synth_dims) {
    spec.dims.push_back(static_cast<Eigen::Index>(d));
  }
  spec.noise = cfg.synth_noise;
  spec.multi_label_prob = cfg.synth_multi_label_prob;
  spec.seed = cfg.hp.seed;
  return spec;
}

void write_dataset(const std::string& prefix, const std::string& part,
                   const ModalityList& features, const Matrix& labels) {
  for (std::size_t i = 0; i < features.size(); ++i) {
    save_matrix(features[i],
                prefix + "_" + part + "_mod" + std::to_string(i + 1) + ".xmat");
  }
  save_matrix(labels, prefix + "_" + part + "_labels.xmat");
}

ModalityList load_features(const std::vector<std::string>& paths) {
  if (paths.empty()) {
    fail(ErrorCode::invalid_argument, "no feature files configured");
  }
  ModalityList features;
  for (const auto& p : paths) features.push_back(load_matrix(p));
  return features;
}

}  // namespace

void cmd_synth(const RunConfig& cfg, std::ostream& log) {
  const SynthSpec spec = synth_spec_from(cfg);
  if (cfg.synth_test_fraction < 0.0 || cfg.synth_test_fraction >= 1.0) {
    fail(ErrorCode::invalid_argument, "synth_test_fraction must lie in [0, 1)");
  }
  const SynthDataset data = generate(spec);

  if (cfg.synth_test_fraction > 0.0) {
    // the "labeled" part of a seeded split becomes the training partition
    const ShuffleSplit split =
        shuffle_split(data.features, data.labels, 1.0 - cfg.synth_test_fraction,
                      spec.seed + 1);
    write_dataset(cfg.synth_out, "train", split.labeled_features,
                  split.labeled_labels);
    write_dataset(cfg.synth_out, "test", split.unlabeled_features,
                  split.unlabeled_labels);
    log << "synth: wrote " << split.labeled_count() << " train / "
        << split.unlabeled_count() << " test items, " << spec.modalities()
        << " modalities\n";
  } else {
    write_dataset(cfg.synth_out, "train", data.features, data.labels);
    log << "synth: wrote " << spec.items << " train items, "
        << spec.modalities() << " modalities\n";
  }
}

TrainedModel cmd_train(const RunConfig& cfg, std::ostream& log) {
  cfg.hp.validate();
  ModalityList raw = load_features(cfg.train_features);
  const Matrix labels = load_matrix(cfg.train_labels);

  std::vector<Vector> means;
  ModalityList centered;
  for (const Matrix& x : raw) {
    CenteredMatrix c = zero_center(x);
    means.push_back(std::move(c.mean));
    centered.push_back(std::move(c.centered));
  }
  raw.clear();

  const ShuffleSplit split =
      shuffle_split(centered, labels, cfg.label_fraction, cfg.hp.seed);
  const SignLabelMatrix L_l = encode_labels(split.labeled_labels);
  log << "train: n_l=" << split.labeled_count()
      << " n_u=" << split.unlabeled_count() << " l=" << L_l.cols()
      << " c=" << cfg.code_length << '\n';

  const LabelStageResult label_result =
      train_label_stage(split.labeled_features, L_l, cfg.hp);
  log << "label stage: " << label_result.iterations << " iterations, objective "
      << label_result.objective_trace.back() << '\n';

  SignLabelMatrix L_u(0, L_l.cols());
  std::vector<double> fuzzy_trace;
  if (split.unlabeled_count() > 0) {
    const FuzzyResult fuzzy =
        estimate_labels(split.unlabeled_features, label_result.projections, cfg.hp);
    L_u = fuzzy.labels;
    fuzzy_trace = fuzzy.objective_trace;
    log << "label estimation: " << fuzzy_trace.size()
        << " iterations, objective " << fuzzy_trace.back() << '\n';
  } else {
    log << "label estimation: skipped (no unlabeled rows)\n";
  }

  const CodeStageResult code_result =
      train_code_stage(split.labeled_features, split.unlabeled_features, L_l,
                       L_u, static_cast<Eigen::Index>(cfg.code_length), cfg.hp);
  log << "code stage: " << code_result.iterations << " iterations, objective "
      << code_result.objective_trace.back() << '\n';

  // Reassemble the unified codes in the original input row order.
  const Eigen::Index n_l = split.labeled_count();
  const Eigen::Index n_u = split.unlabeled_count();
  CodeMatrix codes(n_l + n_u, cfg.code_length);
  for (Eigen::Index r = 0; r < n_l; ++r) {
    codes.row(static_cast<Eigen::Index>(split.permutation[static_cast<std::size_t>(r)])) =
        code_result.codes_labeled.row(r);
  }
  for (Eigen::Index r = 0; r < n_u; ++r) {
    codes.row(static_cast<Eigen::Index>(
        split.permutation[static_cast<std::size_t>(n_l + r)])) =
        code_result.codes_unlabeled.row(r);
  }

  TrainedModel model;
  model.projections = code_result.projections;
  model.feature_means = means;
  model.codes = std::move(codes);
  model.label_width = static_cast<std::uint32_t>(L_l.cols());
  model.code_length = cfg.code_length;
  model.hp = cfg.hp;
  model.hp.beta_l = cfg.hp.resolved_beta_l(n_l, n_u);
  if (n_u > 0) model.hp.beta_u = cfg.hp.resolved_beta_u(n_l, n_u);
  model.validate();

  if (!cfg.model_path.empty()) {
    save_model(model, cfg.model_path);
    log << "model written to " << cfg.model_path << '\n';
  }
  if (!cfg.trace_prefix.empty()) {
    write_trace_csv(label_result.objective_trace, cfg.trace_prefix + "_label.csv");
    write_trace_csv(fuzzy_trace, cfg.trace_prefix + "_fuzzy.csv");
    write_trace_csv(code_result.objective_trace, cfg.trace_prefix + "_code.csv");
  }
  return model;
}

void cmd_encode(const RunConfig& cfg, std::ostream& log) {
  const TrainedModel model = load_model(cfg.model_path);
  if (cfg.modality < 1 || cfg.modality > model.modalities()) {
    fail(ErrorCode::invalid_argument,
         "modality must lie in [1, " + std::to_string(model.modalities()) + "]");
  }
  if (cfg.encode_input.empty()) {
    fail(ErrorCode::invalid_argument, "encode_input not configured");
  }
  const Matrix raw = load_matrix(cfg.encode_input);
  const std::size_t mod = cfg.modality - 1;
  const Matrix centered = center_with(raw, model.feature_means[mod]);
  const CodeMatrix codes = encode_out_of_sample(centered, mod, model);
  save_matrix(codes, cfg.codes_path);
  log << "encoded " << codes.rows() << " rows at " << codes.cols()
      << " bits to " << cfg.codes_path << '\n';
}

std::vector<EvalReport> cmd_eval(const RunConfig& cfg, std::ostream& log) {
  const TrainedModel model = load_model(cfg.model_path);
  const ModalityList queries = load_features(cfg.test_features);
  if (queries.size() != model.modalities()) {
    fail(ErrorCode::dimension_mismatch,
         "test feature count " + std::to_string(queries.size()) +
             " != model modality count " + std::to_string(model.modalities()));
  }
  const Matrix query_labels = load_matrix(cfg.test_labels);
  const Matrix db_labels = load_matrix(cfg.train_labels);
  const bool encoded_db = cfg.database_side == "encoded";
  if (!encoded_db && cfg.database_side != "unified") {
    fail(ErrorCode::invalid_argument,
         "database_side must be 'unified' or 'encoded'");
  }

  ModalityList db_features;
  if (encoded_db) db_features = load_features(cfg.train_features);

  std::vector<EvalReport> reports;
  const std::size_t K = model.modalities();
  for (std::size_t qi = 0; qi < K; ++qi) {
    for (std::size_t dj = 0; dj < K; ++dj) {
      if (K > 1 && qi == dj) continue;
      EvalOptions opts;
      opts.cutoff = cfg.map_cutoff;
      if (encoded_db) opts.database_features = &db_features[dj];
      reports.push_back(evaluate_cross_modal(model, queries[qi], query_labels,
                                             db_labels, qi, dj, opts));
      const EvalReport& r = reports.back();
      log << r.task << ": map=" << r.map << " (" << r.evaluated_queries
          << " queries, " << r.excluded_queries << " excluded)\n";
    }
  }

  if (!cfg.report_path.empty()) {
    write_report_csv(reports, cfg.report_path);
    std::filesystem::path per_query = cfg.report_path;
    per_query.replace_extension();
    per_query += "_per_query.csv";
    write_per_query_csv(reports, per_query);
  }
  log << format_map_table(reports);
  return reports;
}

bool cmd_gradcheck(const RunConfig& cfg, std::ostream& log) {
  selfcheck::Options opts;
  opts.seed = cfg.hp.seed;
  const auto results = selfcheck::run_all(opts);
  for (const auto& r : results) {
    log << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
  }
  const bool ok = selfcheck::all_passed(results);
  log << (ok ? "all checks passed\n" : "CHECKS FAILED\n");
  return ok;
}

}  // namespace xmh
