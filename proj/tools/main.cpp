// cpens: train, evaluate and compare conformal-prediction ensembles on
// tabular CSV data, and generate synthetic cohorts for experiments.
//
// Exit codes: 0 success, 2 usage error, 3 data/model error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpens/dataset.hpp"
#include "cpens/ensemble.hpp"
#include "cpens/error.hpp"
#include "cpens/evaluation.hpp"
#include "cpens/manifest.hpp"
#include "cpens/stats.hpp"
#include "cpens/textutil.hpp"
#include "cpens/version.hpp"

namespace {

using namespace cpens;

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << text;
  if (!out) throw DataError("write failed: " + path);
}

RunManifest make_manifest(const std::string& command, std::uint64_t seed,
                          const std::string& fingerprint,
                          std::vector<std::pair<std::string, std::string>> config) {
  RunManifest manifest;
  manifest.command = command;
  manifest.config = std::move(config);
  manifest.seed = seed;
  manifest.dataset_fingerprint = fingerprint;
  manifest.tool_version = kVersion;
  manifest.timestamp = current_timestamp_utc();
  return manifest;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& piece : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "'" + piece + "' is not a number");
    }
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  for (const double v : parse_double_list(text, flag)) {
    if (v != static_cast<int>(v)) throw CLI::ValidationError(flag, "expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

int resolve_class(const Dataset& ds, const std::string& name, const std::string& flag) {
  for (std::size_t i = 0; i < ds.classes.size(); ++i) {
    if (ds.classes[i] == name) return static_cast<int>(i);
  }
  throw DataError(flag + ": class '" + name + "' not present in the dataset");
}

// ---------------------------------------------------------------- gen-data

struct GenDataArgs {
  SyntheticConfig cfg;
  std::string class_names = "sMCI,cMCI";
  std::string out;
};

void run_gen_data(const GenDataArgs& args) {
  SyntheticConfig cfg = args.cfg;
  cfg.class_names = split(args.class_names, ',');
  const Dataset ds = generate_synthetic(cfg);
  write_csv(ds, args.out);
  auto manifest = make_manifest(
      "gen-data", cfg.seed, fingerprint_file(args.out),
      {{"n", std::to_string(cfg.n_examples)},
       {"features", std::to_string(cfg.n_features)},
       {"balance", format_double(cfg.class_balance)},
       {"separation", format_double(cfg.separation)},
       {"noise", format_double(cfg.noise_rate)},
       {"class-names", args.class_names},
       {"out", args.out}});
  write_manifest(manifest, args.out);
  std::cerr << "wrote " << ds.size() << " examples, " << ds.n_features() << " features to "
            << args.out << "\n";
}

// ------------------------------------------------------------------- train

struct TrainArgs {
  std::string data;
  std::string label_column = "label";
  std::string classes;  // optional pre-declared class order
  std::string mode = "conformal";
  EnsembleConfig cfg;
  bool has_threshold = false;
  double threshold = 0.85;
  std::string out;
};

Dataset load_labeled(const std::string& path, const std::string& label_column,
                     const std::string& classes) {
  CsvOptions options;
  options.label_column = label_column;
  if (!classes.empty()) options.classes = split(classes, ',');
  return load_csv(path, options);
}

void run_train(const TrainArgs& args) {
  EnsembleConfig cfg = args.cfg;
  const auto mode = base_mode_from_string(args.mode);
  if (!mode) throw CLI::ValidationError("--mode", "expected conformal|posterior|plain");
  cfg.base_mode = *mode;
  if (args.has_threshold) cfg.credibility_threshold = args.threshold;

  const Dataset ds = load_labeled(args.data, args.label_column, args.classes);
  const ConformalEnsemble ensemble = ConformalEnsemble::build(ds, cfg);
  ensemble.save(args.out);

  auto manifest = make_manifest(
      "train", cfg.seed, fingerprint_file(args.data),
      {{"data", args.data},
       {"label-column", args.label_column},
       {"mode", to_string(cfg.base_mode)},
       {"estimators", std::to_string(cfg.n_estimators)},
       {"feature-fraction", format_double(cfg.feature_fraction)},
       {"bootstrap-fraction", format_double(cfg.bootstrap_fraction)},
       {"threshold", cfg.credibility_threshold ? format_double(*cfg.credibility_threshold)
                                               : std::string("none")},
       {"out", args.out}});
  write_manifest(manifest, args.out);
  std::cerr << "trained " << cfg.n_estimators << " " << to_string(cfg.base_mode)
            << " estimators on " << ds.size() << " examples -> " << args.out << "\n";
}

// ----------------------------------------------------------------- predict

struct PredictArgs {
  std::string model;
  std::string data;
  std::string label_column;  // optional; dropped from the feature set if present
  bool has_threshold = false;
  double threshold = 0.0;
  std::string out;
  std::string jsonl;
};

// The model schema drives typing and category dictionaries; the CSV's own
// inference could disagree (e.g. numeric-looking category names).
Dataset load_for_model(const std::string& path, const std::string& label_column,
                       const ConformalEnsemble& ensemble) {
  CsvOptions options;
  if (!label_column.empty()) options.label_column = label_column;
  for (const auto& spec : ensemble.schema()) options.schema_hints[spec.name] = spec.kind;
  Dataset ds = load_csv(path, options);

  if (ds.schema.size() != ensemble.schema().size()) {
    throw DataError("data has " + std::to_string(ds.schema.size()) + " features, model expects " +
                    std::to_string(ensemble.schema().size()));
  }
  for (std::size_t f = 0; f < ds.schema.size(); ++f) {
    const auto& got = ds.schema[f];
    const auto& want = ensemble.schema()[f];
    if (got.name != want.name || got.kind != want.kind) {
      throw DataError("feature mismatch at column " + std::to_string(f) + ": data has '" +
                      got.name + "', model expects '" + want.name + "'");
    }
    if (got.kind != FeatureKind::Categorical) continue;
    // Remap category indices to the model's dictionary; unknown categories
    // become missing values and are skipped by the model.
    std::vector<std::optional<double>> remap(got.categories.size());
    for (std::size_t c = 0; c < got.categories.size(); ++c) {
      for (std::size_t m = 0; m < want.categories.size(); ++m) {
        if (got.categories[c] == want.categories[m]) {
          remap[c] = static_cast<double>(m);
          break;
        }
      }
    }
    for (auto& ex : ds.examples) {
      if (ex.values[f]) ex.values[f] = remap[static_cast<std::size_t>(*ex.values[f])];
    }
    ds.schema[f].categories = want.categories;
  }
  return ds;
}

std::string predictions_csv(const std::vector<EnsembleVerdict>& verdicts,
                            const std::vector<std::string>& classes) {
  std::string out = "id,trustworthy_pct,prediction,credibility,confidence,frequent_features\n";
  for (const auto& v : verdicts) {
    out += v.example_id;
    char pct[16];
    std::snprintf(pct, sizeof(pct), "%.0f%%", 100.0 * v.trustworthy_fraction);
    out += std::string(",") + pct;
    if (v.unpredictable()) {
      out += ",UNPREDICTABLE,,,[]";
    } else {
      out += "," + classes[static_cast<std::size_t>(*v.label)];
      out += "," + fmt3(*v.mean_credibility);
      out += "," + fmt3(*v.mean_confidence);
      out += ",\"[" + join(v.frequent_features, ", ") + "]\"";
    }
    out += "\n";
  }
  return out;
}

std::string predictions_jsonl(const std::vector<EnsembleVerdict>& verdicts,
                              const std::vector<std::string>& classes) {
  std::string out;
  for (const auto& v : verdicts) {
    nlohmann::json j;
    j["id"] = v.example_id;
    j["trustworthy_fraction"] = v.trustworthy_fraction;
    if (v.unpredictable()) {
      j["prediction"] = nullptr;
      j["credibility"] = nullptr;
      j["confidence"] = nullptr;
    } else {
      j["prediction"] = classes[static_cast<std::size_t>(*v.label)];
      j["credibility"] = *v.mean_credibility;
      j["confidence"] = *v.mean_confidence;
    }
    j["frequent_features"] = v.frequent_features;
    nlohmann::json votes;
    for (std::size_t c = 0; c < classes.size(); ++c) votes[classes[c]] = v.vote_counts[c];
    j["vote_counts"] = std::move(votes);
    out += j.dump();
    out += "\n";
  }
  return out;
}

void run_predict(const PredictArgs& args) {
  ConformalEnsemble ensemble = ConformalEnsemble::load(args.model);
  ensemble.set_credibility_threshold(
      args.has_threshold ? std::optional<double>(args.threshold) : std::nullopt);
  const Dataset ds = load_for_model(args.data, args.label_column, ensemble);
  const auto verdicts = ensemble.predict_batch(ds.examples, 0);

  const std::string csv = predictions_csv(verdicts, ensemble.classes());
  if (args.out == "-") {
    std::cout << csv;
  } else {
    write_text_file(args.out, csv);
  }
  if (!args.jsonl.empty()) {
    write_text_file(args.jsonl, predictions_jsonl(verdicts, ensemble.classes()));
  }
  if (args.out != "-") {
    auto manifest = make_manifest(
        "predict", ensemble.config().seed, fingerprint_file(args.data),
        {{"model", args.model},
         {"data", args.data},
         {"threshold", args.has_threshold ? format_double(args.threshold) : std::string("none")},
         {"out", args.out}});
    write_manifest(manifest, args.out);
  }
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string data;
  std::string label_column = "label";
  std::string classes;
  std::string positive;
  std::string modes = "conformal,posterior";
  std::string estimators = "25,50,100";
  std::string feature_fractions = "0.25,0.5,0.75";
  std::string thresholds = "0.75,0.8,0.85,0.9,0.95";
  bool no_baselines = false;
  EnsembleConfig base;
  CvOptions cv;
  std::string out;
};

void run_evaluate(const EvaluateArgs& args) {
  GridAxes axes;
  axes.modes.clear();
  for (const auto& m : split(args.modes, ',')) {
    const auto mode = base_mode_from_string(m);
    if (!mode) throw CLI::ValidationError("--modes", "unknown mode '" + m + "'");
    axes.modes.push_back(*mode);
  }
  axes.n_estimators = parse_int_list(args.estimators, "--estimators");
  axes.feature_fractions = parse_double_list(args.feature_fractions, "--feature-fractions");
  axes.thresholds = parse_double_list(args.thresholds, "--thresholds");
  axes.include_baselines = !args.no_baselines;

  const Dataset ds = load_labeled(args.data, args.label_column, args.classes);
  if (ds.classes.size() < 2) throw DataError("evaluation needs at least two classes");
  CvOptions cv = args.cv;
  cv.positive = args.positive.empty() ? 1 : resolve_class(ds, args.positive, "--positive");

  const GridResult grid = run_grid(ds, axes, args.base, cv);
  const std::string csv = grid_to_csv(grid);
  const std::string summary = grid_summary(grid);
  if (args.out == "-") {
    std::cout << csv;
    std::cerr << summary;
  } else {
    write_text_file(args.out, csv);
    std::cout << summary;
    auto manifest = make_manifest(
        "evaluate", cv.seed, fingerprint_file(args.data),
        {{"data", args.data},
         {"label-column", args.label_column},
         {"positive", ds.classes[static_cast<std::size_t>(cv.positive)]},
         {"modes", args.modes},
         {"estimators", args.estimators},
         {"feature-fractions", args.feature_fractions},
         {"thresholds", args.thresholds},
         {"baselines", args.no_baselines ? "off" : "on"},
         {"k", std::to_string(cv.k)},
         {"repeats", std::to_string(cv.repeats)},
         {"threads", std::to_string(cv.n_threads)},
         {"out", args.out}});
    write_manifest(manifest, args.out);
  }
}

// ----------------------------------------------------------------- compare

struct CompareArgs {
  std::string data;
  std::string label_column = "label";
  std::string classes;
  std::string positive;
  std::vector<std::string> configs;
  CvOptions cv;
  std::string out;
};

GridCell parse_config_spec(const std::string& spec) {
  GridCell cell;
  cell.threshold = std::nullopt;
  for (const auto& piece : split(spec, ',')) {
    const auto eq = piece.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config", "expected key=value, got '" + piece + "'");
    }
    const std::string key = piece.substr(0, eq);
    const std::string value = piece.substr(eq + 1);
    try {
      if (key == "mode") {
        const auto mode = base_mode_from_string(value);
        if (!mode) throw std::invalid_argument(value);
        cell.mode = *mode;
      } else if (key == "estimators") {
        cell.n_estimators = std::stoi(value);
      } else if (key == "features") {
        cell.feature_fraction = std::stod(value);
      } else if (key == "threshold") {
        cell.threshold = std::stod(value);
      } else if (key == "identity") {
        cell.identity_bootstrap = value == "1" || value == "true";
      } else {
        throw std::invalid_argument(key);
      }
    } catch (const std::exception&) {
      throw CLI::ValidationError("--config", "bad entry '" + piece + "'");
    }
  }
  return cell;
}

void run_compare(const CompareArgs& args) {
  std::vector<GridCell> cells;
  for (const auto& spec : args.configs) cells.push_back(parse_config_spec(spec));

  const Dataset ds = load_labeled(args.data, args.label_column, args.classes);
  if (ds.classes.size() < 2) throw DataError("comparison needs at least two classes");
  CvOptions cv = args.cv;
  cv.positive = args.positive.empty() ? 1 : resolve_class(ds, args.positive, "--positive");

  std::vector<MetricsReport> reports;
  reports.reserve(cells.size());
  for (const auto& cell : cells) {
    reports.push_back(run_cv(ds, cell.to_config(EnsembleConfig{}), cv));
  }

  std::vector<const MetricsReport*> pointers;
  for (const auto& r : reports) pointers.push_back(&r);
  const auto paired = paired_f_measures(pointers);
  const std::size_t n_pairs = paired.empty() ? 0 : paired[0].size();

  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out += "config " + std::to_string(i + 1) + ": " + to_string(cells[i]);
    out += reports[i].f_measure
               ? " meanF=" + fmt3(reports[i].f_measure->mean)
               : " meanF=n/a";
    out += " empty%=" + fmt3(reports[i].empty_rate_pct.mean) + "\n";
  }
  out += "paired folds: " + std::to_string(n_pairs) + " of " +
         std::to_string(reports[0].n_iterations) + "\n";

  if (cells.size() == 2 && n_pairs > 0) {
    const auto w = wilcoxon_signed_rank(paired[0], paired[1]);
    out += "wilcoxon signed rank: ";
    out += w.statistic ? "W=" + format_double(*w.statistic) : "W=undefined";
    out += " p=" + format_double(w.p_value);
    out += w.exact ? " (exact)\n" : " (normal approximation)\n";
    double mean0 = 0.0, mean1 = 0.0;
    for (const double v : paired[0]) mean0 += v;
    for (const double v : paired[1]) mean1 += v;
    mean0 /= n_pairs;
    mean1 /= n_pairs;
    out += "winner by mean F over paired folds: config ";
    out += mean0 == mean1 ? "tie" : (mean0 > mean1 ? "1" : "2");
    out += "\n";
  }
  if (cells.size() >= 3 && n_pairs >= 2) {
    const auto fr = friedman_test(paired);
    out += "friedman: statistic=" + format_double(fr.statistic) +
           " p=" + format_double(fr.p_value) + "\n";
  }
  std::cout << out;

  if (!args.out.empty()) {
    std::string csv = "fold";
    for (std::size_t i = 0; i < cells.size(); ++i) csv += ",f_config" + std::to_string(i + 1);
    csv += "\n";
    for (std::size_t p = 0; p < n_pairs; ++p) {
      csv += std::to_string(p);
      for (const auto& column : paired) csv += "," + format_double(column[p]);
      csv += "\n";
    }
    write_text_file(args.out, csv);
    std::vector<std::pair<std::string, std::string>> config;
    config.emplace_back("data", args.data);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      config.emplace_back("config" + std::to_string(i + 1), to_string(cells[i]));
    }
    config.emplace_back("k", std::to_string(cv.k));
    config.emplace_back("repeats", std::to_string(cv.repeats));
    write_manifest(make_manifest("compare", cv.seed, fingerprint_file(args.data), config),
                   args.out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal-prediction ensembles for tabular classification"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic cohort CSV");
  gen_cmd->add_option("--n", gen.cfg.n_examples, "Number of examples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("--features", gen.cfg.n_features, "Number of numeric features")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("--balance", gen.cfg.class_balance, "Fraction of the first class")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9))
      ->capture_default_str();
  gen_cmd->add_option("--separation", gen.cfg.separation, "Distance between class means")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  gen_cmd->add_option("--noise", gen.cfg.noise_rate, "Fraction of labels flipped")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.cfg.seed, "RNG seed")->capture_default_str();
  gen_cmd->add_option("--class-names", gen.class_names, "Two class names")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output CSV path")->required();
  gen_cmd->callback([&] { run_gen_data(gen); });

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train and serialize an ensemble");
  train_cmd->add_option("--data", train.data, "Training CSV")->required();
  train_cmd->add_option("--label-column", train.label_column)->capture_default_str();
  train_cmd->add_option("--classes", train.classes, "Comma-separated class order");
  train_cmd->add_option("--mode", train.mode, "conformal|posterior|plain")
      ->capture_default_str();
  train_cmd->add_option("--estimators", train.cfg.n_estimators)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--feature-fraction", train.cfg.feature_fraction)
      ->check(CLI::Range(1e-9, 1.0))
      ->capture_default_str();
  train_cmd->add_option("--bootstrap-fraction", train.cfg.bootstrap_fraction)
      ->check(CLI::Range(1e-9, 1.0))
      ->capture_default_str();
  auto* train_thr = train_cmd->add_option("--threshold", train.threshold,
                                          "Credibility threshold; omit to disable gating")
                        ->check(CLI::Range(0.0, 1.0 - 1e-12));
  train_cmd->add_flag("--identity-bootstrap", train.cfg.identity_bootstrap,
                      "Use the training set verbatim instead of resampling");
  train_cmd->add_option("--smoothing", train.cfg.nb.smoothing, "Laplace pseudo-count")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  train_cmd->add_option("--seed", train.cfg.seed, "RNG seed")->capture_default_str();
  train_cmd->add_option("--out", train.out, "Model output path")->required();
  train_cmd->callback([&] {
    train.has_threshold = train_thr->count() > 0;
    run_train(train);
  });

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Per-example reports from a saved model");
  predict_cmd->add_option("--model", predict.model, "Model file from train")->required();
  predict_cmd->add_option("--data", predict.data, "CSV to predict")->required();
  predict_cmd->add_option("--label-column", predict.label_column,
                          "Column to drop if the CSV carries labels");
  auto* predict_thr =
      predict_cmd->add_option("--threshold", predict.threshold,
                              "Credibility threshold; omitted = every estimator votes")
          ->check(CLI::Range(0.0, 1.0 - 1e-12));
  predict_cmd->add_option("--out", predict.out, "Report CSV path ('-' for stdout)")->required();
  predict_cmd->add_option("--jsonl", predict.jsonl, "Also write JSON-lines here");
  predict_cmd->callback([&] {
    predict.has_threshold = predict_thr->count() > 0;
    run_predict(predict);
  });

  EvaluateArgs evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "Cross-validated parameter grid");
  eval_cmd->add_option("--data", evaluate.data, "Labeled CSV")->required();
  eval_cmd->add_option("--label-column", evaluate.label_column)->capture_default_str();
  eval_cmd->add_option("--classes", evaluate.classes, "Comma-separated class order");
  eval_cmd->add_option("--positive", evaluate.positive,
                       "Positive class name (default: second declared class)");
  eval_cmd->add_option("--modes", evaluate.modes)->capture_default_str();
  eval_cmd->add_option("--estimators", evaluate.estimators)->capture_default_str();
  eval_cmd->add_option("--feature-fractions", evaluate.feature_fractions)->capture_default_str();
  eval_cmd->add_option("--thresholds", evaluate.thresholds)->capture_default_str();
  eval_cmd->add_flag("--no-baselines", evaluate.no_baselines,
                     "Skip the plain-ensemble and simple-model baseline cells");
  eval_cmd->add_option("--k", evaluate.cv.k, "Folds")->check(CLI::Range(2, 1000))
      ->capture_default_str();
  eval_cmd->add_option("--repeats", evaluate.cv.repeats)->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_option("--seed", evaluate.cv.seed, "RNG seed")->capture_default_str();
  eval_cmd->add_option("--threads", evaluate.cv.n_threads, "0 = all cores")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  eval_cmd->add_option("--out", evaluate.out, "Grid CSV path ('-' for stdout)")->required();
  eval_cmd->callback([&] { run_evaluate(evaluate); });

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "Significance tests between configurations");
  compare_cmd->add_option("--data", compare.data, "Labeled CSV")->required();
  compare_cmd->add_option("--label-column", compare.label_column)->capture_default_str();
  compare_cmd->add_option("--classes", compare.classes, "Comma-separated class order");
  compare_cmd->add_option("--positive", compare.positive,
                          "Positive class name (default: second declared class)");
  compare_cmd
      ->add_option("--config", compare.configs,
                   "mode=conformal,estimators=50,features=0.75,threshold=0.85 (repeatable)")
      ->required()
      ->expected(2, 16);
  compare_cmd->add_option("--k", compare.cv.k, "Folds")->check(CLI::Range(2, 1000))
      ->capture_default_str();
  compare_cmd->add_option("--repeats", compare.cv.repeats)->check(CLI::PositiveNumber)
      ->capture_default_str();
  compare_cmd->add_option("--seed", compare.cv.seed, "RNG seed")->capture_default_str();
  compare_cmd->add_option("--threads", compare.cv.n_threads, "0 = all cores")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  compare_cmd->add_option("--out", compare.out, "Optional per-fold paired F CSV");
  compare_cmd->callback([&] { run_compare(compare); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
