#include "cpens/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cpens/error.hpp"
#include "cpens/parallel.hpp"
#include "cpens/rng.hpp"

namespace cpens {
namespace {

constexpr int kBootstrapRetries = 10;

bool covers_all_classes(const Dataset& train, const std::vector<int>& rows,
                        std::size_t n_classes) {
  std::vector<char> seen(n_classes, 0);
  std::size_t covered = 0;
  for (const int r : rows) {
    const auto c = static_cast<std::size_t>(*train.examples[static_cast<std::size_t>(r)].label);
    if (!seen[c]) {
      seen[c] = 1;
      if (++covered == n_classes) return true;
    }
  }
  return covered == n_classes;
}

std::vector<int> draw_bag(const Dataset& train, const EnsembleConfig& config, Rng& rng) {
  const auto n = static_cast<int>(train.size());
  if (config.identity_bootstrap) {
    std::vector<int> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
  }
  const int bag_size = std::max(1, static_cast<int>(std::lround(config.bootstrap_fraction * n)));
  const std::size_t n_classes = train.classes.size();
  std::vector<int> rows(static_cast<std::size_t>(bag_size));
  for (int attempt = 0; attempt < kBootstrapRetries; ++attempt) {
    for (auto& r : rows) r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (covers_all_classes(train, rows, n_classes)) return rows;
  }
  // Stratified fallback: resample within each class so the NB fit always
  // sees every class.
  std::vector<std::vector<int>> by_class(n_classes);
  for (int i = 0; i < n; ++i) {
    by_class[static_cast<std::size_t>(*train.examples[static_cast<std::size_t>(i)].label)]
        .push_back(i);
  }
  rows.clear();
  for (const auto& members : by_class) {
    const int take = std::max(
        1, static_cast<int>(std::lround(config.bootstrap_fraction * members.size())));
    for (int i = 0; i < take; ++i) {
      rows.push_back(members[rng.below(members.size())]);
    }
  }
  return rows;
}

}  // namespace

const char* to_string(BaseMode mode) {
  switch (mode) {
    case BaseMode::ConformalCredibility:
      return "conformal";
    case BaseMode::StandardPosterior:
      return "posterior";
    case BaseMode::StandardPlain:
      return "plain";
  }
  return "?";
}

std::optional<BaseMode> base_mode_from_string(std::string_view s) {
  if (s == "conformal" || s == "cp") return BaseMode::ConformalCredibility;
  if (s == "posterior") return BaseMode::StandardPosterior;
  if (s == "plain") return BaseMode::StandardPlain;
  return std::nullopt;
}

void validate(const EnsembleConfig& config) {
  if (config.n_estimators < 1) throw std::invalid_argument("n_estimators must be >= 1");
  if (!(config.feature_fraction > 0.0 && config.feature_fraction <= 1.0)) {
    throw std::invalid_argument("feature_fraction must be in (0, 1]");
  }
  if (!(config.bootstrap_fraction > 0.0 && config.bootstrap_fraction <= 1.0)) {
    throw std::invalid_argument("bootstrap_fraction must be in (0, 1]");
  }
  if (config.credibility_threshold &&
      !(*config.credibility_threshold >= 0.0 && *config.credibility_threshold < 1.0)) {
    throw std::invalid_argument("credibility_threshold must be in [0, 1)");
  }
  if (!(config.feature_report_fraction > 0.0 && config.feature_report_fraction <= 1.0)) {
    throw std::invalid_argument("feature_report_fraction must be in (0, 1]");
  }
}

ConformalEnsemble ConformalEnsemble::build(const Dataset& train, const EnsembleConfig& config) {
  validate(config);
  if (train.schema.empty()) throw DataError("training data has no features");
  if (train.classes.size() < 2) throw DataError("training data needs at least two classes");
  const auto class_counts = train.class_counts();
  for (std::size_t c = 0; c < train.classes.size(); ++c) {
    if (class_counts[c] == 0) {
      throw DataError("class '" + train.classes[c] + "' absent from training data");
    }
  }
  for (const auto& ex : train.examples) {
    if (!ex.label) throw DataError("training example '" + ex.id + "' is unlabeled");
  }

  const auto d = static_cast<int>(train.schema.size());
  // The small epsilon keeps decimal fractions like 0.3 * 10 from ceiling up
  // through floating-point excess.
  const int subset_size = std::clamp(
      static_cast<int>(std::ceil(config.feature_fraction * d - 1e-9)), 1, d);

  ConformalEnsemble ensemble;
  ensemble.schema_ = train.schema;
  ensemble.classes_ = train.classes;
  ensemble.config_ = config;
  ensemble.estimators_.reserve(static_cast<std::size_t>(config.n_estimators));

  for (int i = 0; i < config.n_estimators; ++i) {
    Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(i)));
    const std::vector<int> rows = draw_bag(train, config, rng);
    std::vector<int> subset = rng.sample_without_replacement(d, subset_size);
    Dataset bag = project_features(subset_rows(train, rows), subset);

    Estimator estimator;
    estimator.subset = std::move(subset);
    if (config.base_mode == BaseMode::ConformalCredibility) {
      estimator.cp.emplace(std::move(bag), estimator.subset, config.nb);
    } else {
      estimator.nb.emplace(NaiveBayesModel::fit(bag, config.nb));
    }
    ensemble.estimators_.push_back(std::move(estimator));
  }
  return ensemble;
}

EnsembleVerdict aggregate_votes(const std::string& example_id, std::span<const BaseVote> votes,
                                std::span<const std::vector<int>> subsets,
                                const std::vector<FeatureSpec>& schema, std::size_t n_classes,
                                std::optional<double> threshold,
                                double feature_report_fraction) {
  EnsembleVerdict verdict;
  verdict.example_id = example_id;
  verdict.vote_counts.assign(n_classes, 0);

  std::vector<double> cred_by_label(n_classes, 0.0);
  std::vector<int> feature_counts(schema.size(), 0);
  double cred_sum = 0.0;
  double conf_sum = 0.0;
  int trusted = 0;

  for (std::size_t i = 0; i < votes.size(); ++i) {
    const BaseVote& vote = votes[i];
    if (threshold && !(vote.score > *threshold)) continue;
    ++trusted;
    verdict.vote_counts[static_cast<std::size_t>(vote.label)]++;
    cred_by_label[static_cast<std::size_t>(vote.label)] += vote.credibility;
    cred_sum += vote.credibility;
    conf_sum += vote.confidence;
    for (const int f : subsets[i]) feature_counts[static_cast<std::size_t>(f)]++;
  }

  verdict.trustworthy_fraction = static_cast<double>(trusted) / votes.size();
  if (trusted == 0) return verdict;  // unpredictable

  std::size_t winner = 0;
  for (std::size_t c = 1; c < n_classes; ++c) {
    const auto& v = verdict.vote_counts;
    if (v[c] > v[winner] || (v[c] == v[winner] && cred_by_label[c] > cred_by_label[winner])) {
      winner = c;
    }
  }
  verdict.label = static_cast<int>(winner);
  verdict.mean_credibility = cred_sum / trusted;
  verdict.mean_confidence = conf_sum / trusted;

  std::vector<std::pair<int, std::string>> frequent;  // (-count, name) for ordering
  for (std::size_t f = 0; f < schema.size(); ++f) {
    if (feature_counts[f] >= feature_report_fraction * trusted - 1e-9) {
      frequent.emplace_back(-feature_counts[f], schema[f].name);
    }
  }
  std::sort(frequent.begin(), frequent.end());
  verdict.frequent_features.reserve(frequent.size());
  for (auto& [neg_count, name] : frequent) {
    verdict.frequent_features.push_back(std::move(name));
  }
  return verdict;
}

EnsembleVerdict ConformalEnsemble::predict(const Example& test) const {
  if (test.values.size() != schema_.size()) {
    throw DataError("example '" + test.id + "' does not match the ensemble schema");
  }
  const std::size_t k = classes_.size();

  std::vector<BaseVote> votes;
  std::vector<std::vector<int>> subsets;
  votes.reserve(estimators_.size());
  subsets.reserve(estimators_.size());
  for (const auto& estimator : estimators_) {
    BaseVote vote;
    if (estimator.cp) {
      const ForcedPrediction fp = estimator.cp->forced_prediction(test);
      vote = {fp.label, fp.credibility, fp.confidence, fp.credibility};
    } else {
      const auto posterior = estimator.nb->posterior(project_example(test, estimator.subset));
      std::size_t best = 0;
      for (std::size_t c = 1; c < k; ++c) {
        if (posterior[c] > posterior[best]) best = c;
      }
      double second = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        if (c != best) second = std::max(second, posterior[c]);
      }
      vote.label = static_cast<int>(best);
      vote.credibility = posterior[best];
      vote.confidence = 1.0 - second;
      vote.score = config_.base_mode == BaseMode::StandardPosterior ? posterior[best] : 1.0;
    }
    votes.push_back(vote);
    subsets.push_back(estimator.subset);
  }
  return aggregate_votes(test.id, votes, subsets, schema_, k, config_.credibility_threshold,
                         config_.feature_report_fraction);
}

std::vector<EnsembleVerdict> ConformalEnsemble::predict_batch(const std::vector<Example>& tests,
                                                              int n_threads) const {
  std::vector<EnsembleVerdict> verdicts(tests.size());
  parallel_for(tests.size(), n_threads,
               [&](std::size_t i) { verdicts[i] = predict(tests[i]); });
  return verdicts;
}

void ConformalEnsemble::set_credibility_threshold(std::optional<double> threshold) {
  if (threshold && !(*threshold >= 0.0 && *threshold < 1.0)) {
    throw std::invalid_argument("credibility_threshold must be in [0, 1)");
  }
  config_.credibility_threshold = threshold;
}

namespace {

nlohmann::json schema_to_json(const std::vector<FeatureSpec>& schema) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& spec : schema) {
    nlohmann::json s;
    s["name"] = spec.name;
    s["kind"] = spec.kind == FeatureKind::Numeric ? "numeric" : "categorical";
    if (spec.kind == FeatureKind::Categorical) s["categories"] = spec.categories;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<FeatureSpec> schema_from_json(const nlohmann::json& j) {
  std::vector<FeatureSpec> schema;
  for (const auto& s : j) {
    FeatureSpec spec;
    spec.name = s.at("name").get<std::string>();
    const auto kind = s.at("kind").get<std::string>();
    if (kind == "numeric") {
      spec.kind = FeatureKind::Numeric;
    } else if (kind == "categorical") {
      spec.kind = FeatureKind::Categorical;
      spec.categories = s.at("categories").get<std::vector<std::string>>();
    } else {
      throw DataError("unknown feature kind: " + kind);
    }
    schema.push_back(std::move(spec));
  }
  return schema;
}

nlohmann::json bag_to_json(const Dataset& bag) {
  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& ex : bag.examples) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& cell : ex.values) {
      if (cell) {
        row.push_back(*cell);
      } else {
        row.push_back(nullptr);
      }
    }
    rows.push_back(std::move(row));
    labels.push_back(*ex.label);
  }
  return {{"labels", std::move(labels)}, {"rows", std::move(rows)}};
}

Dataset bag_from_json(const nlohmann::json& j, const std::vector<FeatureSpec>& bag_schema,
                      const std::vector<std::string>& classes) {
  Dataset bag;
  bag.schema = bag_schema;
  bag.classes = classes;
  const auto& labels = j.at("labels");
  const auto& rows = j.at("rows");
  if (labels.size() != rows.size()) throw DataError("malformed ensemble model bag");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Example ex;
    ex.id = std::to_string(i);
    ex.label = labels[i].get<int>();
    for (const auto& cell : rows[i]) {
      ex.values.push_back(cell.is_null() ? Cell{} : Cell{cell.get<double>()});
    }
    if (ex.values.size() != bag_schema.size()) throw DataError("malformed ensemble model bag");
    bag.examples.push_back(std::move(ex));
  }
  return bag;
}

}  // namespace

nlohmann::json ConformalEnsemble::to_json() const {
  nlohmann::json j;
  j["format"] = "cpens-ensemble";
  j["version"] = kFormatVersion;
  nlohmann::json cfg;
  cfg["n_estimators"] = config_.n_estimators;
  cfg["feature_fraction"] = config_.feature_fraction;
  cfg["bootstrap_fraction"] = config_.bootstrap_fraction;
  if (config_.credibility_threshold) {
    cfg["credibility_threshold"] = *config_.credibility_threshold;
  } else {
    cfg["credibility_threshold"] = nullptr;
  }
  cfg["base_mode"] = to_string(config_.base_mode);
  cfg["seed"] = config_.seed;
  cfg["feature_report_fraction"] = config_.feature_report_fraction;
  cfg["identity_bootstrap"] = config_.identity_bootstrap;
  cfg["nb"] = {{"smoothing", config_.nb.smoothing},
               {"variance_floor_rel", config_.nb.variance_floor_rel},
               {"variance_floor_abs", config_.nb.variance_floor_abs}};
  j["config"] = std::move(cfg);
  j["schema"] = schema_to_json(schema_);
  j["classes"] = classes_;

  nlohmann::json estimators = nlohmann::json::array();
  for (const auto& estimator : estimators_) {
    nlohmann::json e;
    e["subset"] = estimator.subset;
    if (estimator.cp) {
      e["bag"] = bag_to_json(estimator.cp->bag());
    } else {
      e["model"] = estimator.nb->to_json();
    }
    estimators.push_back(std::move(e));
  }
  j["estimators"] = std::move(estimators);
  return j;
}

ConformalEnsemble ConformalEnsemble::from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != "cpens-ensemble") {
    throw DataError("not a cpens ensemble model file");
  }
  if (j.value("version", -1) != kFormatVersion) {
    throw DataError("unsupported ensemble model version " +
                    std::to_string(j.value("version", -1)) + " (expected " +
                    std::to_string(kFormatVersion) + ")");
  }
  ConformalEnsemble ensemble;
  const auto& cfg = j.at("config");
  ensemble.config_.n_estimators = cfg.at("n_estimators").get<int>();
  ensemble.config_.feature_fraction = cfg.at("feature_fraction").get<double>();
  ensemble.config_.bootstrap_fraction = cfg.at("bootstrap_fraction").get<double>();
  if (!cfg.at("credibility_threshold").is_null()) {
    ensemble.config_.credibility_threshold = cfg.at("credibility_threshold").get<double>();
  }
  const auto mode = base_mode_from_string(cfg.at("base_mode").get<std::string>());
  if (!mode) throw DataError("unknown base mode in model file");
  ensemble.config_.base_mode = *mode;
  ensemble.config_.seed = cfg.at("seed").get<std::uint64_t>();
  ensemble.config_.feature_report_fraction = cfg.at("feature_report_fraction").get<double>();
  ensemble.config_.identity_bootstrap = cfg.at("identity_bootstrap").get<bool>();
  ensemble.config_.nb.smoothing = cfg.at("nb").at("smoothing").get<double>();
  ensemble.config_.nb.variance_floor_rel = cfg.at("nb").at("variance_floor_rel").get<double>();
  ensemble.config_.nb.variance_floor_abs = cfg.at("nb").at("variance_floor_abs").get<double>();

  ensemble.schema_ = schema_from_json(j.at("schema"));
  ensemble.classes_ = j.at("classes").get<std::vector<std::string>>();
  if (ensemble.classes_.size() < 2) throw DataError("model declares fewer than two classes");

  for (const auto& e : j.at("estimators")) {
    Estimator estimator;
    estimator.subset = e.at("subset").get<std::vector<int>>();
    std::vector<FeatureSpec> bag_schema;
    for (const int f : estimator.subset) {
      if (f < 0 || f >= static_cast<int>(ensemble.schema_.size())) {
        throw DataError("estimator subset index out of range");
      }
      bag_schema.push_back(ensemble.schema_[static_cast<std::size_t>(f)]);
    }
    if (e.contains("bag")) {
      estimator.cp.emplace(bag_from_json(e.at("bag"), bag_schema, ensemble.classes_),
                           estimator.subset, ensemble.config_.nb);
    } else {
      estimator.nb.emplace(NaiveBayesModel::from_json(e.at("model")));
    }
    ensemble.estimators_.push_back(std::move(estimator));
  }
  if (ensemble.estimators_.empty()) throw DataError("model contains no estimators");
  return ensemble;
}

void ConformalEnsemble::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out << to_json().dump(1) << '\n';
  if (!out) throw DataError("write failed: " + path);
}

ConformalEnsemble ConformalEnsemble::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt model file " + path + ": " + e.what());
  }
  try {
    return from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt model file " + path + ": " + e.what());
  }
}

}  // namespace cpens
