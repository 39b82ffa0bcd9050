#include "cpens/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cpens/error.hpp"

namespace cpens {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  int count = 0;
};

// Two-pass mean/variance with divisor n (maximum likelihood).
Moments moments(const std::vector<double>& values) {
  Moments m;
  m.count = static_cast<int>(values.size());
  if (m.count == 0) return m;
  double sum = 0.0;
  for (const double v : values) sum += v;
  m.mean = sum / m.count;
  double sq = 0.0;
  for (const double v : values) sq += (v - m.mean) * (v - m.mean);
  m.var = sq / m.count;
  return m;
}

}  // namespace

NaiveBayesModel NaiveBayesModel::fit(const Dataset& train, const NbConfig& config) {
  if (train.examples.empty()) throw DataError("cannot fit on an empty dataset");
  if (train.classes.empty()) throw DataError("training data declares no classes");

  NaiveBayesModel model;
  model.schema_ = train.schema;
  model.classes_ = train.classes;
  model.config_ = config;

  const std::size_t k = train.classes.size();
  const std::size_t d = train.schema.size();

  std::vector<int> counts(k, 0);
  for (const auto& ex : train.examples) {
    if (!ex.label) throw DataError("training example '" + ex.id + "' is unlabeled");
    counts[static_cast<std::size_t>(*ex.label)]++;
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) throw DataError("class '" + train.classes[c] + "' absent from training data");
  }

  model.priors_.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    model.priors_[c] = static_cast<double>(counts[c]) / static_cast<double>(train.examples.size());
  }

  model.numeric_.assign(k * d, GaussianStat{});
  model.cat_probs_.assign(k * d, {});

  std::vector<double> pool;
  for (std::size_t f = 0; f < d; ++f) {
    if (train.schema[f].kind == FeatureKind::Numeric) {
      pool.clear();
      for (const auto& ex : train.examples) {
        if (ex.values[f]) pool.push_back(*ex.values[f]);
      }
      // A feature with no observed value at all gets a shared neutral stat;
      // identical parameters across classes cancel in the posterior.
      const Moments global = pool.empty() ? Moments{0.0, 1.0, 0} : moments(pool);
      const double floor =
          std::max(config.variance_floor_rel * global.var, config.variance_floor_abs);
      for (std::size_t c = 0; c < k; ++c) {
        pool.clear();
        for (const auto& ex : train.examples) {
          if (static_cast<std::size_t>(*ex.label) == c && ex.values[f]) {
            pool.push_back(*ex.values[f]);
          }
        }
        GaussianStat stat;
        if (pool.empty()) {
          stat.mean = global.mean;
          stat.var = std::max(global.var, floor);
        } else {
          const Moments m = moments(pool);
          stat.mean = m.mean;
          stat.var = std::max(m.var, floor);
        }
        model.numeric_[c * d + f] = stat;
      }
    } else {
      const auto n_cats = train.schema[f].categories.size();
      for (std::size_t c = 0; c < k; ++c) {
        std::vector<int> cat_counts(n_cats, 0);
        int observed = 0;
        for (const auto& ex : train.examples) {
          if (static_cast<std::size_t>(*ex.label) != c || !ex.values[f]) continue;
          const double v = *ex.values[f];
          if (v != std::floor(v) || v < 0 || v >= static_cast<double>(n_cats)) {
            throw DataError("example '" + ex.id + "': invalid category index for feature '" +
                            train.schema[f].name + "'");
          }
          cat_counts[static_cast<std::size_t>(v)]++;
          ++observed;
        }
        std::vector<double> probs(n_cats);
        const double denom = observed + config.smoothing * static_cast<double>(n_cats);
        for (std::size_t i = 0; i < n_cats; ++i) {
          probs[i] = denom > 0.0 ? (cat_counts[i] + config.smoothing) / denom
                                 : 1.0 / static_cast<double>(n_cats);
        }
        model.cat_probs_[c * d + f] = std::move(probs);
      }
    }
  }

  model.derive_log_tables();
  return model;
}

void NaiveBayesModel::derive_log_tables() {
  log_priors_.resize(priors_.size());
  for (std::size_t c = 0; c < priors_.size(); ++c) log_priors_[c] = std::log(priors_[c]);

  numeric_log_norm_.assign(numeric_.size(), 0.0);
  cat_log_probs_.assign(cat_probs_.size(), {});
  for (std::size_t i = 0; i < numeric_.size(); ++i) {
    numeric_log_norm_[i] = -0.5 * (kLog2Pi + std::log(numeric_[i].var));
  }
  for (std::size_t i = 0; i < cat_probs_.size(); ++i) {
    cat_log_probs_[i].resize(cat_probs_[i].size());
    for (std::size_t j = 0; j < cat_probs_[i].size(); ++j) {
      cat_log_probs_[i][j] = std::log(cat_probs_[i][j]);
    }
  }
}

double NaiveBayesModel::joint_log_score(const Example& ex, int c) const {
  double score = log_priors_[static_cast<std::size_t>(c)];
  const std::size_t d = schema_.size();
  for (std::size_t f = 0; f < d; ++f) {
    if (!ex.values[f]) continue;
    const double v = *ex.values[f];
    const std::size_t i = index(c, static_cast<int>(f));
    if (schema_[f].kind == FeatureKind::Numeric) {
      const GaussianStat& stat = numeric_[i];
      const double diff = v - stat.mean;
      score += numeric_log_norm_[i] - diff * diff / (2.0 * stat.var);
    } else {
      // Out-of-range category indices (test-only categories) act as missing.
      if (v != std::floor(v) || v < 0 ||
          v >= static_cast<double>(cat_log_probs_[i].size())) {
        continue;
      }
      score += cat_log_probs_[i][static_cast<std::size_t>(v)];
    }
  }
  return score;
}

std::vector<double> NaiveBayesModel::posterior(const Example& ex) const {
  if (ex.values.size() != schema_.size()) {
    throw DataError("example '" + ex.id + "' does not match the model schema");
  }
  const std::size_t k = classes_.size();
  std::vector<double> scores(k);
  double max_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    scores[c] = joint_log_score(ex, static_cast<int>(c));
    max_score = std::max(max_score, scores[c]);
  }
  if (!std::isfinite(max_score)) return priors_;  // every class scored -inf
  double sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    scores[c] = std::exp(scores[c] - max_score);
    sum += scores[c];
  }
  for (auto& s : scores) s /= sum;
  return scores;
}

double NaiveBayesModel::nonconformity(const Example& ex, int label) const {
  if (label < 0 || label >= static_cast<int>(classes_.size())) {
    throw std::invalid_argument("candidate label out of range");
  }
  const double p = posterior(ex)[static_cast<std::size_t>(label)];
  return -std::log(std::max(p, kPosteriorFloor));
}

nlohmann::json NaiveBayesModel::to_json() const {
  nlohmann::json j;
  j["format"] = "cpens-nb";
  j["version"] = kFormatVersion;
  j["config"] = {{"smoothing", config_.smoothing},
                 {"variance_floor_rel", config_.variance_floor_rel},
                 {"variance_floor_abs", config_.variance_floor_abs}};
  j["classes"] = classes_;
  nlohmann::json schema = nlohmann::json::array();
  for (const auto& spec : schema_) {
    nlohmann::json s;
    s["name"] = spec.name;
    s["kind"] = spec.kind == FeatureKind::Numeric ? "numeric" : "categorical";
    if (spec.kind == FeatureKind::Categorical) s["categories"] = spec.categories;
    schema.push_back(std::move(s));
  }
  j["schema"] = std::move(schema);
  j["priors"] = priors_;
  nlohmann::json numeric = nlohmann::json::array();
  nlohmann::json categorical = nlohmann::json::array();
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    nlohmann::json num_row = nlohmann::json::array();
    nlohmann::json cat_row = nlohmann::json::array();
    for (std::size_t f = 0; f < schema_.size(); ++f) {
      const std::size_t i = c * schema_.size() + f;
      if (schema_[f].kind == FeatureKind::Numeric) {
        num_row.push_back({{"mean", numeric_[i].mean}, {"var", numeric_[i].var}});
        cat_row.push_back(nullptr);
      } else {
        num_row.push_back(nullptr);
        cat_row.push_back(cat_probs_[i]);
      }
    }
    numeric.push_back(std::move(num_row));
    categorical.push_back(std::move(cat_row));
  }
  j["numeric_stats"] = std::move(numeric);
  j["categorical_probs"] = std::move(categorical);
  return j;
}

NaiveBayesModel NaiveBayesModel::from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != "cpens-nb") {
    throw DataError("not a cpens naive bayes model");
  }
  if (j.value("version", -1) != kFormatVersion) {
    throw DataError("unsupported naive bayes model version");
  }
  NaiveBayesModel model;
  const auto& cfg = j.at("config");
  model.config_.smoothing = cfg.at("smoothing").get<double>();
  model.config_.variance_floor_rel = cfg.at("variance_floor_rel").get<double>();
  model.config_.variance_floor_abs = cfg.at("variance_floor_abs").get<double>();
  model.classes_ = j.at("classes").get<std::vector<std::string>>();
  for (const auto& s : j.at("schema")) {
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
    model.schema_.push_back(std::move(spec));
  }
  model.priors_ = j.at("priors").get<std::vector<double>>();
  const auto& numeric = j.at("numeric_stats");
  const auto& categorical = j.at("categorical_probs");
  const std::size_t k = model.classes_.size();
  const std::size_t d = model.schema_.size();
  if (model.priors_.size() != k || numeric.size() != k || categorical.size() != k) {
    throw DataError("malformed naive bayes model");
  }
  model.numeric_.assign(k * d, GaussianStat{});
  model.cat_probs_.assign(k * d, {});
  for (std::size_t c = 0; c < k; ++c) {
    if (numeric[c].size() != d || categorical[c].size() != d) {
      throw DataError("malformed naive bayes model");
    }
    for (std::size_t f = 0; f < d; ++f) {
      const std::size_t i = c * d + f;
      if (model.schema_[f].kind == FeatureKind::Numeric) {
        model.numeric_[i] = {numeric[c][f].at("mean").get<double>(),
                             numeric[c][f].at("var").get<double>()};
      } else {
        model.cat_probs_[i] = categorical[c][f].get<std::vector<double>>();
        if (model.cat_probs_[i].size() != model.schema_[f].categories.size()) {
          throw DataError("malformed naive bayes model");
        }
      }
    }
  }
  model.derive_log_tables();
  return model;
}

bool NaiveBayesModel::operator==(const NaiveBayesModel& other) const {
  return schema_ == other.schema_ && classes_ == other.classes_ && config_ == other.config_ &&
         priors_ == other.priors_ && numeric_ == other.numeric_ && cat_probs_ == other.cat_probs_;
}

}  // namespace cpens
