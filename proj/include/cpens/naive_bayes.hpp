#pragma once

#include <vector>

#include <json.hpp>

#include "cpens/dataset.hpp"

namespace cpens {

struct NbConfig {
  double smoothing = 1.0;            // Laplace pseudo-count for categorical features
  double variance_floor_rel = 1e-9;  // floor = max(rel * global feature variance, abs)
  double variance_floor_abs = 1e-12;

  bool operator==(const NbConfig&) const = default;
};

struct GaussianStat {
  double mean = 0.0;
  double var = 1.0;

  bool operator==(const GaussianStat&) const = default;
};

// Gaussian / categorical Naive Bayes. Variances use the maximum-likelihood
// divisor n and are clamped from below; categorical conditionals are
// Laplace-smoothed. Missing values are skipped when fitting and contribute
// nothing when scoring.
class NaiveBayesModel {
 public:
  static NaiveBayesModel fit(const Dataset& train, const NbConfig& config = {});

  // Per-class posterior aligned with the class set, computed in the log
  // domain with log-sum-exp normalization (naive products underflow). A
  // category index never declared by the model's schema is treated as
  // missing.
  std::vector<double> posterior(const Example& ex) const;

  // -log posterior of `label`; the posterior is clamped below by
  // kPosteriorFloor so the score stays finite.
  double nonconformity(const Example& ex, int label) const;

  const std::vector<FeatureSpec>& schema() const { return schema_; }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<double>& priors() const { return priors_; }
  const NbConfig& config() const { return config_; }
  const GaussianStat& numeric_stat(int c, int f) const {
    return numeric_[index(c, f)];
  }
  const std::vector<double>& category_probs(int c, int f) const {
    return cat_probs_[index(c, f)];
  }

  nlohmann::json to_json() const;
  static NaiveBayesModel from_json(const nlohmann::json& j);

  bool operator==(const NaiveBayesModel& other) const;

  static constexpr double kPosteriorFloor = 1e-300;
  static constexpr int kFormatVersion = 1;

 private:
  std::size_t index(int c, int f) const {
    return static_cast<std::size_t>(c) * schema_.size() + static_cast<std::size_t>(f);
  }
  void derive_log_tables();
  double joint_log_score(const Example& ex, int c) const;

  std::vector<FeatureSpec> schema_;
  std::vector<std::string> classes_;
  NbConfig config_;
  std::vector<double> priors_;
  std::vector<GaussianStat> numeric_;       // [c * d + f]; defaulted for categorical features
  std::vector<std::vector<double>> cat_probs_;  // [c * d + f]; empty for numeric features

  // Derived at construction, never serialized.
  std::vector<double> log_priors_;
  std::vector<double> numeric_log_norm_;  // -0.5 * log(2 pi var)
  std::vector<std::vector<double>> cat_log_probs_;
};

}  // namespace cpens
