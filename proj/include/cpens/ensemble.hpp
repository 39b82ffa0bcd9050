#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpens/conformal.hpp"

namespace cpens {

enum class BaseMode {
  ConformalCredibility,  // CP forced prediction, gated by credibility
  StandardPosterior,     // NB prediction, gated by the max posterior
  StandardPlain,         // NB prediction, never gated
};

const char* to_string(BaseMode mode);
std::optional<BaseMode> base_mode_from_string(std::string_view s);

struct EnsembleConfig {
  int n_estimators = 50;
  double feature_fraction = 0.75;   // subset size = ceil(fraction * n_features)
  double bootstrap_fraction = 1.0;  // bag size = round(fraction * n_train)
  std::optional<double> credibility_threshold;  // nullopt: every estimator votes
  BaseMode base_mode = BaseMode::ConformalCredibility;
  std::uint64_t seed = 0;
  double feature_report_fraction = 0.8;
  bool identity_bootstrap = false;  // use the training set verbatim as the bag
  NbConfig nb;
};

void validate(const EnsembleConfig& config);

struct EnsembleVerdict {
  std::string example_id;
  std::optional<int> label;                // nullopt: unpredictable
  std::optional<double> mean_credibility;  // over trustworthy estimators
  std::optional<double> mean_confidence;
  double trustworthy_fraction = 0.0;
  std::vector<int> vote_counts;  // per class, trustworthy votes only
  std::vector<std::string> frequent_features;  // by selection frequency, then name

  bool unpredictable() const { return !label.has_value(); }
  bool operator==(const EnsembleVerdict&) const = default;
};

// One base estimator's contribution to a prediction.
struct BaseVote {
  int label = 0;
  double credibility = 0.0;
  double confidence = 0.0;
  double score = 0.0;  // compared against the credibility threshold
};

// Aggregation step of predict, exposed on its own: applies the strict
// trustworthiness gate, majority vote with the summed-credibility tie-break,
// and the frequent-feature report. votes[i] pairs with subsets[i].
EnsembleVerdict aggregate_votes(const std::string& example_id, std::span<const BaseVote> votes,
                                std::span<const std::vector<int>> subsets,
                                const std::vector<FeatureSpec>& schema, std::size_t n_classes,
                                std::optional<double> threshold,
                                double feature_report_fraction);

// Random-Patches ensemble: each base estimator is trained on a bootstrap
// sample of the examples and a global random subset of the features. An
// estimator votes only when its uncertainty score clears the credibility
// threshold; when no estimator does, the example is unpredictable.
class ConformalEnsemble {
 public:
  struct Estimator {
    std::vector<int> subset;  // ascending original-schema indices
    std::optional<ConformalPredictor> cp;  // ConformalCredibility mode
    std::optional<NaiveBayesModel> nb;     // standard modes
  };

  static ConformalEnsemble build(const Dataset& train, const EnsembleConfig& config);

  EnsembleVerdict predict(const Example& test) const;
  std::vector<EnsembleVerdict> predict_batch(const std::vector<Example>& tests,
                                             int n_threads = 1) const;

  const EnsembleConfig& config() const { return config_; }
  const std::vector<FeatureSpec>& schema() const { return schema_; }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<Estimator>& estimators() const { return estimators_; }

  // The trustworthiness gate is a predict-time parameter; flipping it does
  // not touch the trained estimators.
  void set_credibility_threshold(std::optional<double> threshold);

  nlohmann::json to_json() const;
  static ConformalEnsemble from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static ConformalEnsemble load(const std::string& path);

  static constexpr int kFormatVersion = 1;

 private:
  std::vector<FeatureSpec> schema_;
  std::vector<std::string> classes_;
  EnsembleConfig config_;
  std::vector<Estimator> estimators_;
};

}  // namespace cpens
