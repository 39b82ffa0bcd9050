#pragma once

#include <vector>

#include "cpens/naive_bayes.hpp"

namespace cpens {

// P-values kept as exact counts over the augmented bag: value = count / denominator,
// so every p-value is a multiple of 1/denominator and at least 1/denominator.
struct PValues {
  std::vector<int> counts;
  int denominator = 0;

  double value(std::size_t i) const {
    return static_cast<double>(counts[i]) / static_cast<double>(denominator);
  }
  std::size_t size() const { return counts.size(); }
};

struct ForcedPrediction {
  int label = 0;
  double credibility = 0.0;  // largest p-value
  double confidence = 0.0;   // 1 - second largest p-value
};

// Argmax of the p-values; ties break toward the lowest class index.
ForcedPrediction forced_from(const PValues& p);
// Labels with p-value strictly above epsilon; epsilon must lie in (0, 1).
std::vector<int> region_from(const PValues& p, double epsilon);

// Transductive conformal predictor over one training bag. For each candidate
// label the bag is augmented with (test, label), the NB model is refit on the
// augmented bag, and the p-value counts how many members (the test example
// included) score at least as nonconforming as the test example.
class ConformalPredictor {
 public:
  // `bag` must already be restricted to `feature_subset`, which holds the
  // original schema indices and is used to project incoming examples.
  ConformalPredictor(Dataset bag, std::vector<int> feature_subset, NbConfig nb);
  // Full-feature convenience constructor.
  explicit ConformalPredictor(Dataset bag, NbConfig nb = {});

  PValues p_values(const Example& test) const;
  std::vector<int> prediction_region(const Example& test, double epsilon) const;
  ForcedPrediction forced_prediction(const Example& test) const;

  const Dataset& bag() const { return bag_; }
  const std::vector<int>& feature_subset() const { return subset_; }
  const NbConfig& nb_config() const { return nb_; }

 private:
  Dataset bag_;
  std::vector<int> subset_;
  NbConfig nb_;
};

}  // namespace cpens
