#include "cpens/conformal.hpp"

#include <numeric>
#include <stdexcept>

#include "cpens/error.hpp"

namespace cpens {
namespace {

std::vector<int> identity_subset(std::size_t n) {
  std::vector<int> subset(n);
  std::iota(subset.begin(), subset.end(), 0);
  return subset;
}

void check_bag(const Dataset& bag) {
  if (bag.examples.empty()) throw std::invalid_argument("conformal bag must be non-empty");
  if (bag.classes.size() < 2) {
    throw std::invalid_argument("conformal prediction needs at least two classes");
  }
  for (const int count : bag.class_counts()) {
    if (count == 0) throw std::invalid_argument("every class must appear in the conformal bag");
  }
}

}  // namespace

ForcedPrediction forced_from(const PValues& p) {
  if (p.size() < 2) throw std::invalid_argument("forced prediction needs at least two classes");
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p.counts[i] > p.counts[best]) best = i;
  }
  int second = -1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i != best && p.counts[i] > second) second = p.counts[i];
  }
  ForcedPrediction fp;
  fp.label = static_cast<int>(best);
  fp.credibility = p.value(best);
  fp.confidence = 1.0 - static_cast<double>(second) / static_cast<double>(p.denominator);
  return fp;
}

std::vector<int> region_from(const PValues& p, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0, 1)");
  }
  std::vector<int> region;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.value(i) > epsilon) region.push_back(static_cast<int>(i));
  }
  return region;
}

ConformalPredictor::ConformalPredictor(Dataset bag, std::vector<int> feature_subset, NbConfig nb)
    : bag_(std::move(bag)), subset_(std::move(feature_subset)), nb_(nb) {
  check_bag(bag_);
  if (subset_.size() != bag_.schema.size()) {
    throw std::invalid_argument("feature subset size does not match the bag schema");
  }
}

ConformalPredictor::ConformalPredictor(Dataset bag, NbConfig nb)
    : bag_(std::move(bag)), subset_(identity_subset(bag_.schema.size())), nb_(nb) {
  check_bag(bag_);
}

PValues ConformalPredictor::p_values(const Example& test) const {
  PValues out;
  out.denominator = static_cast<int>(bag_.examples.size()) + 1;
  out.counts.resize(bag_.classes.size());

  Dataset augmented = bag_;
  augmented.examples.push_back(project_example(test, subset_));

  for (std::size_t y = 0; y < bag_.classes.size(); ++y) {
    augmented.examples.back().label = static_cast<int>(y);
    const NaiveBayesModel model = NaiveBayesModel::fit(augmented, nb_);
    const double alpha_test =
        model.nonconformity(augmented.examples.back(), static_cast<int>(y));
    int count = 0;
    for (const auto& member : augmented.examples) {
      if (model.nonconformity(member, *member.label) >= alpha_test) ++count;
    }
    out.counts[y] = count;
  }
  return out;
}

std::vector<int> ConformalPredictor::prediction_region(const Example& test, double epsilon) const {
  return region_from(p_values(test), epsilon);
}

ForcedPrediction ConformalPredictor::forced_prediction(const Example& test) const {
  return forced_from(p_values(test));
}

}  // namespace cpens
