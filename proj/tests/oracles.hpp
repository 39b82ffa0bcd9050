#pragma once

// Test-only reference implementations, written straight from the defining
// formulas with naive loops and kept independent of the library code paths
// they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cpens/dataset.hpp"
#include "cpens/naive_bayes.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Naive transductive p-values: for each candidate label append (test, label),
// refit a from-scratch NB on the augmented bag, score every member with its
// own label, count how many score at least the test's nonconformity.

struct NaiveNb {
  int n_classes = 0;
  std::vector<double> log_priors;
  // per class, per feature
  std::vector<std::vector<double>> means;
  std::vector<std::vector<double>> vars;
  std::vector<std::vector<std::vector<double>>> cat_probs;
};

inline NaiveNb naive_fit(const cpens::Dataset& data, const cpens::NbConfig& cfg) {
  const int k = static_cast<int>(data.classes.size());
  const int d = static_cast<int>(data.schema.size());
  const int n = static_cast<int>(data.examples.size());

  NaiveNb model;
  model.n_classes = k;
  model.log_priors.resize(k);
  model.means.assign(k, std::vector<double>(d, 0.0));
  model.vars.assign(k, std::vector<double>(d, 1.0));
  model.cat_probs.assign(k, std::vector<std::vector<double>>(d));

  std::vector<int> class_count(k, 0);
  for (const auto& ex : data.examples) class_count[*ex.label]++;
  for (int c = 0; c < k; ++c) {
    model.log_priors[c] = std::log(static_cast<double>(class_count[c]) / n);
  }

  for (int f = 0; f < d; ++f) {
    if (data.schema[f].kind == cpens::FeatureKind::Numeric) {
      double gsum = 0.0;
      int gcount = 0;
      for (const auto& ex : data.examples) {
        if (ex.values[f]) {
          gsum += *ex.values[f];
          gcount++;
        }
      }
      double gmean = 0.0, gvar = 1.0;
      if (gcount > 0) {
        gmean = gsum / gcount;
        double gsq = 0.0;
        for (const auto& ex : data.examples) {
          if (ex.values[f]) gsq += (*ex.values[f] - gmean) * (*ex.values[f] - gmean);
        }
        gvar = gsq / gcount;
      }
      const double floor = std::max(cfg.variance_floor_rel * gvar, cfg.variance_floor_abs);
      for (int c = 0; c < k; ++c) {
        double sum = 0.0;
        int count = 0;
        for (const auto& ex : data.examples) {
          if (*ex.label == c && ex.values[f]) {
            sum += *ex.values[f];
            count++;
          }
        }
        if (count == 0) {
          model.means[c][f] = gmean;
          model.vars[c][f] = std::max(gvar, floor);
        } else {
          const double mean = sum / count;
          double sq = 0.0;
          for (const auto& ex : data.examples) {
            if (*ex.label == c && ex.values[f]) sq += (*ex.values[f] - mean) * (*ex.values[f] - mean);
          }
          model.means[c][f] = mean;
          model.vars[c][f] = std::max(sq / count, floor);
        }
      }
    } else {
      const int n_cats = static_cast<int>(data.schema[f].categories.size());
      for (int c = 0; c < k; ++c) {
        std::vector<double> probs(n_cats);
        int observed = 0;
        std::vector<int> counts(n_cats, 0);
        for (const auto& ex : data.examples) {
          if (*ex.label == c && ex.values[f]) {
            counts[static_cast<int>(*ex.values[f])]++;
            observed++;
          }
        }
        const double denom = observed + cfg.smoothing * n_cats;
        for (int i = 0; i < n_cats; ++i) {
          probs[i] = denom > 0.0 ? (counts[i] + cfg.smoothing) / denom : 1.0 / n_cats;
        }
        model.cat_probs[c][f] = probs;
      }
    }
  }
  return model;
}

inline double naive_nonconformity(const NaiveNb& model, const cpens::Dataset& data,
                                  const cpens::Example& ex, int label) {
  const int d = static_cast<int>(data.schema.size());
  std::vector<double> scores(model.n_classes);
  for (int c = 0; c < model.n_classes; ++c) {
    double s = model.log_priors[c];
    for (int f = 0; f < d; ++f) {
      if (!ex.values[f]) continue;
      const double v = *ex.values[f];
      if (data.schema[f].kind == cpens::FeatureKind::Numeric) {
        const double var = model.vars[c][f];
        const double diff = v - model.means[c][f];
        s += -0.5 * std::log(2.0 * M_PI * var) - diff * diff / (2.0 * var);
      } else {
        s += std::log(model.cat_probs[c][f][static_cast<int>(v)]);
      }
    }
    scores[c] = s;
  }
  const double max_score = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double& s : scores) {
    s = std::exp(s - max_score);
    total += s;
  }
  const double posterior = scores[label] / total;
  return -std::log(std::max(posterior, 1e-300));
}

// p-value counts per candidate label (denominator = bag size + 1).
inline std::vector<int> brute_force_p_counts(const cpens::Dataset& bag,
                                             const cpens::Example& test,
                                             const cpens::NbConfig& cfg) {
  std::vector<int> counts;
  for (std::size_t y = 0; y < bag.classes.size(); ++y) {
    cpens::Dataset augmented = bag;
    cpens::Example t = test;
    t.label = static_cast<int>(y);
    augmented.examples.push_back(t);
    const NaiveNb model = naive_fit(augmented, cfg);
    const double alpha_test =
        naive_nonconformity(model, augmented, augmented.examples.back(), static_cast<int>(y));
    int count = 0;
    for (const auto& member : augmented.examples) {
      if (naive_nonconformity(model, augmented, member, *member.label) >= alpha_test) count++;
    }
    counts.push_back(count);
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Wilcoxon signed rank, two-sided p by full enumeration of sign assignments.
// Expects the nonzero differences.

inline double wilcoxon_enumerated_p(const std::vector<double>& diffs) {
  const int n = static_cast<int>(diffs.size());
  std::vector<double> abs_d(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) abs_d[i] = std::fabs(diffs[i]);

  // doubled average ranks, computed by counting smaller/equal values
  std::vector<long long> rank2(diffs.size());
  for (std::size_t i = 0; i < abs_d.size(); ++i) {
    int smaller = 0, equal = 0;
    for (std::size_t j = 0; j < abs_d.size(); ++j) {
      if (abs_d[j] < abs_d[i]) smaller++;
      if (abs_d[j] == abs_d[i]) equal++;
    }
    // average of ranks smaller+1 .. smaller+equal, doubled
    rank2[i] = 2 * smaller + equal + 1;
  }

  long long observed2 = 0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (diffs[i] > 0.0) observed2 += rank2[i];
  }

  double count_le = 0.0, count_ge = 0.0;
  const std::uint64_t total = 1ull << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    long long w2 = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1ull << i)) w2 += rank2[static_cast<std::size_t>(i)];
    }
    if (w2 <= observed2) count_le += 1.0;
    if (w2 >= observed2) count_ge += 1.0;
  }
  return std::min(1.0, 2.0 * std::min(count_le, count_ge) / static_cast<double>(total));
}

// ---------------------------------------------------------------------------
// Friedman statistic, tie-free closed form 12/(n k (k+1)) sum R_j^2 - 3 n (k+1).

inline double friedman_closed_form(const std::vector<std::vector<double>>& treatments) {
  const std::size_t k = treatments.size();
  const std::size_t n = treatments[0].size();
  std::vector<double> rank_sum(k, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      int rank = 1;
      for (std::size_t other = 0; other < k; ++other) {
        if (treatments[other][j] < treatments[i][j]) rank++;
      }
      rank_sum[i] += rank;
    }
  }
  double sum_sq = 0.0;
  for (const double r : rank_sum) sum_sq += r * r;
  const double kk = static_cast<double>(k), nn = static_cast<double>(n);
  return 12.0 / (nn * kk * (kk + 1.0)) * sum_sq - 3.0 * nn * (kk + 1.0);
}

}  // namespace oracle
