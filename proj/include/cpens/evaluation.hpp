#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpens/ensemble.hpp"
#include "cpens/stats.hpp"

namespace cpens {

struct ConfusionCounts {
  int tp = 0, fp = 0, tn = 0, fn = 0;
  int unpredictable = 0;
  int total = 0;

  bool operator==(const ConfusionCounts&) const = default;
};

struct FoldMetrics {
  std::optional<double> f_measure;    // F1 of the positive class
  std::optional<double> sensitivity;  // TP / (TP + FN)
  std::optional<double> specificity;  // TN / (TN + FP)
  double empty_rate = 0.0;            // unpredictable / total
  ConfusionCounts counts;

  bool operator==(const FoldMetrics&) const = default;
};

// Unpredictable verdicts are excluded from the confusion matrix and counted
// into empty_rate. Zero-denominator rules: no actual positives among the
// predicted examples -> sensitivity and F absent; no actual negatives ->
// specificity absent; no predicted positives (with actual positives present)
// -> F = 0.
FoldMetrics compute_metrics(std::span<const EnsembleVerdict> verdicts,
                            std::span<const int> truths, int positive);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 when n < 2
  int n = 0;

  bool operator==(const MeanSd&) const = default;
};

struct MetricsReport {
  std::optional<MeanSd> f_measure;
  std::optional<MeanSd> sensitivity;
  std::optional<MeanSd> specificity;
  MeanSd empty_rate_pct;
  int n_iterations = 0;           // fold evaluations performed (k * repeats)
  std::vector<FoldMetrics> folds;  // per-fold records in (repeat, fold) order

  bool operator==(const MetricsReport&) const = default;
};

struct CvOptions {
  int k = 5;
  int repeats = 10;
  std::uint64_t seed = 0;
  int positive = 1;  // class index whose detection rate is "sensitivity"
  int n_threads = 1;
};

// Stratified k-fold CV repeated with fold rerandomization. Fold assignments
// and per-fold ensemble seeds derive from options.seed alone (config.seed is
// ignored), so configs evaluated with equal options share identical folds --
// the paired design the rank tests need.
MetricsReport run_cv(const Dataset& ds, const EnsembleConfig& config, const CvOptions& options);

struct GridCell {
  BaseMode mode = BaseMode::ConformalCredibility;
  int n_estimators = 50;
  double feature_fraction = 0.75;
  std::optional<double> threshold;
  bool identity_bootstrap = false;

  EnsembleConfig to_config(const EnsembleConfig& base) const;
  friend bool operator<(const GridCell& a, const GridCell& b);
  friend bool operator==(const GridCell& a, const GridCell& b);
};

std::string to_string(const GridCell& cell);

struct GridAxes {
  std::vector<BaseMode> modes = {BaseMode::ConformalCredibility, BaseMode::StandardPosterior};
  std::vector<int> n_estimators = {25, 50, 100};
  std::vector<double> feature_fractions = {0.25, 0.50, 0.75};
  std::vector<double> thresholds = {0.75, 0.80, 0.85, 0.90, 0.95};
  // Adds a no-threshold StandardPlain cell per (t, fraction) pair plus the
  // simple single-model baseline (1 estimator, all features, identity bag).
  bool include_baselines = true;
};

struct GridResult {
  std::vector<std::pair<GridCell, MetricsReport>> cells;  // sorted by cell
};

// Every cell runs under the same CvOptions, hence identical fold assignments.
GridResult run_grid(const Dataset& ds, const GridAxes& axes, const EnsembleConfig& base,
                    const CvOptions& options);

// One row per cell: config columns + per-metric mean/sd/n + empty rate, full
// precision.
std::string grid_to_csv(const GridResult& grid);
// Human-readable table (3 decimals) naming the best cell by mean F-measure.
std::string grid_summary(const GridResult& grid);

// Per-fold F-measure vector with absent folds dropped pairwise across
// reports; used to feed the rank tests.
std::vector<std::vector<double>> paired_f_measures(const std::vector<const MetricsReport*>& reports);

}  // namespace cpens
