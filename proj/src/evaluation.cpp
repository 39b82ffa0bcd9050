#include "cpens/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "cpens/error.hpp"
#include "cpens/parallel.hpp"
#include "cpens/rng.hpp"
#include "cpens/textutil.hpp"

namespace cpens {
namespace {

MeanSd mean_sd(const std::vector<double>& values) {
  MeanSd out;
  out.n = static_cast<int>(values.size());
  if (values.empty()) return out;
  double sum = 0.0;
  for (const double v : values) sum += v;
  out.mean = sum / out.n;
  if (out.n > 1) {
    double sq = 0.0;
    for (const double v : values) sq += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(sq / (out.n - 1));
  }
  return out;
}

std::optional<MeanSd> collect(const std::vector<FoldMetrics>& folds,
                              std::optional<double> FoldMetrics::*metric) {
  std::vector<double> values;
  for (const auto& fold : folds) {
    if (fold.*metric) values.push_back(*(fold.*metric));
  }
  if (values.empty()) return std::nullopt;
  return mean_sd(values);
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

FoldMetrics compute_metrics(std::span<const EnsembleVerdict> verdicts,
                            std::span<const int> truths, int positive) {
  if (verdicts.empty()) throw std::invalid_argument("no verdicts to score");
  if (verdicts.size() != truths.size()) {
    throw std::invalid_argument("verdicts and truths must align");
  }

  FoldMetrics out;
  auto& c = out.counts;
  c.total = static_cast<int>(verdicts.size());
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    if (verdicts[i].unpredictable()) {
      c.unpredictable++;
      continue;
    }
    const bool actual_pos = truths[i] == positive;
    const bool predicted_pos = *verdicts[i].label == positive;
    if (actual_pos) {
      (predicted_pos ? c.tp : c.fn)++;
    } else {
      (predicted_pos ? c.fp : c.tn)++;
    }
  }
  out.empty_rate = static_cast<double>(c.unpredictable) / c.total;

  if (c.tp + c.fn > 0) {
    out.sensitivity = static_cast<double>(c.tp) / (c.tp + c.fn);
    if (c.tp + c.fp > 0) {
      const double precision = static_cast<double>(c.tp) / (c.tp + c.fp);
      const double recall = *out.sensitivity;
      out.f_measure =
          precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    } else {
      out.f_measure = 0.0;  // no predicted positives although positives exist
    }
  }
  if (c.tn + c.fp > 0) {
    out.specificity = static_cast<double>(c.tn) / (c.tn + c.fp);
  }
  return out;
}

MetricsReport run_cv(const Dataset& ds, const EnsembleConfig& config, const CvOptions& options) {
  if (options.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (options.positive < 0 || options.positive >= static_cast<int>(ds.classes.size())) {
    throw std::invalid_argument("positive class index out of range");
  }
  validate(config);

  struct Job {
    int repeat;
    int fold;
    FoldSplit split;
  };
  std::vector<Job> jobs;
  jobs.reserve(static_cast<std::size_t>(options.repeats * options.k));
  for (int r = 0; r < options.repeats; ++r) {
    auto folds = stratified_folds(ds, options.k, mix_seed(options.seed, static_cast<std::uint64_t>(r)));
    for (int f = 0; f < options.k; ++f) {
      jobs.push_back({r, f, std::move(folds[static_cast<std::size_t>(f)])});
    }
  }

  MetricsReport report;
  report.folds.resize(jobs.size());
  parallel_for(jobs.size(), options.n_threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    EnsembleConfig fold_config = config;
    fold_config.seed = mix_seed(options.seed, static_cast<std::uint64_t>(job.repeat),
                                static_cast<std::uint64_t>(job.fold));
    const Dataset train = subset_rows(ds, job.split.train);
    const ConformalEnsemble ensemble = ConformalEnsemble::build(train, fold_config);

    std::vector<Example> tests;
    std::vector<int> truths;
    tests.reserve(job.split.test.size());
    for (const int idx : job.split.test) {
      tests.push_back(ds.examples[static_cast<std::size_t>(idx)]);
      truths.push_back(*ds.examples[static_cast<std::size_t>(idx)].label);
    }
    const auto verdicts = ensemble.predict_batch(tests, 1);
    report.folds[j] = compute_metrics(verdicts, truths, options.positive);
  });

  report.n_iterations = static_cast<int>(report.folds.size());
  report.f_measure = collect(report.folds, &FoldMetrics::f_measure);
  report.sensitivity = collect(report.folds, &FoldMetrics::sensitivity);
  report.specificity = collect(report.folds, &FoldMetrics::specificity);
  std::vector<double> empties;
  empties.reserve(report.folds.size());
  for (const auto& fold : report.folds) empties.push_back(100.0 * fold.empty_rate);
  report.empty_rate_pct = mean_sd(empties);
  return report;
}

EnsembleConfig GridCell::to_config(const EnsembleConfig& base) const {
  EnsembleConfig config = base;
  config.base_mode = mode;
  config.n_estimators = n_estimators;
  config.feature_fraction = feature_fraction;
  config.credibility_threshold = threshold;
  config.identity_bootstrap = identity_bootstrap;
  return config;
}

bool operator<(const GridCell& a, const GridCell& b) {
  const auto key = [](const GridCell& c) {
    return std::tuple(static_cast<int>(c.mode), c.identity_bootstrap, c.n_estimators,
                      c.feature_fraction, c.threshold.value_or(2.0));
  };
  return key(a) < key(b);
}

bool operator==(const GridCell& a, const GridCell& b) {
  return a.mode == b.mode && a.identity_bootstrap == b.identity_bootstrap &&
         a.n_estimators == b.n_estimators && a.feature_fraction == b.feature_fraction &&
         a.threshold == b.threshold;
}

std::string to_string(const GridCell& cell) {
  std::string out = to_string(cell.mode);
  out += " t=" + std::to_string(cell.n_estimators);
  out += " features=" + fmt2(cell.feature_fraction);
  out += cell.threshold ? " threshold=" + fmt2(*cell.threshold) : " threshold=none";
  if (cell.identity_bootstrap) out += " identity";
  return out;
}

GridResult run_grid(const Dataset& ds, const GridAxes& axes, const EnsembleConfig& base,
                    const CvOptions& options) {
  if (axes.modes.empty() || axes.n_estimators.empty() || axes.feature_fractions.empty()) {
    throw std::invalid_argument("grid axes must be non-empty");
  }
  std::vector<GridCell> cells;
  for (const BaseMode mode : axes.modes) {
    for (const int t : axes.n_estimators) {
      for (const double ff : axes.feature_fractions) {
        if (mode == BaseMode::StandardPlain || axes.thresholds.empty()) {
          cells.push_back({mode, t, ff, std::nullopt, false});
        } else {
          for (const double thr : axes.thresholds) {
            cells.push_back({mode, t, ff, thr, false});
          }
        }
      }
    }
  }
  if (axes.include_baselines) {
    for (const int t : axes.n_estimators) {
      for (const double ff : axes.feature_fractions) {
        cells.push_back({BaseMode::StandardPlain, t, ff, std::nullopt, false});
      }
    }
    cells.push_back({BaseMode::StandardPlain, 1, 1.0, std::nullopt, true});
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  GridResult grid;
  grid.cells.reserve(cells.size());
  for (const auto& cell : cells) {
    grid.cells.emplace_back(cell, run_cv(ds, cell.to_config(base), options));
  }
  return grid;
}

std::string grid_to_csv(const GridResult& grid) {
  std::string out =
      "mode,n_estimators,feature_fraction,threshold,identity_bootstrap,folds,"
      "f_mean,f_sd,f_n,sensitivity_mean,sensitivity_sd,sensitivity_n,"
      "specificity_mean,specificity_sd,specificity_n,empty_pct_mean,empty_pct_sd\n";
  const auto metric_cols = [](const std::optional<MeanSd>& m) {
    if (!m) return std::string(",,,0");
    return "," + format_double(m->mean) + "," + format_double(m->sd) + "," + std::to_string(m->n);
  };
  for (const auto& [cell, report] : grid.cells) {
    out += to_string(cell.mode);
    out += "," + std::to_string(cell.n_estimators);
    out += "," + format_double(cell.feature_fraction);
    out += ",";
    if (cell.threshold) out += format_double(*cell.threshold);
    out += cell.identity_bootstrap ? ",1" : ",0";
    out += "," + std::to_string(report.n_iterations);
    out += metric_cols(report.f_measure);
    out += metric_cols(report.sensitivity);
    out += metric_cols(report.specificity);
    out += "," + format_double(report.empty_rate_pct.mean);
    out += "," + format_double(report.empty_rate_pct.sd);
    out += "\n";
  }
  return out;
}

std::string grid_summary(const GridResult& grid) {
  std::string out;
  const std::pair<GridCell, MetricsReport>* best = nullptr;
  for (const auto& entry : grid.cells) {
    const auto& [cell, report] = entry;
    out += to_string(cell) + ": ";
    out += "F=" + (report.f_measure ? fmt3(report.f_measure->mean) + "+-" + fmt2(report.f_measure->sd)
                                    : std::string("n/a"));
    out += " sens=" + (report.sensitivity
                           ? fmt3(report.sensitivity->mean) + "+-" + fmt2(report.sensitivity->sd)
                           : std::string("n/a"));
    out += " spec=" + (report.specificity
                           ? fmt3(report.specificity->mean) + "+-" + fmt2(report.specificity->sd)
                           : std::string("n/a"));
    out += " empty%=" + fmt2(report.empty_rate_pct.mean) + "+-" + fmt2(report.empty_rate_pct.sd);
    out += "\n";
    if (report.f_measure && (!best || report.f_measure->mean > best->second.f_measure->mean)) {
      best = &entry;
    }
  }
  if (best) {
    out += "best by mean F-measure: " + to_string(best->first) + " (F=" +
           fmt3(best->second.f_measure->mean) + ")\n";
  }
  return out;
}

std::vector<std::vector<double>> paired_f_measures(
    const std::vector<const MetricsReport*>& reports) {
  if (reports.empty()) return {};
  const std::size_t n = reports[0]->folds.size();
  for (const auto* report : reports) {
    if (report->folds.size() != n) {
      throw std::invalid_argument("reports have differing fold counts; not a paired design");
    }
  }
  std::vector<std::vector<double>> out(reports.size());
  for (std::size_t fold = 0; fold < n; ++fold) {
    const bool all_defined = std::all_of(reports.begin(), reports.end(), [&](const auto* r) {
      return r->folds[fold].f_measure.has_value();
    });
    if (!all_defined) continue;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      out[i].push_back(*reports[i]->folds[fold].f_measure);
    }
  }
  return out;
}

}  // namespace cpens
