#pragma once

#include <optional>
#include <span>
#include <vector>

namespace cpens {

// Regularized upper incomplete gamma Q(a, x): series expansion below the
// a + 1 crossover, Lentz continued fraction above. Relative accuracy is
// well inside 1e-10 over the chi-square range used here.
double regularized_gamma_q(double a, double x);

// Upper-tail probability of the chi-square distribution with df degrees of
// freedom.
double chi_squared_sf(double x, double df);

// Two-sided normal tail probability of a z statistic.
double normal_two_sided_p(double z);

struct WilcoxonResult {
  std::optional<double> statistic;  // min(W+, W-); absent when every difference is zero
  double p_value = 1.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  int n_effective = 0;  // pairs kept after discarding zero differences
  bool exact = false;
};

// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
// are discarded, tied |d| get averaged ranks. The null distribution is
// enumerated exactly up to n = 20; beyond that a normal approximation with
// continuity and tie corrections is used.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int k = 0;  // treatments
  int n = 0;  // blocks
};

// Friedman rank test with tie correction. `treatments` holds one vector of
// block values per treatment (k >= 3 vectors of equal length n >= 2); ranks
// are taken within each block. Degenerate all-tied input yields statistic 0,
// p = 1.
FriedmanResult friedman_test(const std::vector<std::vector<double>>& treatments);

// 1-based ranks with ties averaged; shared by both tests.
std::vector<double> average_ranks(std::span<const double> values);

}  // namespace cpens
