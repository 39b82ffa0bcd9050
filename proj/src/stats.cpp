#include "cpens/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cpens {
namespace {

// Lower regularized incomplete gamma by series expansion; valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma by modified Lentz continued fraction;
// valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0) throw std::invalid_argument("gamma shape must be positive");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_squared_sf(double x, double df) {
  if (df <= 0.0) throw std::invalid_argument("degrees of freedom must be positive");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(df / 2.0, x / 2.0);
}

double normal_two_sided_p(double z) {
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("wilcoxon requires paired samples of equal length");
  }
  std::vector<double> diffs;
  diffs.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diffs.push_back(d);
  }

  WilcoxonResult result;
  result.n_effective = static_cast<int>(diffs.size());
  if (diffs.empty()) {
    result.exact = true;
    return result;  // all differences zero: p = 1, W undefined
  }

  std::vector<double> abs_diffs(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) abs_diffs[i] = std::fabs(diffs[i]);
  const std::vector<double> ranks = average_ranks(abs_diffs);

  for (std::size_t i = 0; i < diffs.size(); ++i) {
    (diffs[i] > 0.0 ? result.w_plus : result.w_minus) += ranks[i];
  }
  result.statistic = std::min(result.w_plus, result.w_minus);

  const int n = result.n_effective;
  if (n <= 20) {
    result.exact = true;
    // Averaged ranks are multiples of 1/2; doubling keeps everything integral.
    std::vector<int> doubled(diffs.size());
    int total2 = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      doubled[i] = static_cast<int>(std::llround(2.0 * ranks[i]));
      total2 += doubled[i];
    }
    // Distribution of 2*W+ over all 2^n equiprobable sign assignments.
    std::vector<double> dist(static_cast<std::size_t>(total2) + 1, 0.0);
    dist[0] = 1.0;
    std::size_t reach = 0;
    for (const int r : doubled) {
      for (std::size_t s = reach + 1; s-- > 0;) {
        if (dist[s] != 0.0) dist[s + static_cast<std::size_t>(r)] += dist[s];
      }
      reach += static_cast<std::size_t>(r);
    }
    const auto w2 = static_cast<std::size_t>(std::llround(2.0 * result.w_plus));
    double count_le = 0.0;
    double count_ge = 0.0;
    for (std::size_t s = 0; s < dist.size(); ++s) {
      if (s <= w2) count_le += dist[s];
      if (s >= w2) count_ge += dist[s];
    }
    const double total = std::ldexp(1.0, n);  // 2^n
    result.p_value = std::min(1.0, 2.0 * std::min(count_le, count_ge) / total);
  } else {
    const double nn = n;
    const double mean = nn * (nn + 1.0) / 4.0;
    double tie_term = 0.0;
    {
      std::vector<double> sorted(abs_diffs);
      std::sort(sorted.begin(), sorted.end());
      std::size_t i = 0;
      while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
      }
    }
    const double variance = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    const double delta = result.w_plus - mean;
    double z = 0.0;
    if (variance > 0.0 && delta != 0.0) {
      const double continuity = delta > 0.0 ? 0.5 : -0.5;
      z = (delta - continuity) / std::sqrt(variance);
    }
    result.p_value = normal_two_sided_p(z);
  }
  return result;
}

FriedmanResult friedman_test(const std::vector<std::vector<double>>& treatments) {
  const auto k = treatments.size();
  if (k < 3) throw std::invalid_argument("friedman needs at least 3 treatments");
  const auto n = treatments[0].size();
  if (n < 2) throw std::invalid_argument("friedman needs at least 2 blocks");
  for (const auto& t : treatments) {
    if (t.size() != n) throw std::invalid_argument("all treatments need the same block count");
  }

  FriedmanResult result;
  result.k = static_cast<int>(k);
  result.n = static_cast<int>(n);

  std::vector<double> rank_sums(k, 0.0);
  double sum_sq_ranks = 0.0;
  std::vector<double> block(k);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) block[i] = treatments[i][j];
    const std::vector<double> ranks = average_ranks(block);
    for (std::size_t i = 0; i < k; ++i) {
      rank_sums[i] += ranks[i];
      sum_sq_ranks += ranks[i] * ranks[i];
    }
  }

  // Tie-corrected statistic (Conover): (k-1) * sum (R_i - n(k+1)/2)^2 / (A2 - C).
  // Without ties this reduces to 12/(n k (k+1)) * sum R_i^2 - 3 n (k+1).
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  const double expected = nn * (kk + 1.0) / 2.0;
  double numerator = 0.0;
  for (const double r : rank_sums) numerator += (r - expected) * (r - expected);
  numerator *= kk - 1.0;
  const double denominator = sum_sq_ranks - nn * kk * (kk + 1.0) * (kk + 1.0) / 4.0;

  if (denominator <= 1e-12) return result;  // every block fully tied
  result.statistic = numerator / denominator;
  result.p_value = chi_squared_sf(result.statistic, kk - 1.0);
  return result;
}

}  // namespace cpens
