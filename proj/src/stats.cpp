#include "rail/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace rail {

namespace {

// Midranks of the combined sample, scaled by 2 so ties stay integral.
std::vector<std::int64_t> scaled_midranks(const std::vector<double>& combined) {
  const std::size_t n = combined.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t x, std::size_t y) { return combined[x] < combined[y]; });
  std::vector<std::int64_t> rank2(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && combined[idx[j + 1]] == combined[idx[i]]) ++j;
    // positions i..j share midrank (i + j) / 2 + 1 (1-based); doubled: i + j + 2
    const std::int64_t r2 = static_cast<std::int64_t>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) rank2[idx[k]] = r2;
    i = j + 1;
  }
  return rank2;
}

double exact_two_sided_p(const std::vector<std::int64_t>& rank2, std::size_t n_a,
                         std::int64_t w2_obs) {
  const std::size_t n = rank2.size();
  // f[k][s] = number of k-subsets of ranks with doubled-rank sum s.
  std::int64_t max_sum = 0;
  for (std::int64_t r : rank2) max_sum += r;
  std::vector<std::vector<double>> f(n_a + 1, std::vector<double>(max_sum + 1, 0.0));
  f[0][0] = 1.0;
  for (std::int64_t r : rank2)
    for (std::size_t k = std::min(n_a, n); k >= 1; --k)
      for (std::int64_t s = max_sum; s >= r; --s)
        if (f[k - 1][s - r] > 0) f[k][s] += f[k - 1][s - r];

  // mean of the doubled rank sum over assignments: n_a * (N + 1)
  const std::int64_t mu2 = static_cast<std::int64_t>(n_a) * static_cast<std::int64_t>(n + 1);
  const std::int64_t dev = std::llabs(w2_obs - mu2);
  double hits = 0.0;
  double total = 0.0;
  for (std::int64_t s = 0; s <= max_sum; ++s) {
    total += f[n_a][s];
    if (std::llabs(s - mu2) >= dev) hits += f[n_a][s];
  }
  return hits / total;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

RankSumResult wilcoxon_rank_sum(const std::vector<double>& sample_a,
                                const std::vector<double>& sample_b) {
  if (sample_a.empty() || sample_b.empty())
    throw std::invalid_argument("wilcoxon_rank_sum: empty sample");

  std::vector<double> combined = sample_a;
  combined.insert(combined.end(), sample_b.begin(), sample_b.end());
  const std::size_t n = combined.size();
  const std::size_t n_a = sample_a.size();
  const std::size_t n_b = sample_b.size();

  const auto rank2 = scaled_midranks(combined);
  std::int64_t w2 = 0;
  for (std::size_t i = 0; i < n_a; ++i) w2 += rank2[i];

  RankSumResult out;
  out.statistic = static_cast<double>(w2) / 2.0;

  bool all_equal = true;
  for (double v : combined)
    if (v != combined.front()) all_equal = false;
  if (all_equal) {
    out.p_value = 1.0;
    out.exact = n <= 20;
    return out;
  }

  if (n <= 20) {
    out.exact = true;
    out.p_value = exact_two_sided_p(rank2, n_a, w2);
    return out;
  }

  // Normal approximation with tie correction and continuity correction.
  const double w = out.statistic;
  const double mu = static_cast<double>(n_a) * (n + 1) / 2.0;
  std::map<std::int64_t, int> tie_counts;
  for (std::int64_t r : rank2) ++tie_counts[r];
  double tie_term = 0.0;
  for (const auto& [r, t] : tie_counts) tie_term += static_cast<double>(t) * t * t - t;
  const double var = static_cast<double>(n_a) * n_b / 12.0 *
                     ((n + 1) - tie_term / (static_cast<double>(n) * (n - 1)));
  if (var <= 0.0) {
    out.p_value = 1.0;
    return out;
  }
  const double dev = std::abs(w - mu);
  const double z = std::max(0.0, dev - 0.5) / std::sqrt(var);
  out.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
  return out;
}

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace rail
