#ifndef RAIL_STATS_HPP
#define RAIL_STATS_HPP

#include <vector>

namespace rail {

struct RankSumResult {
  double statistic = 0.0;  // rank sum of sample_a, midranks for ties
  double p_value = 1.0;    // two-sided
  bool exact = false;      // exact permutation distribution used
};

// Two-sided Wilcoxon rank-sum test with midrank tie handling. Exact
// distribution (count-by-subset-sum over rank assignments) for combined
// n <= 20, tie-corrected normal approximation with continuity correction
// above. Degenerate samples (all values identical) give p = 1.
RankSumResult wilcoxon_rank_sum(const std::vector<double>& sample_a,
                                const std::vector<double>& sample_b);

double mean(const std::vector<double>& xs);
double median(std::vector<double> xs);

}  // namespace rail

#endif
