#ifndef RAIL_SCHEDULER_HPP
#define RAIL_SCHEDULER_HPP

#include <cstdint>
#include <vector>

#include "rail/constraints.hpp"
#include "rail/model.hpp"

namespace rail {

using Fitness = std::int64_t;

// Genotype: an ordering of all train ids (a bijection over the train set).
struct Permutation {
  std::vector<TrainId> order;

  friend bool operator==(const Permutation&, const Permutation&) = default;
};

bool is_valid_permutation(const Permutation& p, const TrainSet& trains);

struct SchedulerConfig {
  int kick_limit = 3;            // maximum kicks received per train
  Fitness penalty = 0;           // per unscheduled train; 0 = derive per instance
  int conflict_loop_cap = 10000; // per-node resolution iterations before fatal
};

// Phenotype: the decoded schedule.
struct ScheduleResult {
  ScheduleFragment fragment;              // full assignments per scheduled train
  std::vector<TrainId> unscheduled;
  Fitness fitness = 0;
  std::vector<int> kick_count;            // per train index
  std::vector<TrainId> insertion_order;   // realized sequence of completed insertions
};

// Penalty large enough to dominate any achievable delay sum on the instance:
// time horizon x train count x maximum itinerary length.
Fitness default_penalty(const Problem& problem);

// Decodes a permutation by semi-greedy insertion: trains are popped off a
// stack seeded with the permutation, inserted node by node choosing the route
// with the earliest departure, with conflicts resolved by forward shifts or
// by kicking blocking trains (bounded per train). Deterministic and total:
// infeasibility surfaces as unscheduled trains, never as an exception.
ScheduleResult schedule(const Problem& problem, const PerturbedProblem& bounds,
                        const Permutation& permutation, const SchedulerConfig& config);

// Convenience overload applying the problem's own perturbation (if any).
ScheduleResult schedule(const Problem& problem, const Permutation& permutation,
                        const SchedulerConfig& config);

// Sum of arrival times over scheduled entries plus penalty x |unscheduled|.
Fitness evaluate_fitness(const ScheduleResult& result, const Problem& problem,
                         const SchedulerConfig& config);

// Sum of (a - a0) over scheduled entries, for reporting.
Fitness total_delay(const ScheduleResult& result, const Problem& problem);

// Exhaustive decoder oracle: best fitness over all |C|! permutations.
// Only sensible for small train sets.
struct OracleResult {
  Fitness best_fitness = 0;
  Permutation best;
};
OracleResult best_over_all_permutations(const Problem& problem, const PerturbedProblem& bounds,
                                        const SchedulerConfig& config);

}  // namespace rail

#endif
