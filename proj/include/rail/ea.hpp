#ifndef RAIL_EA_HPP
#define RAIL_EA_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "rail/model.hpp"
#include "rail/scheduler.hpp"

namespace rail {

using Rng = std::mt19937_64;

// Mutation strength schedule: either a constant mean number of transpositions
// or a sigmoid decay from T0 to T_inf starting after n0 generations.
struct TemperatureSchedule {
  bool annealed = false;
  double constant_t = 4.0;
  int n0 = 3;
  double t0 = 50.0;
  double t_inf = 4.0;
  double gamma_decay = 0.2;
  bool binomial = true;  // draw the realized count from a binomial law
};

enum class ReplacementKind { Plus, Ept };

struct EAConfig {
  int mu = 10;
  int offspring_per_parent = 7;  // lambda = mu * offspring_per_parent
  ReplacementKind replacement = ReplacementKind::Plus;
  int ept_opponents = 10;        // S
  int swap_radius = 0;           // 0 = unlimited (R = infinity)
  TemperatureSchedule temperature;
  int generations = 100;
  double wall_clock_budget_s = 0.0;  // 0 = no budget
  std::uint64_t seed = 1;
  int threads = 1;

  int lambda() const { return mu * offspring_per_parent; }
};

struct GenerationRecord {
  int generation = 0;
  Fitness best_fitness = 0;
  Fitness mean_fitness = 0;  // floor of the population mean
  double elapsed_s = 0.0;    // measured wall clock, non-deterministic
  long long evaluations = 0;
};

struct RunTrace {
  std::vector<GenerationRecord> records;
  Permutation best;
  ScheduleResult best_result;
};

// Mean mutation strength at generation n: constant t0 on [0, n0], then the
// sigmoid decay toward t_inf.
double temperature(int n, const TemperatureSchedule& sched);

// Realized transposition count with mean t. Binomial(N, t/N) with N = 4*ceil(t)
// keeps the mode at t while leaving the far tail reachable; the deterministic
// variant rounds.
int draw_transposition_count(double t, bool binomial, Rng& rng);

// Applies `count` transpositions; each picks i uniformly and j uniformly
// within radius (radius 0 = unrestricted).
Permutation swap_mutation(const Permutation& p, int radius, int count, Rng& rng);

struct Individual {
  Permutation genome;
  Fitness fitness = 0;
  long long creation_index = 0;
  bool is_parent = false;
};

// Best mu of parents + offspring; ties by age (parents first), then creation.
std::vector<Individual> plus_replacement(std::vector<Individual> pool, int mu);

// Each individual meets S random opponents (with replacement, never itself)
// and scores a win per strictly better fitness; top-mu scores survive, score
// ties broken uniformly at random.
std::vector<Individual> ept_replacement(std::vector<Individual> pool, int opponents, int mu,
                                        Rng& rng);

// The evolutionary loop: ordered selection (each parent produces its quota of
// mutants), concurrent offspring evaluation, then replacement. Offspring
// randomness comes from per-individual substreams of the run seed, so the
// trace is identical for any thread count.
RunTrace evolve(const Problem& problem, const PerturbedProblem& bounds,
                const std::vector<Permutation>& initial_population, const EAConfig& ea_config,
                const SchedulerConfig& scheduler_config);

// Substream seeding helper (splitmix-style mixing).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);

}  // namespace rail

#endif
