#include "rail/ea.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace rail {

double temperature(int n, const TemperatureSchedule& sched) {
  if (!sched.annealed) return sched.constant_t;
  if (n <= sched.n0) return sched.t0;
  const double sigmoid = 1.0 / (1.0 + std::exp(-sched.gamma_decay * (n - sched.n0)));
  return sched.t_inf + 2.0 * (sched.t0 - sched.t_inf) * (1.0 - sigmoid);
}

int draw_transposition_count(double t, bool binomial, Rng& rng) {
  if (t <= 0.0) return 0;
  if (!binomial) return static_cast<int>(std::llround(t));
  const int n = 4 * static_cast<int>(std::ceil(t));
  std::binomial_distribution<int> dist(n, t / n);
  return dist(rng);
}

Permutation swap_mutation(const Permutation& p, int radius, int count, Rng& rng) {
  Permutation out = p;
  const int n = static_cast<int>(out.order.size());
  if (n < 2) return out;
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int k = 0; k < count; ++k) {
    const int i = pick(rng);
    int lo = 0;
    int hi = n - 1;
    if (radius > 0) {
      lo = std::max(0, i - radius);
      hi = std::min(n - 1, i + radius);
    }
    std::uniform_int_distribution<int> other(lo, hi - 1);
    int j = other(rng);
    if (j >= i) ++j;  // skip i itself
    std::swap(out.order[i], out.order[j]);
  }
  return out;
}

std::vector<Individual> plus_replacement(std::vector<Individual> pool, int mu) {
  std::stable_sort(pool.begin(), pool.end(), [](const Individual& x, const Individual& y) {
    if (x.fitness != y.fitness) return x.fitness < y.fitness;
    if (x.is_parent != y.is_parent) return x.is_parent;
    return x.creation_index < y.creation_index;
  });
  pool.resize(std::min<std::size_t>(pool.size(), static_cast<std::size_t>(mu)));
  return pool;
}

std::vector<Individual> ept_replacement(std::vector<Individual> pool, int opponents, int mu,
                                        Rng& rng) {
  const int n = static_cast<int>(pool.size());
  if (n <= 1) return pool;
  std::vector<int> score(n, 0);
  std::uniform_int_distribution<int> pick(0, n - 2);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < opponents; ++s) {
      int j = pick(rng);
      if (j >= i) ++j;
      if (pool[i].fitness < pool[j].fitness) ++score[i];
    }
  }
  std::vector<std::pair<std::uint64_t, int>> keyed(n);  // (random tiebreak, index)
  for (int i = 0; i < n; ++i) keyed[i] = {rng(), i};
  std::sort(keyed.begin(), keyed.end(), [&](const auto& x, const auto& y) {
    if (score[x.second] != score[y.second]) return score[x.second] > score[y.second];
    return x.first < y.first;
  });
  std::vector<Individual> survivors;
  survivors.reserve(static_cast<std::size_t>(std::min(mu, n)));
  for (int i = 0; i < std::min(mu, n); ++i) survivors.push_back(pool[keyed[i].second]);
  return survivors;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t z = seed;
  for (std::uint64_t v : {a + 1, b + 1, c + 1}) {
    z += 0x9e3779b97f4a7c15ull * v;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
  }
  return z;
}

namespace {

// Evaluates items [0, n) with fn on up to `threads` workers. fn(i) must only
// touch slot i of shared output.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  const int workers = std::min(threads, n);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& th : pool) th.join();
}

}  // namespace

RunTrace evolve(const Problem& problem, const PerturbedProblem& bounds,
                const std::vector<Permutation>& initial_population, const EAConfig& ea_config,
                const SchedulerConfig& scheduler_config) {
  if (ea_config.mu < 1 || ea_config.offspring_per_parent < 1)
    throw std::invalid_argument("evolve: mu and offspring_per_parent must be >= 1");
  if (initial_population.empty()) throw std::invalid_argument("evolve: empty initial population");
  if (ea_config.replacement == ReplacementKind::Plus &&
      static_cast<int>(initial_population.size()) < ea_config.mu)
    throw std::invalid_argument("evolve: initial population smaller than mu");

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  long long creation_counter = 0;
  long long evaluations = 0;

  Individual best_ever;
  bool have_best = false;
  auto evaluate_all = [&](std::vector<Individual>& batch) {
    parallel_for(static_cast<int>(batch.size()), ea_config.threads, [&](int i) {
      batch[i].fitness =
          schedule(problem, bounds, batch[i].genome, scheduler_config).fitness;
    });
    evaluations += static_cast<long long>(batch.size());
    for (const Individual& ind : batch)
      if (!have_best || ind.fitness < best_ever.fitness) {
        best_ever = ind;
        have_best = true;
      }
  };

  std::vector<Individual> parents;
  parents.reserve(initial_population.size());
  for (const Permutation& g : initial_population) {
    Individual ind;
    ind.genome = g;
    ind.creation_index = creation_counter++;
    ind.is_parent = true;
    parents.push_back(std::move(ind));
  }
  evaluate_all(parents);

  // Oversized initial pools (layer schemes) are reduced to mu by the
  // configured replacement before the loop starts.
  if (static_cast<int>(parents.size()) > ea_config.mu) {
    if (ea_config.replacement == ReplacementKind::Ept) {
      Rng rng(mix_seed(ea_config.seed, 0, 0, 0));
      parents = ept_replacement(std::move(parents), ea_config.ept_opponents, ea_config.mu, rng);
    } else {
      parents = plus_replacement(std::move(parents), ea_config.mu);
    }
  }

  RunTrace trace;
  auto record = [&](int generation) {
    GenerationRecord rec;
    rec.generation = generation;
    rec.best_fitness = parents.front().fitness;
    Fitness sum = 0;
    for (const Individual& ind : parents) {
      rec.best_fitness = std::min(rec.best_fitness, ind.fitness);
      sum += ind.fitness;
    }
    rec.mean_fitness = sum / static_cast<Fitness>(parents.size());
    rec.elapsed_s = elapsed();
    rec.evaluations = evaluations;
    trace.records.push_back(rec);
  };
  record(0);

  for (int gen = 1; gen <= ea_config.generations; ++gen) {
    if (ea_config.wall_clock_budget_s > 0.0 && elapsed() >= ea_config.wall_clock_budget_s) break;
    const double t_mean = temperature(gen, ea_config.temperature);

    std::vector<Individual> offspring;
    offspring.reserve(static_cast<std::size_t>(ea_config.lambda()));
    for (std::size_t j = 0; j < parents.size(); ++j) {  // ordered selection
      for (int k = 0; k < ea_config.offspring_per_parent; ++k) {
        Rng rng(mix_seed(ea_config.seed, static_cast<std::uint64_t>(gen), j,
                         static_cast<std::uint64_t>(k)));
        const int count = draw_transposition_count(t_mean, ea_config.temperature.binomial, rng);
        Individual child;
        child.genome = swap_mutation(parents[j].genome, ea_config.swap_radius, count, rng);
        child.creation_index = creation_counter++;
        offspring.push_back(std::move(child));
      }
    }
    evaluate_all(offspring);

    std::vector<Individual> pool = parents;
    for (Individual& ind : pool) ind.is_parent = true;
    for (Individual& ind : offspring) {
      ind.is_parent = false;
      pool.push_back(std::move(ind));
    }
    if (ea_config.replacement == ReplacementKind::Ept) {
      Rng rng(mix_seed(ea_config.seed, static_cast<std::uint64_t>(gen), 0xE97ull, 0));
      parents = ept_replacement(std::move(pool), ea_config.ept_opponents, ea_config.mu, rng);
    } else {
      parents = plus_replacement(std::move(pool), ea_config.mu);
    }
    record(gen);
  }

  trace.best = best_ever.genome;
  trace.best_result = schedule(problem, bounds, trace.best, scheduler_config);
  return trace;
}

}  // namespace rail
