#ifndef RAIL_INOCULATION_HPP
#define RAIL_INOCULATION_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rail/ea.hpp"
#include "rail/model.hpp"
#include "rail/scheduler.hpp"

namespace rail {

// Pre-computed solution of the empty-perturbation problem, with provenance.
struct Inoculant {
  Permutation permutation;
  std::uint64_t instance_hash = 0;
  std::uint64_t config_hash = 0;
  int generations = 0;
  Fitness achieved_fitness = 0;
  bool fully_feasible = false;  // decodes with zero unscheduled trains at delta = 0
};

struct MassMutation {
  int pr = 3;
};
struct GradualPerturbation {
  int pr0 = 0;
  int pr_inc = 1;
};
struct Layers {
  std::vector<std::pair<int, int>> layers;  // (percent of population, pR)
};
using InitScheme = std::variant<MassMutation, GradualPerturbation, Layers>;

Layers three_layer_preset();  // 33/0, 33/10, 33/500
Layers two_layer_preset();    // 50/3, 50/500

std::string scheme_name(const InitScheme& scheme);
// Parses "MM(3)", "GPer(0,1)", "L(33/0,33/10,33/500)", "T", "H", "random".
std::optional<InitScheme> parse_scheme(const std::string& text);

std::uint64_t ea_config_hash(const EAConfig& config);

// Pre-solves the empty-perturbation problem from a random population and
// returns the best permutation found. When cache_path is given, a cached
// inoculant with matching instance and config hashes is reused; anything
// stale is recomputed and overwritten.
Inoculant compute_inoculant(const Problem& problem, const EAConfig& ea_config,
                            const SchedulerConfig& scheduler_config,
                            const std::optional<std::filesystem::path>& cache_path = {});

// I0 + pR: applies pR unrestricted random transpositions to a copy.
Permutation perturb(const Permutation& inoculant, int pr, Rng& rng);

// Builds the initial population around the inoculant. Perturbation radii are
// capped at 10 * n so a "completely random" layer keeps that meaning on small
// instances. Layer sizes are percent-rounded with the remainder going to the
// last layer.
std::vector<Permutation> init_population(const Permutation& inoculant, const InitScheme& scheme,
                                         int size, Rng& rng);

// Uniform random permutations (all n! orders equiprobable).
std::vector<Permutation> init_random(int size, const TrainSet& trains, Rng& rng);

std::string save_inoculant(const Inoculant& inoculant);
Inoculant load_inoculant(const std::string& document);

}  // namespace rail

#endif
