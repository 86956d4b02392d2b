#ifndef RAIL_INSTANCE_GEN_HPP
#define RAIL_INSTANCE_GEN_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rail/model.hpp"
#include "rail/scheduler.hpp"

namespace rail {

// Synthetic instance generation: a main corridor with optional branch nodes,
// staggered traffic, optional injected timetable inconsistencies and a
// perturbation of controllable size.
struct GeneratorParams {
  int n_trains = 8;
  int n_nodes = 6;
  int n_branches = 0;            // extra nodes hanging off interior corridor nodes
  int min_tracks_per_edge = 1;
  int max_tracks_per_edge = 2;
  int max_node_tracks = 2;
  double gate_density = 0.3;     // fraction of interior nodes carrying a gate
  double traffic_density = 0.5;  // 1 = departures packed at the minimum legal gap
  double opposite_fraction = 0.25;
  double partial_itinerary_fraction = 0.3;
  double connection_rate = 0.0;
  double violation_rate = 0.0;   // fraction of same-track margins squeezed below gamma
  Time gamma = 60;
  Time edge_headway = 60;
  Time min_transfer = 120;
  Time dwell_slack = 600;        // alpha_max - alpha_min
  Time delta = 0;                // perturbation delay; 0 = empty perturbation
  Time day_start = 7 * 3600;     // timetable origin; 0 makes fitness delay-dominated
  std::uint64_t seed = 1;
};

struct InjectionSite {
  TrainId earlier = 0;
  TrainId later = 0;
  NodeId node = 0;
};

struct InstanceMetadata {
  std::uint64_t seed = 0;
  std::vector<InjectionSite> injected;
};

struct GeneratedInstance {
  Problem problem;
  InstanceMetadata metadata;
};

class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic in params.seed. Throws GenerationError with diagnostics when
// the parameter combination cannot place all trains.
GeneratedInstance generate(const GeneratorParams& params);

// Two perturbation variants of the same base instance.
std::pair<Problem, Problem> make_instance_pair(const Problem& base, Time delta_easy,
                                               Time delta_hard);

enum class Difficulty { Easy, Hard, Unknown };

struct InstanceLabel {
  Difficulty difficulty = Difficulty::Unknown;
  Fitness oracle_optimum = 0;    // evidence; 0 when unknown
  Fitness identity_fitness = 0;  // timetable-order decode
};

// Trains ordered by theoretical departure from their first node.
Permutation timetable_order(const Problem& problem);

// Easy iff the timetable-order decode attains the exhaustive optimum (small
// instances, n! <= oracle_budget) or matches the best of 1000 random decodes
// (large instances). Budget too small for either tier gives Unknown.
InstanceLabel classify(const Problem& problem, long long oracle_budget,
                       const SchedulerConfig& config);

std::string save_metadata(const InstanceMetadata& metadata);
InstanceMetadata load_metadata(const std::string& document);

}  // namespace rail

#endif
