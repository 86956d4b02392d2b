#ifndef RAIL_CONSTRAINTS_HPP
#define RAIL_CONSTRAINTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "rail/model.hpp"

namespace rail {

enum class ConstraintKind {
  InitialTime,
  Speed,
  Stop,
  NodeSpacing,
  EdgeSpacing,
  Connection,
  Gate,
};

std::string to_string(ConstraintKind kind);

// One violated constraint for a candidate (train, node) entry. When the
// violation can be cleared by moving the entry forward in time,
// clear_arrival/clear_departure give the earliest feasible values. A fatal
// conflict cannot be cleared by a forward shift (the blocker, if any, must be
// kicked instead).
struct Conflict {
  ConstraintKind kind;
  std::optional<TrainId> blocker;
  Time clear_arrival;
  Time clear_departure;
  bool fatal = false;
};

struct Assignment {
  Time arrival = 0;
  Time departure = 0;
  RouteTriplet route;
};

// Partial phenotype: per train index, assignments for an itinerary prefix.
// A train is absent when its vector is empty; during insertion the vector of
// the current train holds the already-frozen earlier nodes.
struct ScheduleFragment {
  std::vector<std::vector<Assignment>> placed;

  bool has(int train_idx, int pos) const {
    return pos < static_cast<int>(placed[train_idx].size());
  }
};

// Checks every constraint family for candidate times (arrival, departure) of
// train `train_idx` at itinerary position `pos` with the given route, against
// the fragment. Pure: identical inputs give identical conflict lists, in the
// fixed order InitialTime, Speed, Stop, NodeSpacing, EdgeSpacing, Connection,
// Gate. Empty result means feasible.
std::vector<Conflict> check_constraints(const Problem& problem,
                                        const PerturbedProblem& bounds,
                                        const ScheduleFragment& fragment,
                                        int train_idx, int pos,
                                        const RouteTriplet& route,
                                        Time arrival, Time departure);

// Re-validates a complete fragment: runs check_constraints over every placed
// (train, position) entry and collects all conflicts. Used as the post-hoc
// decoder/validator agreement check.
std::vector<Conflict> validate_schedule(const Problem& problem,
                                        const PerturbedProblem& bounds,
                                        const ScheduleFragment& fragment);

}  // namespace rail

#endif
