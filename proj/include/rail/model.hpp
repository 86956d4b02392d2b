#ifndef RAIL_MODEL_HPP
#define RAIL_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace rail {

using NodeId = int;
using EdgeId = int;
using TrainId = int;
using Time = std::int64_t;  // integer seconds since an arbitrary origin

// Admissible combination of incoming-edge track, in-node track and
// outgoing-edge track at a node. For the first node of an itinerary the
// incoming leg is ignored, for the last node the outgoing leg is.
struct RouteTriplet {
  int u_inc = 0;
  int u = 0;
  int u_out = 0;

  friend bool operator==(const RouteTriplet&, const RouteTriplet&) = default;
};

struct Edge {
  NodeId a = 0;
  NodeId b = 0;
  int track_count = 1;
  Time headway = 0;  // minimum separation between trains on one track
};

// Capacity-limited switching resource at a node. A train traversing a member
// edge-track occupies the gate for [t - headway, t + headway] around its
// departure time t from the node.
struct Gate {
  int capacity = 1;
  Time headway = 0;
  std::vector<std::pair<EdgeId, int>> members;  // (edge, track index)
};

struct Network {
  int node_count = 0;
  std::vector<int> node_tracks;                  // in-node track count per node
  std::vector<Edge> edges;
  std::vector<std::vector<RouteTriplet>> routes; // per node
  std::vector<std::vector<Gate>> gates;          // per node

  // Returns the edge joining u and v, or -1.
  EdgeId edge_between(NodeId u, NodeId v) const;
};

struct StopBounds {
  Time min_dwell = 0;
  Time max_dwell = 0;
};

// Passenger transfer: the outgoing train may not depart from `node` earlier
// than the feeder's arrival plus `min_transfer`.
struct Connection {
  TrainId feeder = 0;
  TrainId outgoing = 0;
  NodeId node = 0;
  Time min_transfer = 0;
};

struct Train {
  TrainId id = 0;
  std::vector<NodeId> itinerary;      // length >= 2
  std::vector<StopBounds> stops;      // per itinerary position
  std::vector<Time> min_travel;       // per leg, size = itinerary.size() - 1
};

struct TrainSet {
  std::vector<Train> trains;
  std::vector<Connection> connections;

  int index_of(TrainId id) const;     // -1 if unknown
  int size() const { return static_cast<int>(trains.size()); }
};

struct TimetableEntry {
  Time arrival = 0;    // a0
  Time departure = 0;  // d0
  RouteTriplet route;  // r0
};

// Theoretical times per (train, itinerary position), aligned with TrainSet.
struct Timetable {
  std::vector<std::vector<TimetableEntry>> entries;
};

struct SpacingConstants {
  Time default_gamma = 0;
  // Ordered-pair overrides: gamma(c, c', node) = minimum seconds between
  // departure of c and arrival of c' on a shared node track.
  std::map<std::tuple<TrainId, TrainId, NodeId>, Time> overrides;

  Time gamma(TrainId c, TrainId cp, NodeId node) const;
};

struct Perturbation {
  TrainId train = 0;
  NodeId node = 0;
  Time delay = 0;  // delta = 0 is the empty perturbation
};

struct Problem {
  Network network;
  TrainSet trains;
  Timetable timetable;
  SpacingConstants spacing;
  std::optional<Perturbation> perturbation;
};

// Arrival lower bounds after applying a perturbation; aligned with the
// timetable. Departure lower bounds stay the theoretical d0.
struct PerturbedProblem {
  std::vector<std::vector<Time>> arrival_lb;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Verifies all structural invariants; throws ValidationError naming the
// offending entity. Timetable spacing violations are legal (the theoretical
// schedule may carry minor inconsistencies) and are reported as warnings.
void validate_problem(const Problem& problem, std::vector<std::string>* warnings = nullptr);

// Bounds become a0 everywhere except the perturbed (train, node), whose
// arrival bound is a0 + delta. Downstream propagation is left to the
// scheduler. Throws ValidationError if (train, node) is not on the itinerary.
PerturbedProblem apply_perturbation(const Problem& problem, const Perturbation& perturbation);

// Unperturbed bounds (identical to the timetable).
PerturbedProblem unperturbed_bounds(const Problem& problem);

}  // namespace rail

#endif
