#include "rail/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace rail {

EdgeId Network::edge_between(NodeId u, NodeId v) const {
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& edge = edges[e];
    if ((edge.a == u && edge.b == v) || (edge.a == v && edge.b == u))
      return static_cast<EdgeId>(e);
  }
  return -1;
}

int TrainSet::index_of(TrainId id) const {
  for (std::size_t i = 0; i < trains.size(); ++i)
    if (trains[i].id == id) return static_cast<int>(i);
  return -1;
}

Time SpacingConstants::gamma(TrainId c, TrainId cp, NodeId node) const {
  auto it = overrides.find({c, cp, node});
  return it == overrides.end() ? default_gamma : it->second;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

int max_incident_tracks(const Network& net, NodeId node) {
  int m = 0;
  for (const Edge& e : net.edges)
    if (e.a == node || e.b == node) m = std::max(m, e.track_count);
  return m;
}

}  // namespace

void validate_problem(const Problem& problem, std::vector<std::string>* warnings) {
  const Network& net = problem.network;
  if (net.node_count <= 0) fail("network: no nodes");
  if (static_cast<int>(net.node_tracks.size()) != net.node_count)
    fail("network: node_tracks size mismatch");
  if (static_cast<int>(net.routes.size()) != net.node_count)
    fail("network: routes size mismatch");
  if (static_cast<int>(net.gates.size()) != net.node_count)
    fail("network: gates size mismatch");

  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const Edge& edge = net.edges[e];
    if (edge.a < 0 || edge.a >= net.node_count || edge.b < 0 || edge.b >= net.node_count)
      fail("edge " + std::to_string(e) + ": endpoint out of range");
    if (edge.track_count < 1) fail("edge " + std::to_string(e) + ": track_count < 1");
    if (edge.headway < 0) fail("edge " + std::to_string(e) + ": negative headway");
  }

  for (NodeId j = 0; j < net.node_count; ++j) {
    if (net.node_tracks[j] < 1) fail("node " + std::to_string(j) + ": track count < 1");
    const int incident = max_incident_tracks(net, j);
    for (std::size_t k = 0; k < net.routes[j].size(); ++k) {
      const RouteTriplet& r = net.routes[j][k];
      if (r.u < 0 || r.u >= net.node_tracks[j])
        fail("node " + std::to_string(j) + " route " + std::to_string(k) +
             ": in-node track " + std::to_string(r.u) + " out of range");
      if (r.u_inc < 0 || r.u_inc >= std::max(incident, 1))
        fail("node " + std::to_string(j) + " route " + std::to_string(k) +
             ": incoming track " + std::to_string(r.u_inc) + " exceeds incident edges");
      if (r.u_out < 0 || r.u_out >= std::max(incident, 1))
        fail("node " + std::to_string(j) + " route " + std::to_string(k) +
             ": outgoing track " + std::to_string(r.u_out) + " exceeds incident edges");
    }
    for (std::size_t g = 0; g < net.gates[j].size(); ++g) {
      const Gate& gate = net.gates[j][g];
      if (gate.capacity < 1) fail("node " + std::to_string(j) + " gate: capacity < 1");
      if (gate.headway < 0) fail("node " + std::to_string(j) + " gate: negative headway");
      for (auto [edge, track] : gate.members) {
        if (edge < 0 || edge >= static_cast<EdgeId>(net.edges.size()))
          fail("node " + std::to_string(j) + " gate: unknown edge");
        if (track < 0 || track >= net.edges[edge].track_count)
          fail("node " + std::to_string(j) + " gate: track out of range");
      }
    }
  }

  const TrainSet& ts = problem.trains;
  std::set<TrainId> ids;
  for (const Train& c : ts.trains) {
    if (!ids.insert(c.id).second) fail("train " + std::to_string(c.id) + ": duplicate id");
    if (c.itinerary.size() < 2) fail("train " + std::to_string(c.id) + ": itinerary too short");
    if (c.stops.size() != c.itinerary.size())
      fail("train " + std::to_string(c.id) + ": stop bounds size mismatch");
    if (c.min_travel.size() + 1 != c.itinerary.size())
      fail("train " + std::to_string(c.id) + ": min_travel size mismatch");
    for (NodeId j : c.itinerary)
      if (j < 0 || j >= net.node_count)
        fail("train " + std::to_string(c.id) + ": unknown itinerary node " + std::to_string(j));
    for (const StopBounds& s : c.stops)
      if (s.min_dwell < 0 || s.min_dwell > s.max_dwell)
        fail("train " + std::to_string(c.id) + ": invalid stop window");
    for (Time beta : c.min_travel)
      if (beta <= 0) fail("train " + std::to_string(c.id) + ": non-positive min travel");
    for (std::size_t p = 0; p + 1 < c.itinerary.size(); ++p)
      if (net.edge_between(c.itinerary[p], c.itinerary[p + 1]) < 0)
        fail("train " + std::to_string(c.id) + ": no edge between nodes " +
             std::to_string(c.itinerary[p]) + " and " + std::to_string(c.itinerary[p + 1]));
  }
  for (const Connection& cn : ts.connections) {
    const int f = ts.index_of(cn.feeder);
    const int g = ts.index_of(cn.outgoing);
    if (f < 0 || g < 0) fail("connection: unknown train");
    if (cn.min_transfer < 0) fail("connection: negative transfer time");
    auto on_itinerary = [&](int idx) {
      const auto& it = ts.trains[idx].itinerary;
      return std::find(it.begin(), it.end(), cn.node) != it.end();
    };
    if (!on_itinerary(f) || !on_itinerary(g))
      fail("connection at node " + std::to_string(cn.node) + ": node not on itinerary");
  }

  const Timetable& tt = problem.timetable;
  if (tt.entries.size() != ts.trains.size()) fail("timetable: train count mismatch");
  for (std::size_t i = 0; i < ts.trains.size(); ++i) {
    const Train& c = ts.trains[i];
    if (tt.entries[i].size() != c.itinerary.size())
      fail("timetable: entry count mismatch for train " + std::to_string(c.id));
    for (std::size_t p = 0; p < c.itinerary.size(); ++p) {
      const TimetableEntry& e = tt.entries[i][p];
      if (e.departure < e.arrival)
        fail("timetable: d0 < a0 for train " + std::to_string(c.id) + " position " +
             std::to_string(p));
    }
  }

  if (problem.spacing.default_gamma < 0) fail("spacing: negative default gamma");
  for (const auto& [key, value] : problem.spacing.overrides)
    if (value < 0) fail("spacing: negative gamma override");

  if (problem.perturbation) {
    const Perturbation& p = *problem.perturbation;
    const int idx = ts.index_of(p.train);
    if (idx < 0) fail("perturbation: unknown train " + std::to_string(p.train));
    const auto& it = ts.trains[idx].itinerary;
    if (std::find(it.begin(), it.end(), p.node) == it.end())
      fail("perturbation: node " + std::to_string(p.node) + " not on itinerary of train " +
           std::to_string(p.train));
    if (p.delay < 0) fail("perturbation: negative delay");
  }

  // Minor timetable spacing violations are tolerated; report them.
  if (warnings) {
    for (std::size_t i = 0; i < ts.trains.size(); ++i) {
      for (std::size_t k = i + 1; k < ts.trains.size(); ++k) {
        const Train& c = ts.trains[i];
        const Train& cp = ts.trains[k];
        for (std::size_t p = 0; p < c.itinerary.size(); ++p) {
          for (std::size_t q = 0; q < cp.itinerary.size(); ++q) {
            if (c.itinerary[p] != cp.itinerary[q]) continue;
            const TimetableEntry& e1 = tt.entries[i][p];
            const TimetableEntry& e2 = tt.entries[k][q];
            if (e1.route.u != e2.route.u) continue;
            const NodeId node = c.itinerary[p];
            const bool ok = e2.arrival >= e1.departure + problem.spacing.gamma(c.id, cp.id, node) ||
                            e1.arrival >= e2.departure + problem.spacing.gamma(cp.id, c.id, node);
            if (!ok) {
              std::ostringstream os;
              os << "timetable: node-spacing violation between trains " << c.id << " and "
                 << cp.id << " at node " << node;
              warnings->push_back(os.str());
            }
          }
        }
      }
    }
  }
}

PerturbedProblem apply_perturbation(const Problem& problem, const Perturbation& perturbation) {
  const int idx = problem.trains.index_of(perturbation.train);
  if (idx < 0)
    throw ValidationError("perturbation: unknown train " + std::to_string(perturbation.train));
  const auto& it = problem.trains.trains[idx].itinerary;
  auto pos_it = std::find(it.begin(), it.end(), perturbation.node);
  if (pos_it == it.end())
    throw ValidationError("perturbation: node " + std::to_string(perturbation.node) +
                          " not on itinerary of train " + std::to_string(perturbation.train));
  PerturbedProblem out = unperturbed_bounds(problem);
  const auto pos = static_cast<std::size_t>(pos_it - it.begin());
  out.arrival_lb[idx][pos] += perturbation.delay;
  return out;
}

PerturbedProblem unperturbed_bounds(const Problem& problem) {
  PerturbedProblem out;
  out.arrival_lb.resize(problem.trains.trains.size());
  for (std::size_t i = 0; i < problem.trains.trains.size(); ++i) {
    out.arrival_lb[i].reserve(problem.timetable.entries[i].size());
    for (const TimetableEntry& e : problem.timetable.entries[i])
      out.arrival_lb[i].push_back(e.arrival);
  }
  return out;
}

}  // namespace rail
