#include "rail/constraints.hpp"

#include <algorithm>

namespace rail {

std::string to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::InitialTime: return "initial-time";
    case ConstraintKind::Speed: return "speed";
    case ConstraintKind::Stop: return "stop";
    case ConstraintKind::NodeSpacing: return "node-spacing";
    case ConstraintKind::EdgeSpacing: return "edge-spacing";
    case ConstraintKind::Connection: return "connection";
    case ConstraintKind::Gate: return "gate";
  }
  return "?";
}

namespace {

struct Candidate {
  const Problem& problem;
  const PerturbedProblem& bounds;
  const ScheduleFragment& fragment;
  int train_idx;
  int pos;
  const RouteTriplet& route;
  Time a;
  Time d;
};

Conflict make(ConstraintKind kind, const Candidate& cd, std::optional<TrainId> blocker,
              Time clear_a, Time clear_d, bool fatal = false) {
  return Conflict{kind, blocker, std::max(cd.a, clear_a), std::max(cd.d, clear_d), fatal};
}

// Traversal of an edge by a placed train: entry time at the origin node,
// exit time at the destination node, and the track used.
struct EdgeUse {
  int train_idx;
  Time entry;
  Time exit;
  bool same_direction;
};

// Collects placed traversals of (edge, track) by other trains. `from` and `to`
// are the endpoints in the inserting train's travel direction.
std::vector<EdgeUse> edge_uses(const Candidate& cd, EdgeId /*edge*/, int track, NodeId from,
                               NodeId to) {
  std::vector<EdgeUse> uses;
  const TrainSet& ts = cd.problem.trains;
  for (int f = 0; f < ts.size(); ++f) {
    if (f == cd.train_idx) continue;
    const auto& itin = ts.trains[f].itinerary;
    const auto& placed = cd.fragment.placed[f];
    for (std::size_t q = 1; q < placed.size(); ++q) {
      const bool fwd = itin[q - 1] == from && itin[q] == to;
      const bool rev = itin[q - 1] == to && itin[q] == from;
      if (!fwd && !rev) continue;
      if (placed[q].route.u_inc != track) continue;
      uses.push_back({f, placed[q - 1].departure, placed[q].arrival, fwd});
    }
  }
  return uses;
}

void check_initial_time(const Candidate& cd, std::vector<Conflict>& out) {
  const Time a_lb = cd.bounds.arrival_lb[cd.train_idx][cd.pos];
  const Time d_lb = cd.problem.timetable.entries[cd.train_idx][cd.pos].departure;
  if (cd.a < a_lb || cd.d < d_lb)
    out.push_back(make(ConstraintKind::InitialTime, cd, std::nullopt, a_lb, d_lb));
}

void check_speed(const Candidate& cd, std::vector<Conflict>& out) {
  if (cd.pos == 0 || !cd.fragment.has(cd.train_idx, cd.pos - 1)) return;
  const Time d_prev = cd.fragment.placed[cd.train_idx][cd.pos - 1].departure;
  const Time beta = cd.problem.trains.trains[cd.train_idx].min_travel[cd.pos - 1];
  if (cd.a < d_prev + beta)
    out.push_back(make(ConstraintKind::Speed, cd, std::nullopt, d_prev + beta, cd.d));
}

void check_stop(const Candidate& cd, std::vector<Conflict>& out) {
  const StopBounds& s = cd.problem.trains.trains[cd.train_idx].stops[cd.pos];
  const Time dwell = cd.d - cd.a;
  if (dwell < s.min_dwell)
    out.push_back(make(ConstraintKind::Stop, cd, std::nullopt, cd.a, cd.a + s.min_dwell));
  else if (dwell > s.max_dwell)
    out.push_back(make(ConstraintKind::Stop, cd, std::nullopt, cd.d - s.max_dwell, cd.d));
}

void check_node_spacing(const Candidate& cd, std::vector<Conflict>& out) {
  const TrainSet& ts = cd.problem.trains;
  const NodeId node = ts.trains[cd.train_idx].itinerary[cd.pos];
  const TrainId cid = ts.trains[cd.train_idx].id;
  for (int f = 0; f < ts.size(); ++f) {
    if (f == cd.train_idx) continue;
    const auto& itin = ts.trains[f].itinerary;
    const auto& placed = cd.fragment.placed[f];
    for (std::size_t q = 0; q < placed.size(); ++q) {
      if (itin[q] != node) continue;
      if (placed[q].route.u != cd.route.u) continue;
      const TrainId fid = ts.trains[f].id;
      const Time before_gap = cd.problem.spacing.gamma(cid, fid, node);  // we leave, f arrives
      const Time after_gap = cd.problem.spacing.gamma(fid, cid, node);   // f leaves, we arrive
      const bool we_before = cd.d + before_gap <= placed[q].arrival;
      const bool we_after = cd.a >= placed[q].departure + after_gap;
      if (!we_before && !we_after) {
        const Time clear_a = placed[q].departure + after_gap;
        const StopBounds& s = ts.trains[cd.train_idx].stops[cd.pos];
        out.push_back(make(ConstraintKind::NodeSpacing, cd, fid, clear_a,
                           std::max(cd.d, clear_a + s.min_dwell)));
      }
    }
  }
}

void check_edge_spacing(const Candidate& cd, std::vector<Conflict>& out) {
  const TrainSet& ts = cd.problem.trains;
  const auto& itin = ts.trains[cd.train_idx].itinerary;
  const int last = static_cast<int>(itin.size()) - 1;
  const StopBounds& s = ts.trains[cd.train_idx].stops[cd.pos];

  // Incoming edge: our traversal [entry, cd.a] with entry frozen at the
  // previous node's committed departure.
  if (cd.pos > 0 && cd.fragment.has(cd.train_idx, cd.pos - 1)) {
    const NodeId prev = itin[cd.pos - 1];
    const NodeId node = itin[cd.pos];
    const EdgeId edge = cd.problem.network.edge_between(prev, node);
    const Time h = cd.problem.network.edges[edge].headway;
    const Time entry = cd.fragment.placed[cd.train_idx][cd.pos - 1].departure;
    for (const EdgeUse& u : edge_uses(cd, edge, cd.route.u_inc, prev, node)) {
      const TrainId fid = ts.trains[u.train_idx].id;
      if (u.same_direction) {
        if (entry > u.entry - h && entry < u.entry + h) {
          // Entry separation at the origin; both entries are committed.
          out.push_back(make(ConstraintKind::EdgeSpacing, cd, fid, cd.a, cd.d, true));
        } else if (u.entry < entry) {
          // Follower: keep headway behind f and never overtake it.
          if (cd.a < u.exit + h)
            out.push_back(make(ConstraintKind::EdgeSpacing, cd, fid, u.exit + h,
                               std::max(cd.d, u.exit + h + s.min_dwell)));
        } else {
          // f entered behind us; arriving after it would be an overtake,
          // which no forward shift can repair.
          if (cd.a > u.exit - h)
            out.push_back(make(ConstraintKind::EdgeSpacing, cd, fid, cd.a, cd.d, true));
        }
      } else {
        // Head-on track sharing: the occupations must not overlap. Our entry
        // is frozen, so overlap is only avoidable if we already exit in time.
        const bool disjoint = cd.a + h <= u.entry || entry >= u.exit + h;
        if (!disjoint)
          out.push_back(make(ConstraintKind::EdgeSpacing, cd, fid, cd.a, cd.d, true));
      }
    }
  }

  // Outgoing edge: entry separation at our departure. Overtake ordering is
  // enforced on the arrival side once the next node is placed.
  if (cd.pos < last && !cd.fragment.has(cd.train_idx, cd.pos + 1)) {
    const NodeId node = itin[cd.pos];
    const NodeId next = itin[cd.pos + 1];
    const EdgeId edge = cd.problem.network.edge_between(node, next);
    const Time h = cd.problem.network.edges[edge].headway;
    for (const EdgeUse& u : edge_uses(cd, edge, cd.route.u_out, node, next)) {
      const TrainId fid = ts.trains[u.train_idx].id;
      if (u.same_direction) {
        if (cd.d > u.entry - h && cd.d < u.entry + h)
          out.push_back(make(ConstraintKind::EdgeSpacing, cd, fid, cd.a, u.entry + h));
      } else {
        // Opposite traffic already claimed the track. Sneaking across ahead
        // of it is unsafe (our exit can still be delayed at the far node),
        // so wait until it has left.
        if (cd.d < u.exit + h)
          out.push_back(make(ConstraintKind::EdgeSpacing, cd, fid, cd.a, u.exit + h));
      }
    }
  }
}

void check_connection(const Candidate& cd, std::vector<Conflict>& out) {
  const TrainSet& ts = cd.problem.trains;
  const NodeId node = ts.trains[cd.train_idx].itinerary[cd.pos];
  const TrainId cid = ts.trains[cd.train_idx].id;
  for (const Connection& cn : ts.connections) {
    if (cn.node != node) continue;
    if (cn.outgoing == cid) {
      const int f = ts.index_of(cn.feeder);
      const auto& fit = ts.trains[f].itinerary;
      for (std::size_t q = 0; q < cd.fragment.placed[f].size(); ++q) {
        if (fit[q] != node) continue;
        const Time earliest = cd.fragment.placed[f][q].arrival + cn.min_transfer;
        if (cd.d < earliest)
          out.push_back(make(ConstraintKind::Connection, cd, cn.feeder, cd.a, earliest));
      }
    }
    if (cn.feeder == cid) {
      const int g = ts.index_of(cn.outgoing);
      const auto& git = ts.trains[g].itinerary;
      for (std::size_t q = 0; q < cd.fragment.placed[g].size(); ++q) {
        if (git[q] != node) continue;
        // The partner's departure is committed; arriving too late for the
        // transfer cannot be repaired by moving ourselves forward.
        if (cd.fragment.placed[g][q].departure < cd.a + cn.min_transfer)
          out.push_back(make(ConstraintKind::Connection, cd, cn.outgoing, cd.a, cd.d, true));
      }
    }
  }
}

bool uses_gate(const Gate& gate, EdgeId edge, int track) {
  return std::find(gate.members.begin(), gate.members.end(),
                   std::make_pair(edge, track)) != gate.members.end();
}

// Occupations [t - h, t + h] of a gate by placed trains other than ours.
std::vector<Time> gate_passages(const Candidate& cd, NodeId node, const Gate& gate) {
  std::vector<Time> times;
  const TrainSet& ts = cd.problem.trains;
  for (int f = 0; f < ts.size(); ++f) {
    if (f == cd.train_idx) continue;
    const auto& itin = ts.trains[f].itinerary;
    const auto& placed = cd.fragment.placed[f];
    const int flast = static_cast<int>(itin.size()) - 1;
    for (std::size_t q = 0; q < placed.size(); ++q) {
      if (itin[q] != node) continue;
      bool member = false;
      if (q > 0) {
        const EdgeId e = cd.problem.network.edge_between(itin[q - 1], itin[q]);
        member = member || uses_gate(gate, e, placed[q].route.u_inc);
      }
      if (static_cast<int>(q) < flast) {
        const EdgeId e = cd.problem.network.edge_between(itin[q], itin[q + 1]);
        member = member || uses_gate(gate, e, placed[q].route.u_out);
      }
      if (member) times.push_back(placed[q].departure);
    }
  }
  return times;
}

void check_gate(const Candidate& cd, std::vector<Conflict>& out) {
  const TrainSet& ts = cd.problem.trains;
  const auto& itin = ts.trains[cd.train_idx].itinerary;
  const NodeId node = itin[cd.pos];
  const int last = static_cast<int>(itin.size()) - 1;
  for (const Gate& gate : cd.problem.network.gates[node]) {
    bool member = false;
    if (cd.pos > 0) {
      const EdgeId e = cd.problem.network.edge_between(itin[cd.pos - 1], node);
      member = member || uses_gate(gate, e, cd.route.u_inc);
    }
    if (cd.pos < last) {
      const EdgeId e = cd.problem.network.edge_between(node, itin[cd.pos + 1]);
      member = member || uses_gate(gate, e, cd.route.u_out);
    }
    if (!member) continue;
    const Time h = gate.headway;
    std::vector<Time> others = gate_passages(cd, node, gate);
    auto overlaps = [&](Time t) {
      int n = 0;
      for (Time to : others)
        if (t - h <= to + h && t + h >= to - h) ++n;
      return n;
    };
    if (overlaps(cd.d) >= gate.capacity) {
      // Earliest departure at which the gate has spare capacity.
      std::sort(others.begin(), others.end());
      Time clear = cd.d;
      for (Time to : others) {
        const Time candidate = to + 2 * h + 1;
        if (candidate > clear && overlaps(candidate) < gate.capacity) {
          clear = candidate;
          break;
        }
      }
      if (clear == cd.d) clear = others.back() + 2 * h + 1;
      out.push_back(make(ConstraintKind::Gate, cd, std::nullopt, cd.a, clear));
    }
  }
}

}  // namespace

std::vector<Conflict> check_constraints(const Problem& problem, const PerturbedProblem& bounds,
                                        const ScheduleFragment& fragment, int train_idx, int pos,
                                        const RouteTriplet& route, Time arrival, Time departure) {
  Candidate cd{problem, bounds, fragment, train_idx, pos, route, arrival, departure};
  std::vector<Conflict> out;
  check_initial_time(cd, out);
  check_speed(cd, out);
  check_stop(cd, out);
  check_node_spacing(cd, out);
  check_edge_spacing(cd, out);
  check_connection(cd, out);
  check_gate(cd, out);
  return out;
}

std::vector<Conflict> validate_schedule(const Problem& problem, const PerturbedProblem& bounds,
                                        const ScheduleFragment& fragment) {
  std::vector<Conflict> all;
  for (std::size_t c = 0; c < fragment.placed.size(); ++c) {
    for (std::size_t p = 0; p < fragment.placed[c].size(); ++p) {
      const Assignment& as = fragment.placed[c][p];
      auto conflicts = check_constraints(problem, bounds, fragment, static_cast<int>(c),
                                         static_cast<int>(p), as.route, as.arrival, as.departure);
      all.insert(all.end(), conflicts.begin(), conflicts.end());
    }
  }
  return all;
}

}  // namespace rail
