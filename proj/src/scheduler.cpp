#include "rail/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>

namespace rail {

bool is_valid_permutation(const Permutation& p, const TrainSet& trains) {
  if (p.order.size() != trains.trains.size()) return false;
  std::vector<TrainId> sorted = p.order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<TrainId> ids;
  ids.reserve(trains.trains.size());
  for (const Train& c : trains.trains) ids.push_back(c.id);
  std::sort(ids.begin(), ids.end());
  return sorted == ids;
}

Fitness default_penalty(const Problem& problem) {
  Time lo = std::numeric_limits<Time>::max();
  Time hi = std::numeric_limits<Time>::min();
  std::size_t max_itin = 0;
  for (std::size_t i = 0; i < problem.timetable.entries.size(); ++i) {
    max_itin = std::max(max_itin, problem.timetable.entries[i].size());
    for (const TimetableEntry& e : problem.timetable.entries[i]) {
      lo = std::min(lo, e.arrival);
      hi = std::max(hi, e.departure);
    }
  }
  const Time delta = problem.perturbation ? problem.perturbation->delay : 0;
  const Time horizon = (hi - lo) + delta + 3600;
  return horizon * static_cast<Fitness>(problem.trains.size()) *
         static_cast<Fitness>(max_itin);
}

namespace {

struct DecodeState {
  const Problem& problem;
  const PerturbedProblem& bounds;
  const SchedulerConfig& config;
  ScheduleFragment fragment;
  std::vector<int> kick_count;
  std::vector<int> completion_stamp;  // 0 = never completed
  std::vector<TrainId> stack;         // back() = top
  std::vector<TrainId> unscheduled;
  std::vector<TrainId> insertion_order;
  int stamp_counter = 0;
};

enum class InsertStatus { Placed, Failed };

// Resolves one conflict by the minimal forward shift, keeping the stop window.
void apply_clearing(const Conflict& cf, const StopBounds& stop, Time d0, Time& a, Time& d) {
  a = std::max(a, cf.clear_arrival);
  d = std::max({d, cf.clear_departure, a + stop.min_dwell, d0});
  if (d - a > stop.max_dwell) a = d - stop.max_dwell;
}

struct RouteAttempt {
  int route_index = -1;
  Time arrival = 0;
  Time departure = 0;
};

bool kick(DecodeState& st, int blocker_idx) {
  if (st.kick_count[blocker_idx] >= st.config.kick_limit) return false;
  st.fragment.placed[blocker_idx].clear();
  st.kick_count[blocker_idx] += 1;
  st.stack.push_back(st.problem.trains.trains[blocker_idx].id);
  return true;
}

InsertStatus insert_train(DecodeState& st, int train_idx) {
  const Train& train = st.problem.trains.trains[train_idx];
  const int last = static_cast<int>(train.itinerary.size()) - 1;
  auto& placed = st.fragment.placed[train_idx];
  placed.clear();

  for (int pos = 0; pos <= last; ++pos) {
    const NodeId node = train.itinerary[pos];
    const StopBounds& stop = train.stops[pos];
    const TimetableEntry& tt = st.problem.timetable.entries[train_idx][pos];
    const auto& node_routes = st.problem.network.routes[node];

    for (;;) {  // restarted after each kick at this node
      std::optional<RouteAttempt> best;
      std::vector<int> fatal_blockers;

      for (std::size_t r = 0; r < node_routes.size(); ++r) {
        const RouteTriplet& route = node_routes[r];
        if (pos > 0 && route.u_inc != placed[pos - 1].route.u_out) continue;
        if (route.u >= st.problem.network.node_tracks[node]) continue;
        if (pos > 0) {
          const EdgeId e = st.problem.network.edge_between(train.itinerary[pos - 1], node);
          if (route.u_inc >= st.problem.network.edges[e].track_count) continue;
        }
        if (pos < last) {
          const EdgeId e = st.problem.network.edge_between(node, train.itinerary[pos + 1]);
          if (route.u_out >= st.problem.network.edges[e].track_count) continue;
        }

        Time a = st.bounds.arrival_lb[train_idx][pos];
        if (pos > 0) a = std::max(a, placed[pos - 1].departure + train.min_travel[pos - 1]);
        Time d = std::max(tt.departure, a + stop.min_dwell);
        if (d - a > stop.max_dwell) a = d - stop.max_dwell;

        bool fatal = false;
        for (int iter = 0; iter < st.config.conflict_loop_cap; ++iter) {
          auto conflicts = check_constraints(st.problem, st.bounds, st.fragment, train_idx, pos,
                                             route, a, d);
          if (conflicts.empty()) break;
          const Conflict& first = conflicts.front();
          if (first.fatal) {
            fatal = true;
            for (const Conflict& cf : conflicts)
              if (cf.fatal && cf.blocker) {
                const int b = st.problem.trains.index_of(*cf.blocker);
                if (std::find(fatal_blockers.begin(), fatal_blockers.end(), b) ==
                    fatal_blockers.end())
                  fatal_blockers.push_back(b);
              }
            break;
          }
          const Time old_a = a;
          const Time old_d = d;
          apply_clearing(first, stop, tt.departure, a, d);
          if (a == old_a && d == old_d) {  // no progress possible
            fatal = true;
            break;
          }
          if (iter + 1 == st.config.conflict_loop_cap) fatal = true;
        }
        if (fatal) continue;
        if (!best || d < best->departure)
          best = RouteAttempt{static_cast<int>(r), a, d};
      }

      if (best) {
        placed.push_back({best->arrival, best->departure, node_routes[best->route_index]});
        break;  // next node
      }

      // Every admissible route is fatal: kick the most recently committed
      // blocker and retry this node.
      std::sort(fatal_blockers.begin(), fatal_blockers.end(), [&](int x, int y) {
        return st.completion_stamp[x] > st.completion_stamp[y];
      });
      bool kicked = false;
      for (int b : fatal_blockers)
        if (kick(st, b)) {
          kicked = true;
          break;
        }
      if (!kicked) {
        placed.clear();
        return InsertStatus::Failed;
      }
    }
  }
  return InsertStatus::Placed;
}

}  // namespace

ScheduleResult schedule(const Problem& problem, const PerturbedProblem& bounds,
                        const Permutation& permutation, const SchedulerConfig& config) {
  const int n = problem.trains.size();
  DecodeState st{problem, bounds, config, {}, {}, {}, {}, {}, {}};
  st.fragment.placed.resize(n);
  st.kick_count.assign(n, 0);
  st.completion_stamp.assign(n, 0);
  st.stack.assign(permutation.order.rbegin(), permutation.order.rend());

  while (!st.stack.empty()) {
    const TrainId id = st.stack.back();
    st.stack.pop_back();
    const int idx = problem.trains.index_of(id);
    if (insert_train(st, idx) == InsertStatus::Placed) {
      st.completion_stamp[idx] = ++st.stamp_counter;
      st.insertion_order.push_back(id);
      std::erase(st.unscheduled, id);
    } else {
      st.completion_stamp[idx] = 0;
      if (std::find(st.unscheduled.begin(), st.unscheduled.end(), id) == st.unscheduled.end())
        st.unscheduled.push_back(id);
    }
  }

  ScheduleResult result;
  result.fragment = std::move(st.fragment);
  result.unscheduled = std::move(st.unscheduled);
  std::sort(result.unscheduled.begin(), result.unscheduled.end());
  result.kick_count = std::move(st.kick_count);
  result.insertion_order = std::move(st.insertion_order);
  result.fitness = evaluate_fitness(result, problem, config);
  return result;
}

ScheduleResult schedule(const Problem& problem, const Permutation& permutation,
                        const SchedulerConfig& config) {
  const PerturbedProblem bounds = problem.perturbation
                                      ? apply_perturbation(problem, *problem.perturbation)
                                      : unperturbed_bounds(problem);
  return schedule(problem, bounds, permutation, config);
}

Fitness evaluate_fitness(const ScheduleResult& result, const Problem& problem,
                         const SchedulerConfig& config) {
  Fitness sum = 0;
  for (const auto& train : result.fragment.placed)
    for (const Assignment& as : train) sum += as.arrival;
  const Fitness penalty = config.penalty > 0 ? config.penalty : default_penalty(problem);
  return sum + penalty * static_cast<Fitness>(result.unscheduled.size());
}

Fitness total_delay(const ScheduleResult& result, const Problem& problem) {
  Fitness sum = 0;
  for (std::size_t c = 0; c < result.fragment.placed.size(); ++c)
    for (std::size_t p = 0; p < result.fragment.placed[c].size(); ++p)
      sum += result.fragment.placed[c][p].arrival - problem.timetable.entries[c][p].arrival;
  return sum;
}

OracleResult best_over_all_permutations(const Problem& problem, const PerturbedProblem& bounds,
                                        const SchedulerConfig& config) {
  Permutation p;
  for (const Train& c : problem.trains.trains) p.order.push_back(c.id);
  std::sort(p.order.begin(), p.order.end());

  OracleResult out;
  out.best_fitness = std::numeric_limits<Fitness>::max();
  do {
    const ScheduleResult r = schedule(problem, bounds, p, config);
    if (r.fitness < out.best_fitness) {
      out.best_fitness = r.fitness;
      out.best = p;
    }
  } while (std::next_permutation(p.order.begin(), p.order.end()));
  return out;
}

}  // namespace rail
