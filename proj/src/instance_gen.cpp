#include "rail/instance_gen.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include "rail/ea.hpp"
#include "rail/inoculation.hpp"

namespace rail {

namespace {

struct Occupancy {
  int train_idx;
  std::size_t pos;
  Time arrival;
  Time departure;
};

// Same-track occupancies per (node, in-node track), sorted by arrival.
std::vector<std::vector<std::vector<Occupancy>>> node_occupancies(const Problem& p) {
  std::vector<std::vector<std::vector<Occupancy>>> occ(p.network.node_count);
  for (NodeId j = 0; j < p.network.node_count; ++j) occ[j].resize(p.network.node_tracks[j]);
  for (std::size_t i = 0; i < p.trains.trains.size(); ++i) {
    const Train& c = p.trains.trains[i];
    for (std::size_t q = 0; q < c.itinerary.size(); ++q) {
      const TimetableEntry& e = p.timetable.entries[i][q];
      occ[c.itinerary[q]][e.route.u].push_back({static_cast<int>(i), q, e.arrival, e.departure});
    }
  }
  for (auto& per_node : occ)
    for (auto& per_track : per_node)
      std::sort(per_track.begin(), per_track.end(),
                [](const Occupancy& x, const Occupancy& y) { return x.arrival < y.arrival; });
  return occ;
}

void shift_train(Problem& p, int train_idx, Time shift) {
  for (TimetableEntry& e : p.timetable.entries[train_idx]) {
    e.arrival += shift;
    e.departure += shift;
  }
}

}  // namespace

GeneratedInstance generate(const GeneratorParams& pr) {
  if (pr.n_trains < 1) throw GenerationError("n_trains must be >= 1");
  if (pr.n_nodes < 2) throw GenerationError("n_nodes must be >= 2");
  if (pr.min_tracks_per_edge < 1 || pr.max_tracks_per_edge < pr.min_tracks_per_edge)
    throw GenerationError("invalid tracks_per_edge range");
  if (pr.traffic_density <= 0.0 || pr.traffic_density > 1.0)
    throw GenerationError("traffic_density must be in (0, 1]");
  if (pr.n_branches > 0 && pr.n_nodes < 3)
    throw GenerationError("branches need at least one interior corridor node");

  Rng rng(pr.seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto chance = [&](double p) { return std::uniform_real_distribution<>(0.0, 1.0)(rng) < p; };

  Problem out;
  Network& net = out.network;
  const int corridor = pr.n_nodes;
  net.node_count = corridor + pr.n_branches;
  net.node_tracks.resize(net.node_count);
  for (NodeId j = 0; j < net.node_count; ++j) {
    const bool terminal = j == 0 || j == corridor - 1 || j >= corridor;
    net.node_tracks[j] = terminal ? pr.max_node_tracks : uniform(1, pr.max_node_tracks);
  }

  for (NodeId j = 0; j + 1 < corridor; ++j)
    net.edges.push_back({j, j + 1, uniform(pr.min_tracks_per_edge, pr.max_tracks_per_edge),
                         pr.edge_headway});
  for (int b = 0; b < pr.n_branches; ++b)
    net.edges.push_back({uniform(1, corridor - 2), corridor + b,
                         uniform(pr.min_tracks_per_edge, pr.max_tracks_per_edge),
                         pr.edge_headway});

  net.routes.resize(net.node_count);
  for (NodeId j = 0; j < net.node_count; ++j) {
    int incident = 1;
    for (const Edge& e : net.edges)
      if (e.a == j || e.b == j) incident = std::max(incident, e.track_count);
    for (int ui = 0; ui < incident; ++ui)
      for (int u = 0; u < net.node_tracks[j]; ++u)
        for (int uo = 0; uo < incident; ++uo) net.routes[j].push_back({ui, u, uo});
  }

  net.gates.resize(net.node_count);
  for (NodeId j = 1; j + 1 < corridor; ++j) {
    if (!chance(pr.gate_density)) continue;
    Gate g;
    g.capacity = 1;
    g.headway = std::max<Time>(1, pr.edge_headway / 2);
    for (std::size_t e = 0; e < net.edges.size(); ++e)
      if (net.edges[e].a == j || net.edges[e].b == j) g.members.emplace_back(e, 0);
    net.gates[j].push_back(std::move(g));
  }

  // Per-edge minimum travel times, shared by all trains.
  std::vector<Time> edge_beta(net.edges.size());
  for (Time& b : edge_beta) b = uniform(120, 300);

  const Time min_gap = std::max(pr.gamma, pr.edge_headway) + 30;
  const Time gap = min_gap + static_cast<Time>((1.0 - pr.traffic_density) * 600.0);
  const Time t_base = pr.day_start;

  out.spacing.default_gamma = pr.gamma;

  for (int i = 0; i < pr.n_trains; ++i) {
    Train c;
    c.id = i;
    const bool reverse = i > 0 && chance(pr.opposite_fraction);
    int lo = 0;
    int hi = corridor - 1;
    if (chance(pr.partial_itinerary_fraction) && corridor >= 4) {
      const int len = uniform(std::max(2, corridor / 2), corridor);
      lo = uniform(0, corridor - len);
      hi = lo + len - 1;
    }
    if (reverse)
      for (int j = hi; j >= lo; --j) c.itinerary.push_back(j);
    else
      for (int j = lo; j <= hi; ++j) c.itinerary.push_back(j);

    const std::size_t len = c.itinerary.size();
    c.stops.resize(len);
    for (std::size_t q = 0; q < len; ++q) {
      const bool interior = q > 0 && q + 1 < len;
      const Time amin = interior && chance(0.6) ? 30 : 0;
      c.stops[q] = {amin, amin + pr.dwell_slack};
    }
    c.min_travel.resize(len - 1);
    for (std::size_t q = 0; q + 1 < len; ++q)
      c.min_travel[q] = edge_beta[net.edge_between(c.itinerary[q], c.itinerary[q + 1])];

    std::vector<TimetableEntry> row(len);
    Time t = t_base + static_cast<Time>(i) * gap;
    for (std::size_t q = 0; q < len; ++q) {
      if (q > 0) t += c.min_travel[q - 1];
      row[q].arrival = t;
      row[q].departure = t + c.stops[q].min_dwell;
      t = row[q].departure;
      const NodeId node = c.itinerary[q];
      RouteTriplet r;
      r.u = i % net.node_tracks[node];
      r.u_inc = q > 0 ? i % net.edges[net.edge_between(c.itinerary[q - 1], node)].track_count : 0;
      r.u_out = q + 1 < len
                    ? i % net.edges[net.edge_between(node, c.itinerary[q + 1])].track_count
                    : 0;
      row[q].route = r;
    }
    out.trains.trains.push_back(std::move(c));
    out.timetable.entries.push_back(std::move(row));
  }

  // Repair pass: push later trains forward until the theoretical timetable is
  // free of same-track node-spacing violations.
  for (int pass = 0; pass < 4 * pr.n_trains; ++pass) {
    bool dirty = false;
    const auto occ = node_occupancies(out);
    for (NodeId j = 0; j < net.node_count && !dirty; ++j) {
      for (const auto& track : occ[j]) {
        for (std::size_t k = 0; k + 1 < track.size(); ++k) {
          const Time margin = track[k + 1].arrival - track[k].departure;
          if (margin < pr.gamma) {
            shift_train(out, track[k + 1].train_idx, pr.gamma - margin);
            dirty = true;
            break;
          }
        }
        if (dirty) break;
      }
    }
    if (!dirty) break;
    if (pass + 1 == 4 * pr.n_trains)
      throw GenerationError("could not build a violation-free timetable; "
                            "reduce traffic_density or train count");
  }

  GeneratedInstance gen;
  gen.metadata.seed = pr.seed;

  // Inject minor inconsistencies: squeeze chosen same-track margins below
  // gamma by shifting the later train earlier.
  if (pr.violation_rate > 0.0) {
    struct Site {
      int earlier, later;
      NodeId node;
    };
    std::vector<Site> candidates;
    const auto occ = node_occupancies(out);
    for (NodeId j = 0; j < net.node_count; ++j)
      for (const auto& track : occ[j])
        for (std::size_t k = 0; k + 1 < track.size(); ++k)
          candidates.push_back({track[k].train_idx, track[k + 1].train_idx, j});
    for (const Site& s : candidates) {
      if (!chance(pr.violation_rate)) continue;
      // Recompute the current margin; earlier shifts may have changed it.
      Time d_earlier = 0, a_later = 0;
      const Train& ce = out.trains.trains[s.earlier];
      const Train& cl = out.trains.trains[s.later];
      for (std::size_t q = 0; q < ce.itinerary.size(); ++q)
        if (ce.itinerary[q] == s.node) d_earlier = out.timetable.entries[s.earlier][q].departure;
      for (std::size_t q = 0; q < cl.itinerary.size(); ++q)
        if (cl.itinerary[q] == s.node) a_later = out.timetable.entries[s.later][q].arrival;
      const Time shift = (a_later - d_earlier) - pr.gamma / 2;
      if (shift <= 0) continue;
      shift_train(out, s.later, -shift);
      gen.metadata.injected.push_back({ce.id, cl.id, s.node});
    }
  }

  // Connections between trains that meet at a node with enough slack.
  if (pr.connection_rate > 0.0) {
    for (std::size_t i = 0; i < out.trains.trains.size(); ++i) {
      for (std::size_t k = 0; k < out.trains.trains.size(); ++k) {
        if (i == k) continue;
        const Train& f = out.trains.trains[i];
        const Train& g = out.trains.trains[k];
        for (std::size_t qi = 0; qi < f.itinerary.size(); ++qi) {
          for (std::size_t qk = 0; qk < g.itinerary.size(); ++qk) {
            if (f.itinerary[qi] != g.itinerary[qk]) continue;
            const Time margin = out.timetable.entries[k][qk].departure -
                                out.timetable.entries[i][qi].arrival;
            if (margin >= pr.min_transfer && chance(pr.connection_rate))
              out.trains.connections.push_back({f.id, g.id, f.itinerary[qi], pr.min_transfer});
          }
        }
      }
    }
  }

  // Perturbation: delay one train early in the traffic pattern at an early
  // itinerary node, where knock-on effects are largest.
  {
    const int victim = uniform(0, std::max(0, pr.n_trains / 2 - 1));
    const Train& c = out.trains.trains[victim];
    const std::size_t pos = c.itinerary.size() > 2 ? 1 : 0;
    out.perturbation = Perturbation{c.id, c.itinerary[pos], pr.delta};
  }

  validate_problem(out);
  gen.problem = std::move(out);
  return gen;
}

std::pair<Problem, Problem> make_instance_pair(const Problem& base, Time delta_easy,
                                               Time delta_hard) {
  Problem easy = base;
  Problem hard = base;
  if (!base.perturbation) throw GenerationError("base instance carries no perturbation");
  easy.perturbation->delay = delta_easy;
  hard.perturbation->delay = delta_hard;
  return {std::move(easy), std::move(hard)};
}

Permutation timetable_order(const Problem& problem) {
  std::vector<std::pair<Time, TrainId>> keyed;
  for (std::size_t i = 0; i < problem.trains.trains.size(); ++i)
    keyed.emplace_back(problem.timetable.entries[i].front().departure,
                       problem.trains.trains[i].id);
  std::sort(keyed.begin(), keyed.end());
  Permutation p;
  for (auto& [t, id] : keyed) p.order.push_back(id);
  return p;
}

InstanceLabel classify(const Problem& problem, long long oracle_budget,
                       const SchedulerConfig& config) {
  const int n = problem.trains.size();
  long long factorial = 1;
  bool overflow = false;
  for (int i = 2; i <= n; ++i) {
    factorial *= i;
    if (factorial > (1ll << 40)) {
      overflow = true;
      break;
    }
  }

  const PerturbedProblem bounds = problem.perturbation
                                      ? apply_perturbation(problem, *problem.perturbation)
                                      : unperturbed_bounds(problem);
  InstanceLabel label;
  label.identity_fitness = schedule(problem, bounds, timetable_order(problem), config).fitness;

  if (!overflow && factorial <= oracle_budget) {
    label.oracle_optimum = best_over_all_permutations(problem, bounds, config).best_fitness;
    label.difficulty =
        label.identity_fitness == label.oracle_optimum ? Difficulty::Easy : Difficulty::Hard;
    return label;
  }
  if (oracle_budget >= 1000) {
    Rng rng(42);
    Fitness best_random = std::numeric_limits<Fitness>::max();
    for (const Permutation& p : init_random(1000, problem.trains, rng))
      best_random = std::min(best_random, schedule(problem, bounds, p, config).fitness);
    label.oracle_optimum = best_random;  // proxy evidence
    label.difficulty =
        label.identity_fitness <= best_random ? Difficulty::Easy : Difficulty::Hard;
    return label;
  }
  label.difficulty = Difficulty::Unknown;
  return label;
}

std::string save_metadata(const InstanceMetadata& metadata) {
  std::ostringstream os;
  os << "railmeta 1\n";
  os << "seed " << metadata.seed << "\n";
  for (const InjectionSite& s : metadata.injected)
    os << "injected " << s.earlier << " " << s.later << " " << s.node << "\n";
  return os.str();
}

InstanceMetadata load_metadata(const std::string& document) {
  InstanceMetadata out;
  std::istringstream is(document);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "seed") ls >> out.seed;
    else if (key == "injected") {
      InjectionSite s;
      ls >> s.earlier >> s.later >> s.node;
      out.injected.push_back(s);
    }
  }
  return out;
}

}  // namespace rail
