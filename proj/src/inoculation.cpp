#include "rail/inoculation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rail/io.hpp"

namespace rail {

Layers three_layer_preset() { return Layers{{{33, 0}, {33, 10}, {33, 500}}}; }
Layers two_layer_preset() { return Layers{{{50, 3}, {50, 500}}}; }

std::string scheme_name(const InitScheme& scheme) {
  std::ostringstream os;
  if (const auto* mm = std::get_if<MassMutation>(&scheme)) {
    os << "MM(" << mm->pr << ")";
  } else if (const auto* gp = std::get_if<GradualPerturbation>(&scheme)) {
    os << "GPer(" << gp->pr0 << "," << gp->pr_inc << ")";
  } else {
    const auto& li = std::get<Layers>(scheme);
    os << "L(";
    for (std::size_t k = 0; k < li.layers.size(); ++k) {
      if (k) os << ",";
      os << li.layers[k].first << "/" << li.layers[k].second;
    }
    os << ")";
  }
  return os.str();
}

std::optional<InitScheme> parse_scheme(const std::string& text) {
  if (text == "T") return InitScheme{three_layer_preset()};
  if (text == "H") return InitScheme{two_layer_preset()};
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') return std::nullopt;
  const std::string head = text.substr(0, open);
  std::string body = text.substr(open + 1, text.size() - open - 2);
  std::replace(body.begin(), body.end(), ',', ' ');
  std::istringstream is(body);
  try {
    if (head == "MM") {
      int pr;
      if (!(is >> pr) || pr < 0) return std::nullopt;
      return InitScheme{MassMutation{pr}};
    }
    if (head == "GPer") {
      int pr0, pr_inc;
      if (!(is >> pr0 >> pr_inc) || pr0 < 0 || pr_inc < 0) return std::nullopt;
      return InitScheme{GradualPerturbation{pr0, pr_inc}};
    }
    if (head == "L") {
      Layers li;
      std::string part;
      while (is >> part) {
        const auto slash = part.find('/');
        if (slash == std::string::npos) return std::nullopt;
        li.layers.emplace_back(std::stoi(part.substr(0, slash)),
                               std::stoi(part.substr(slash + 1)));
      }
      int total = 0;
      for (auto [x, pr] : li.layers) {
        if (x <= 0 || pr < 0) return std::nullopt;
        total += x;
      }
      if (li.layers.empty() || total < 99 || total > 100) return std::nullopt;
      return InitScheme{li};
    }
  } catch (const std::logic_error&) {
    return std::nullopt;
  }
  return std::nullopt;
}

std::uint64_t ea_config_hash(const EAConfig& c) {
  std::ostringstream os;
  os << c.mu << " " << c.offspring_per_parent << " "
     << (c.replacement == ReplacementKind::Plus ? "plus" : "ept") << " " << c.ept_opponents
     << " " << c.swap_radius << " " << c.temperature.annealed << " " << c.temperature.constant_t
     << " " << c.temperature.n0 << " " << c.temperature.t0 << " " << c.temperature.t_inf << " "
     << c.temperature.gamma_decay << " " << c.temperature.binomial << " " << c.generations << " "
     << c.seed;
  return fnv1a64(os.str());
}

Inoculant compute_inoculant(const Problem& problem, const EAConfig& ea_config,
                            const SchedulerConfig& scheduler_config,
                            const std::optional<std::filesystem::path>& cache_path) {
  const std::uint64_t ihash = instance_hash(problem);
  const std::uint64_t chash = ea_config_hash(ea_config);

  if (cache_path && std::filesystem::exists(*cache_path)) {
    try {
      Inoculant cached = load_inoculant(read_file(*cache_path));
      if (cached.instance_hash == ihash && cached.config_hash == chash) return cached;
    } catch (const std::exception&) {
      // stale or corrupt cache: recompute below
    }
  }

  const PerturbedProblem bounds = unperturbed_bounds(problem);
  Rng rng(mix_seed(ea_config.seed, 0x1a0c, 0, 0));
  const auto initial = init_random(ea_config.mu, problem.trains, rng);
  const RunTrace trace = evolve(problem, bounds, initial, ea_config, scheduler_config);

  Inoculant out;
  out.permutation = trace.best;
  out.instance_hash = ihash;
  out.config_hash = chash;
  out.generations = ea_config.generations;
  out.achieved_fitness = trace.best_result.fitness;
  out.fully_feasible = trace.best_result.unscheduled.empty();

  if (cache_path) write_file(*cache_path, save_inoculant(out));
  return out;
}

Permutation perturb(const Permutation& inoculant, int pr, Rng& rng) {
  Permutation out = inoculant;
  const int n = static_cast<int>(out.order.size());
  if (n < 2) return out;
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int k = 0; k < pr; ++k) {
    const int i = pick(rng);
    int j = std::uniform_int_distribution<int>(0, n - 2)(rng);
    if (j >= i) ++j;
    std::swap(out.order[i], out.order[j]);
  }
  return out;
}

namespace {

int capped_radius(int pr, int n) { return std::min(pr, 10 * n); }

}  // namespace

std::vector<Permutation> init_population(const Permutation& inoculant, const InitScheme& scheme,
                                         int size, Rng& rng) {
  if (size < 1) throw std::invalid_argument("init_population: size must be >= 1");
  const int n = static_cast<int>(inoculant.order.size());
  std::vector<Permutation> pop;
  pop.reserve(static_cast<std::size_t>(size));

  if (const auto* mm = std::get_if<MassMutation>(&scheme)) {
    for (int k = 0; k < size; ++k)
      pop.push_back(perturb(inoculant, capped_radius(mm->pr, n), rng));
  } else if (const auto* gp = std::get_if<GradualPerturbation>(&scheme)) {
    for (int k = 0; k < size; ++k)
      pop.push_back(perturb(inoculant, capped_radius(gp->pr0 + k * gp->pr_inc, n), rng));
  } else {
    const auto& li = std::get<Layers>(scheme);
    std::vector<int> counts;
    int assigned = 0;
    for (std::size_t k = 0; k < li.layers.size(); ++k) {
      int c = static_cast<int>(std::llround(li.layers[k].first * size / 100.0));
      if (k + 1 == li.layers.size()) c = size - assigned;
      counts.push_back(c);
      assigned += c;
    }
    for (std::size_t k = 0; k < li.layers.size(); ++k)
      for (int j = 0; j < counts[k]; ++j)
        pop.push_back(perturb(inoculant, capped_radius(li.layers[k].second, n), rng));
  }
  return pop;
}

std::vector<Permutation> init_random(int size, const TrainSet& trains, Rng& rng) {
  std::vector<TrainId> ids;
  ids.reserve(trains.trains.size());
  for (const Train& c : trains.trains) ids.push_back(c.id);
  std::sort(ids.begin(), ids.end());

  std::vector<Permutation> pop;
  pop.reserve(static_cast<std::size_t>(size));
  for (int k = 0; k < size; ++k) {
    Permutation p{ids};
    // Fisher-Yates
    for (int i = static_cast<int>(p.order.size()) - 1; i > 0; --i) {
      const int j = std::uniform_int_distribution<int>(0, i)(rng);
      std::swap(p.order[i], p.order[j]);
    }
    pop.push_back(std::move(p));
  }
  return pop;
}

std::string save_inoculant(const Inoculant& inoculant) {
  std::ostringstream os;
  os << "# railinoculant 1\n";
  os << "# instance " << std::hex << inoculant.instance_hash << "\n";
  os << "# config " << inoculant.config_hash << std::dec << "\n";
  os << "# generations " << inoculant.generations << "\n";
  os << "# fitness " << inoculant.achieved_fitness << "\n";
  os << "# feasible " << (inoculant.fully_feasible ? 1 : 0) << "\n";
  for (std::size_t i = 0; i < inoculant.permutation.order.size(); ++i) {
    if (i) os << " ";
    os << inoculant.permutation.order[i];
  }
  os << "\n";
  return os.str();
}

Inoculant load_inoculant(const std::string& document) {
  Inoculant out;
  std::istringstream is(document);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key == "instance")
        ls >> std::hex >> out.instance_hash;
      else if (key == "config")
        ls >> std::hex >> out.config_hash;
      else if (key == "generations")
        ls >> std::dec >> out.generations;
      else if (key == "fitness")
        ls >> std::dec >> out.achieved_fitness;
      else if (key == "feasible") {
        int v = 0;
        ls >> std::dec >> v;
        out.fully_feasible = v != 0;
      }
      continue;
    }
    std::istringstream ls(line);
    TrainId id;
    while (ls >> id) out.permutation.order.push_back(id);
  }
  return out;
}

}  // namespace rail
