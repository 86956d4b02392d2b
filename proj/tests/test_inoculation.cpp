#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "fixtures.hpp"
#include "rail/inoculation.hpp"
#include "rail/instance_gen.hpp"
#include "rail/io.hpp"

using namespace rail;
using namespace rail::testing;

namespace {
int transposition_distance(const Permutation& a, const Permutation& b) {
  // minimum swaps = n - number of cycles of the relating permutation
  const int n = static_cast<int>(a.order.size());
  std::vector<int> to(n);
  for (int i = 0; i < n; ++i) {
    const auto it = std::find(b.order.begin(), b.order.end(), a.order[i]);
    to[i] = static_cast<int>(it - b.order.begin());
  }
  std::vector<bool> seen(n, false);
  int cycles = 0;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (int j = i; !seen[j]; j = to[j]) seen[j] = true;
  }
  return n - cycles;
}

Permutation iota_perm(int n) {
  Permutation p;
  for (int i = 0; i < n; ++i) p.order.push_back(i + 1);
  return p;
}
}  // namespace

TEST_CASE("layer presets") {
  const Layers t = three_layer_preset();
  REQUIRE(t.layers.size() == 3);
  CHECK(t.layers[0] == std::pair<int, int>{33, 0});
  CHECK(t.layers[1] == std::pair<int, int>{33, 10});
  CHECK(t.layers[2] == std::pair<int, int>{33, 500});
  const Layers h = two_layer_preset();
  REQUIRE(h.layers.size() == 2);
  CHECK(h.layers[0] == std::pair<int, int>{50, 3});
  CHECK(h.layers[1] == std::pair<int, int>{50, 500});
}

TEST_CASE("scheme names round trip through the parser") {
  for (const char* name : {"MM(3)", "MM(10)", "GPer(0,1)", "GPer(2,3)", "L(33/0,33/10,33/500)",
                           "L(50/3,50/500)"}) {
    const auto parsed = parse_scheme(name);
    REQUIRE(parsed.has_value());
    CHECK(scheme_name(*parsed) == name);
  }
  CHECK(scheme_name(*parse_scheme("T")) == "L(33/0,33/10,33/500)");
  CHECK(scheme_name(*parse_scheme("H")) == "L(50/3,50/500)");
  CHECK(!parse_scheme("bogus").has_value());
}

TEST_CASE("zero perturbations clone the inoculant") {
  Rng rng(1);
  const Permutation p = iota_perm(8);
  CHECK(perturb(p, 0, rng) == p);
  for (const Permutation& q : init_population(p, MassMutation{0}, 5, rng)) CHECK(q == p);
}

TEST_CASE("perturbation radius bounds the transposition distance") {
  Rng rng(2);
  const Permutation p = iota_perm(10);
  for (int pr : {1, 2, 5}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Permutation q = perturb(p, pr, rng);
      CHECK(transposition_distance(p, q) <= pr);
      std::set<TrainId> ids(q.order.begin(), q.order.end());
      CHECK(ids.size() == 10);
    }
  }
}

TEST_CASE("gradual perturbation ramps the radius across the population") {
  Rng rng(3);
  const Permutation p = iota_perm(12);
  const auto pop = init_population(p, GradualPerturbation{0, 1}, 6, rng);
  REQUIRE(pop.size() == 6);
  CHECK(pop[0] == p);  // radius 0
  for (int k = 0; k < 6; ++k) CHECK(transposition_distance(p, pop[k]) <= k);
}

TEST_CASE("layer sizes are percent-rounded with the remainder in the last layer") {
  Rng rng(4);
  const Permutation p = iota_perm(6);
  // 33/33/33 of 9: 3/3/3, first three are clones (radius 0)
  const auto pop = init_population(p, three_layer_preset(), 9, rng);
  REQUIRE(pop.size() == 9);
  CHECK(pop[0] == p);
  CHECK(pop[1] == p);
  CHECK(pop[2] == p);
  CHECK(transposition_distance(p, pop[3]) >= 1);
}

TEST_CASE("radii are capped at ten times the train count") {
  Rng rng(5);
  const Permutation p = iota_perm(4);
  // pr 500 on 4 trains runs only 40 swaps; verify it still permutes validly
  const auto pop = init_population(p, MassMutation{500}, 20, rng);
  for (const Permutation& q : pop) {
    std::set<TrainId> ids(q.order.begin(), q.order.end());
    CHECK(ids.size() == 4);
  }
}

TEST_CASE("random initialization covers the permutation space") {
  TrainSet ts;
  for (int i = 0; i < 3; ++i) {
    Train c;
    c.id = i + 1;
    ts.trains.push_back(c);
  }
  Rng rng(6);
  std::set<std::vector<TrainId>> seen;
  for (const Permutation& p : init_random(600, ts, rng)) {
    CHECK(is_valid_permutation(p, ts));
    seen.insert(p.order);
  }
  CHECK(seen.size() == 6);  // all of 3! orders reached
}

TEST_CASE("inoculant serialization round trips") {
  Inoculant ino;
  ino.permutation = iota_perm(5);
  ino.instance_hash = 0xdeadbeefcafef00dull;
  ino.config_hash = 0x1234abcd5678ull;
  ino.generations = 42;
  ino.achieved_fitness = 98765;
  ino.fully_feasible = true;
  const Inoculant back = load_inoculant(save_inoculant(ino));
  CHECK(back.permutation == ino.permutation);
  CHECK(back.instance_hash == ino.instance_hash);
  CHECK(back.config_hash == ino.config_hash);
  CHECK(back.generations == ino.generations);
  CHECK(back.achieved_fitness == ino.achieved_fitness);
  CHECK(back.fully_feasible == ino.fully_feasible);
}

TEST_CASE("config hash separates configurations") {
  EAConfig a, b;
  b.generations = a.generations + 1;
  CHECK(ea_config_hash(a) == ea_config_hash(a));
  CHECK(ea_config_hash(a) != ea_config_hash(b));
  EAConfig c;
  c.temperature.annealed = true;
  CHECK(ea_config_hash(a) != ea_config_hash(c));
}

TEST_CASE("pre-solving targets the unperturbed problem and caches the result") {
  GeneratorParams gp;
  gp.n_trains = 5;
  gp.delta = 500;
  gp.seed = 31;
  Problem p = generate(gp).problem;
  p.perturbation->delay = 0;

  EAConfig ea;
  ea.generations = 15;
  ea.seed = 8;
  const auto cache = std::filesystem::temp_directory_path() / "rail_inoc_test.inoc";
  std::filesystem::remove(cache);

  const Inoculant first = compute_inoculant(p, ea, SchedulerConfig{}, cache);
  CHECK(first.instance_hash == instance_hash(p));
  CHECK(is_valid_permutation(first.permutation, p.trains));
  REQUIRE(std::filesystem::exists(cache));

  // cache hit must reproduce the stored permutation untouched
  const auto stamp = std::filesystem::last_write_time(cache);
  const Inoculant second = compute_inoculant(p, ea, SchedulerConfig{}, cache);
  CHECK(second.permutation == first.permutation);
  CHECK(std::filesystem::last_write_time(cache) == stamp);

  // a different EA budget invalidates the cache
  ea.generations = 16;
  const Inoculant third = compute_inoculant(p, ea, SchedulerConfig{}, cache);
  CHECK(third.config_hash != first.config_hash);

  // the inoculant solves delta = 0 well: no unscheduled trains expected here
  CHECK(first.fully_feasible);
  std::filesystem::remove(cache);
}

TEST_CASE("inoculated population usually starts ahead of a random one") {
  GeneratorParams gp;
  gp.n_trains = 9;
  gp.delta = 400;
  gp.violation_rate = 0.2;
  gp.seed = 77;
  const Problem p = generate(gp).problem;
  Problem unper = p;
  unper.perturbation->delay = 0;

  EAConfig ea;
  ea.generations = 30;
  ea.seed = 5;
  const Inoculant ino = compute_inoculant(unper, ea, SchedulerConfig{});

  auto best_of = [&](const std::vector<Permutation>& pop) {
    Fitness best = std::numeric_limits<Fitness>::max();
    for (const Permutation& perm : pop)
      best = std::min(best, schedule(p, perm, SchedulerConfig{}).fitness);
    return best;
  };
  int wins = 0;
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    Rng rng(100 + trial);
    const auto seeded = init_population(ino.permutation, MassMutation{3}, 10, rng);
    const auto random = init_random(10, p.trains, rng);
    if (best_of(seeded) <= best_of(random)) ++wins;
  }
  CHECK(wins >= 4);
}
