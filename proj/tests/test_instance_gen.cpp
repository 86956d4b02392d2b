#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "rail/instance_gen.hpp"
#include "rail/io.hpp"

using namespace rail;

TEST_CASE("generation is deterministic per seed") {
  GeneratorParams gp;
  gp.n_trains = 7;
  gp.connection_rate = 0.3;
  gp.violation_rate = 0.2;
  gp.delta = 300;
  gp.seed = 5;
  const std::string a = save_problem(generate(gp).problem);
  const std::string b = save_problem(generate(gp).problem);
  CHECK(a == b);
  gp.seed = 6;
  CHECK(save_problem(generate(gp).problem) != a);
}

TEST_CASE("day_start shifts the whole timetable uniformly") {
  GeneratorParams gp;
  gp.n_trains = 5;
  gp.seed = 9;
  const Problem morning = generate(gp).problem;
  gp.day_start = 0;
  const Problem zero = generate(gp).problem;
  for (std::size_t c = 0; c < morning.timetable.entries.size(); ++c)
    for (std::size_t q = 0; q < morning.timetable.entries[c].size(); ++q) {
      CHECK(morning.timetable.entries[c][q].arrival -
                zero.timetable.entries[c][q].arrival == 7 * 3600);
      CHECK(morning.timetable.entries[c][q].departure -
                zero.timetable.entries[c][q].departure == 7 * 3600);
    }
}

TEST_CASE("generated instances validate") {
  GeneratorParams gp;
  gp.n_trains = 8;
  gp.n_branches = 2;
  gp.opposite_fraction = 0.4;
  gp.connection_rate = 0.2;
  gp.delta = 600;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    gp.seed = seed;
    const GeneratedInstance g = generate(gp);
    CHECK_NOTHROW(validate_problem(g.problem));
    CHECK(g.metadata.seed == seed);
    REQUIRE(g.problem.perturbation.has_value());
    CHECK(g.problem.perturbation->delay == 600);
  }
}

TEST_CASE("zero violation rate means a consistent timetable") {
  GeneratorParams gp;
  gp.n_trains = 8;
  gp.violation_rate = 0.0;
  gp.seed = 9;
  std::vector<std::string> warnings;
  validate_problem(generate(gp).problem, &warnings);
  CHECK(warnings.empty());
}

TEST_CASE("violation injection records its sites and produces warnings") {
  GeneratorParams gp;
  gp.n_trains = 10;
  gp.violation_rate = 0.5;
  gp.traffic_density = 0.8;
  bool any = false;
  for (std::uint64_t seed = 1; seed <= 5 && !any; ++seed) {
    gp.seed = seed;
    const GeneratedInstance g = generate(gp);
    std::vector<std::string> warnings;
    validate_problem(g.problem, &warnings);
    if (!g.metadata.injected.empty()) {
      any = true;
      CHECK(!warnings.empty());
    }
  }
  CHECK(any);
}

TEST_CASE("metadata round trips") {
  InstanceMetadata meta;
  meta.seed = 123;
  meta.injected = {{1, 2, 3}, {4, 5, 0}};
  const InstanceMetadata back = load_metadata(save_metadata(meta));
  CHECK(back.seed == 123);
  REQUIRE(back.injected.size() == 2);
  CHECK(back.injected[1].earlier == 4);
  CHECK(back.injected[1].later == 5);
  CHECK(back.injected[1].node == 0);
}

TEST_CASE("instance pairs differ only in the perturbation delay") {
  GeneratorParams gp;
  gp.n_trains = 5;
  gp.delta = 0;
  gp.seed = 3;
  const Problem base = generate(gp).problem;
  const auto [easy, hard] = make_instance_pair(base, 120, 1200);
  REQUIRE(easy.perturbation.has_value());
  REQUIRE(hard.perturbation.has_value());
  CHECK(easy.perturbation->delay == 120);
  CHECK(hard.perturbation->delay == 1200);
  CHECK(easy.perturbation->train == hard.perturbation->train);
  Problem e = easy, h = hard;
  e.perturbation.reset();
  h.perturbation.reset();
  CHECK(save_problem(e) == save_problem(h));
}

TEST_CASE("larger delays never make the optimum better") {
  GeneratorParams gp;
  gp.n_trains = 5;
  gp.seed = 13;
  gp.delta = 0;
  const Problem base = generate(gp).problem;
  const SchedulerConfig cfg;
  Fitness prev = 0;
  for (Time delta : {0, 300, 900, 2400}) {
    auto [p, _] = make_instance_pair(base, delta, delta);
    const PerturbedProblem bounds = apply_perturbation(p, *p.perturbation);
    const Fitness best = best_over_all_permutations(p, bounds, cfg).best_fitness;
    CHECK(best >= prev);
    prev = best;
  }
}

TEST_CASE("timetable order sorts by first departure") {
  GeneratorParams gp;
  gp.n_trains = 6;
  gp.seed = 17;
  const Problem p = generate(gp).problem;
  const Permutation order = timetable_order(p);
  REQUIRE(is_valid_permutation(order, p.trains));
  Time prev = std::numeric_limits<Time>::min();
  for (TrainId id : order.order) {
    const int idx = p.trains.index_of(id);
    const Time d0 = p.timetable.entries[idx][0].departure;
    CHECK(d0 >= prev);
    prev = d0;
  }
}

TEST_CASE("classification is coherent with the exhaustive oracle") {
  GeneratorParams gp;
  gp.n_trains = 5;
  gp.delta = 500;
  gp.violation_rate = 0.4;
  gp.traffic_density = 0.9;
  const SchedulerConfig cfg;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    gp.seed = seed;
    const Problem p = generate(gp).problem;
    const InstanceLabel label = classify(p, 200, cfg);
    REQUIRE(label.difficulty != Difficulty::Unknown);  // 5! = 120 <= 200
    const PerturbedProblem bounds = apply_perturbation(p, *p.perturbation);
    const Fitness oracle = best_over_all_permutations(p, bounds, cfg).best_fitness;
    CHECK(label.oracle_optimum == oracle);
    CHECK(label.identity_fitness >= oracle);
    if (label.difficulty == Difficulty::Easy) CHECK(label.identity_fitness == oracle);
    if (label.difficulty == Difficulty::Hard) CHECK(label.identity_fitness > oracle);
  }
}

TEST_CASE("tiny oracle budget yields Unknown") {
  GeneratorParams gp;
  gp.n_trains = 6;
  gp.seed = 2;
  const InstanceLabel label = classify(generate(gp).problem, 10, SchedulerConfig{});
  CHECK(label.difficulty == Difficulty::Unknown);
}

TEST_CASE("impossible parameters raise a diagnostic") {
  GeneratorParams gp;
  gp.n_nodes = 1;  // no corridor to run on
  CHECK_THROWS_AS(generate(gp), GenerationError);
}
