#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "rail/instance_gen.hpp"
#include "rail/io.hpp"

using namespace rail;
using namespace rail::testing;

namespace {
Problem rich_problem() {
  Problem p = two_followers();
  p.trains.connections.push_back({1, 2, 1, 120});
  p.spacing.overrides[{1, 2, 1}] = 90;
  Gate g;
  g.capacity = 2;
  g.headway = 45;
  g.members = {{0, 0}, {1, 0}};
  p.network.gates[1].push_back(g);
  p.perturbation = Perturbation{1, 0, 300};
  return p;
}
}  // namespace

TEST_CASE("save then load is the identity on the canonical form") {
  const Problem p = rich_problem();
  const std::string doc = save_problem(p);
  const Problem q = load_problem(doc);
  CHECK(save_problem(q) == doc);
}

TEST_CASE("round trip preserves every loaded field") {
  const Problem p = rich_problem();
  const Problem q = load_problem(save_problem(p));
  CHECK(q.network.node_count == 3);
  CHECK(q.network.node_tracks == p.network.node_tracks);
  CHECK(q.network.edges.size() == 2);
  CHECK(q.network.edges[0].headway == 60);
  CHECK(q.network.gates[1].size() == 1);
  CHECK(q.network.gates[1][0].members == p.network.gates[1][0].members);
  CHECK(q.trains.size() == 2);
  CHECK(q.trains.trains[0].itinerary == p.trains.trains[0].itinerary);
  CHECK(q.trains.trains[1].min_travel == p.trains.trains[1].min_travel);
  CHECK(q.trains.connections.size() == 1);
  CHECK(q.timetable.entries.size() == p.timetable.entries.size());
  CHECK(q.timetable.entries[0][0].departure == p.timetable.entries[0][0].departure);
  CHECK(q.timetable.entries[1][2].arrival == p.timetable.entries[1][2].arrival);
  CHECK(q.timetable.entries[1][2].route == p.timetable.entries[1][2].route);
  CHECK(q.spacing.default_gamma == 60);
  CHECK(q.spacing.gamma(1, 2, 1) == 90);
  REQUIRE(q.perturbation.has_value());
  CHECK(q.perturbation->train == 1);
  CHECK(q.perturbation->delay == 300);
}

TEST_CASE("generated instances round trip byte-identically") {
  GeneratorParams gp;
  gp.n_trains = 6;
  gp.connection_rate = 0.3;
  gp.violation_rate = 0.2;
  gp.delta = 400;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    gp.seed = seed;
    const std::string doc = save_problem(generate(gp).problem);
    CHECK(save_problem(load_problem(doc)) == doc);
  }
}

TEST_CASE("parse errors carry a line number") {
  const std::string doc = save_problem(two_followers());
  const auto pos = doc.find("edge ");
  std::string broken = doc;
  broken.replace(pos, 5, "egde ");
  try {
    load_problem(broken);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("missing header is rejected") {
  CHECK_THROWS_AS(load_problem("bogus\n"), ParseError);
  CHECK_THROWS_AS(load_problem(""), ParseError);
}

TEST_CASE("instance hash is stable and discriminating") {
  const Problem p = rich_problem();
  CHECK(instance_hash(p) == instance_hash(p));
  Problem q = p;
  q.timetable.entries[0][0].departure += 1;
  CHECK(instance_hash(q) != instance_hash(p));
}

TEST_CASE("fnv1a64 known values") {
  // reference vectors for the 64-bit FNV-1a parameters
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("schedule round trip") {
  const Problem p = two_followers();
  const ScheduleResult r = schedule(p, {{1, 2}}, SchedulerConfig{});
  const std::string doc = save_schedule(r, p);
  const LoadedSchedule back = load_schedule(doc, p);
  CHECK(back.fitness == r.fitness);
  CHECK(back.unscheduled == r.unscheduled);
  REQUIRE(back.fragment.placed.size() == r.fragment.placed.size());
  for (std::size_t c = 0; c < r.fragment.placed.size(); ++c) {
    REQUIRE(back.fragment.placed[c].size() == r.fragment.placed[c].size());
    for (std::size_t q = 0; q < r.fragment.placed[c].size(); ++q) {
      CHECK(back.fragment.placed[c][q].arrival == r.fragment.placed[c][q].arrival);
      CHECK(back.fragment.placed[c][q].departure == r.fragment.placed[c][q].departure);
      CHECK(back.fragment.placed[c][q].route == r.fragment.placed[c][q].route);
    }
  }
}

TEST_CASE("file round trip") {
  const Problem p = rich_problem();
  const auto path = std::filesystem::temp_directory_path() / "rail_io_test.rail";
  save_problem_file(p, path);
  const Problem q = load_problem_file(path);
  CHECK(save_problem(q) == save_problem(p));
  std::filesystem::remove(path);
}
