#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "rail/model.hpp"

using namespace rail;
using namespace rail::testing;

TEST_CASE("well-formed problems validate") {
  CHECK_NOTHROW(validate_problem(two_followers()));
  CHECK_NOTHROW(validate_problem(head_on()));
}

TEST_CASE("itinerary node out of range is rejected") {
  Problem p = two_followers();
  p.trains.trains[0].itinerary[1] = 99;
  CHECK_THROWS_AS(validate_problem(p), ValidationError);
}

TEST_CASE("itinerary without an edge is rejected") {
  Problem p = two_followers();
  p.trains.trains[1].itinerary = {0, 2, 1};  // no edge 0-2
  CHECK_THROWS_AS(validate_problem(p), ValidationError);
}

TEST_CASE("stop bounds must cover the itinerary") {
  Problem p = two_followers();
  p.trains.trains[0].stops.pop_back();
  CHECK_THROWS_AS(validate_problem(p), ValidationError);
}

TEST_CASE("negative dwell window is rejected") {
  Problem p = two_followers();
  p.trains.trains[0].stops[1] = {100, 50};
  CHECK_THROWS_AS(validate_problem(p), ValidationError);
}

TEST_CASE("timetable must have a row per train") {
  Problem p = two_followers();
  p.timetable.entries.pop_back();
  CHECK_THROWS_AS(validate_problem(p), ValidationError);
}

TEST_CASE("duplicate train ids are rejected") {
  Problem p = two_followers();
  p.trains.trains[1].id = p.trains.trains[0].id;
  CHECK_THROWS_AS(validate_problem(p), ValidationError);
}

TEST_CASE("route track indices must exist") {
  Problem p = two_followers();
  p.network.routes[1] = {RouteTriplet{0, 5, 0}};  // node 1 has one track
  CHECK_THROWS_AS(validate_problem(p), ValidationError);
}

TEST_CASE("connection endpoints must exist") {
  Problem p = two_followers();
  p.trains.connections.push_back({1, 42, 1, 120});
  CHECK_THROWS_AS(validate_problem(p), ValidationError);
}

TEST_CASE("timetable spacing violations are warnings, not errors") {
  Problem p = two_followers();
  // second train now enters node 0 only 30 s after the first leaves (gamma 60)
  p.timetable.entries[1] = line3_timetable_row(30);
  std::vector<std::string> warnings;
  CHECK_NOTHROW(validate_problem(p, &warnings));
  CHECK(!warnings.empty());
}

TEST_CASE("gamma override beats the default") {
  SpacingConstants sc;
  sc.default_gamma = 60;
  sc.overrides[{1, 2, 0}] = 90;
  CHECK(sc.gamma(1, 2, 0) == 90);
  CHECK(sc.gamma(2, 1, 0) == 60);  // ordered pair
  CHECK(sc.gamma(1, 2, 1) == 60);
}

TEST_CASE("edge_between is symmetric") {
  const Network net = line3_network();
  CHECK(net.edge_between(0, 1) == 0);
  CHECK(net.edge_between(1, 0) == 0);
  CHECK(net.edge_between(1, 2) == 1);
  CHECK(net.edge_between(0, 2) == -1);
}

TEST_CASE("perturbation shifts exactly one arrival bound") {
  const Problem p = two_followers();
  const PerturbedProblem base = unperturbed_bounds(p);
  const PerturbedProblem shifted = apply_perturbation(p, {1, 1, 250});
  for (std::size_t c = 0; c < base.arrival_lb.size(); ++c)
    for (std::size_t q = 0; q < base.arrival_lb[c].size(); ++q) {
      const Time expect = (c == 0 && q == 1) ? base.arrival_lb[c][q] + 250 : base.arrival_lb[c][q];
      CHECK(shifted.arrival_lb[c][q] == expect);
    }
}

TEST_CASE("perturbation off the itinerary throws") {
  const Problem p = two_followers();
  CHECK_THROWS_AS(apply_perturbation(p, {1, 7, 100}), ValidationError);
  CHECK_THROWS_AS(apply_perturbation(p, {99, 0, 100}), ValidationError);
}

TEST_CASE("empty perturbation equals unperturbed bounds") {
  const Problem p = two_followers();
  CHECK(apply_perturbation(p, {1, 0, 0}).arrival_lb == unperturbed_bounds(p).arrival_lb);
}
