#ifndef RAIL_TESTS_FIXTURES_HPP
#define RAIL_TESTS_FIXTURES_HPP

#include "rail/model.hpp"

namespace rail::testing {

// Single-track line 0 - 1 - 2, one in-node track everywhere, headway 60,
// gamma 60, travel 300 per leg, generous dwell window.
inline Network line3_network() {
  Network net;
  net.node_count = 3;
  net.node_tracks = {1, 1, 1};
  net.edges = {{0, 1, 1, 60}, {1, 2, 1, 60}};
  net.routes = {{RouteTriplet{0, 0, 0}}, {RouteTriplet{0, 0, 0}}, {RouteTriplet{0, 0, 0}}};
  net.gates.resize(3);
  return net;
}

inline Train line3_train(TrainId id, bool forward) {
  Train c;
  c.id = id;
  c.itinerary = forward ? std::vector<NodeId>{0, 1, 2} : std::vector<NodeId>{2, 1, 0};
  c.stops = {{0, 10000}, {0, 10000}, {0, 10000}};
  c.min_travel = {300, 300};
  return c;
}

inline std::vector<TimetableEntry> line3_timetable_row(Time start) {
  return {{start, start, {0, 0, 0}},
          {start + 300, start + 300, {0, 0, 0}},
          {start + 600, start + 600, {0, 0, 0}}};
}

// Two trains in the same direction, 120 s apart. Conflict-free as published.
inline Problem two_followers() {
  Problem p;
  p.network = line3_network();
  p.trains.trains = {line3_train(1, true), line3_train(2, true)};
  p.timetable.entries = {line3_timetable_row(0), line3_timetable_row(120)};
  p.spacing.default_gamma = 60;
  return p;
}

// Head-on meeting on a single-track line; the published timetable already
// conflicts, so any decode has to shift one of the trains.
inline Problem head_on() {
  Problem p;
  p.network = line3_network();
  p.trains.trains = {line3_train(1, true), line3_train(3, false)};
  p.timetable.entries = {line3_timetable_row(0), line3_timetable_row(0)};
  p.spacing.default_gamma = 60;
  return p;
}

}  // namespace rail::testing

#endif
