#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "rail/svg.hpp"

using namespace rail;
using namespace rail::testing;

namespace {
std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t count = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size()))
    ++count;
  return count;
}
}  // namespace

TEST_CASE("diagram structure") {
  const Problem p = two_followers();
  const ScheduleResult r = schedule(p, {{1, 2}}, SchedulerConfig{});
  const std::string svg = emit_space_time(r.fragment, p, {0, 1, 2}, SvgOptions{});
  CHECK(svg.rfind("<?xml version=\"1.0\" encoding=\"UTF-8\"?>", 0) == 0);
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
  CHECK(count_of(svg, "<polyline") == 2);       // one per train
  CHECK(count_of(svg, "<text") == 3);           // one label per node
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("output is deterministic") {
  const Problem p = two_followers();
  const ScheduleResult r = schedule(p, {{2, 1}}, SchedulerConfig{});
  const std::string a = emit_space_time(r.fragment, p, {0, 1, 2}, SvgOptions{});
  const std::string b = emit_space_time(r.fragment, p, {0, 1, 2}, SvgOptions{});
  CHECK(a == b);
}

TEST_CASE("perturbed train is highlighted") {
  Problem p = two_followers();
  p.perturbation = Perturbation{2, 0, 300};
  const ScheduleResult r = schedule(p, {{1, 2}}, SchedulerConfig{});
  const std::string svg = emit_space_time(r.fragment, p, {0, 1, 2}, SvgOptions{});
  CHECK(count_of(svg, "#d62728") == 1);
  CHECK(count_of(svg, "stroke-width=\"3\"") == 1);
}

TEST_CASE("opposite-direction trains map onto the same path") {
  const Problem p = head_on();
  const ScheduleResult r = schedule(p, {{1, 3}}, SchedulerConfig{});
  std::vector<std::string> warnings;
  const std::string svg = emit_space_time(r.fragment, p, {0, 1, 2}, SvgOptions{}, &warnings);
  CHECK(count_of(svg, "<polyline") == 2);
  CHECK(warnings.empty());
}

TEST_CASE("off-path trains are skipped with a warning") {
  const Problem p = two_followers();
  const ScheduleResult r = schedule(p, {{1, 2}}, SchedulerConfig{});
  std::vector<std::string> warnings;
  const std::string svg = emit_space_time(r.fragment, p, {0, 1}, SvgOptions{}, &warnings);
  // itineraries span 0-1-2, the path only 0-1; nothing fits
  CHECK(count_of(svg, "<polyline") == 0);
  CHECK(warnings.size() == 2);
}

TEST_CASE("coordinates respect the canvas") {
  const Problem p = two_followers();
  const ScheduleResult r = schedule(p, {{1, 2}}, SchedulerConfig{});
  SvgOptions opt;
  opt.width = 400;
  opt.height = 300;
  opt.margin = 20;
  const std::string svg = emit_space_time(r.fragment, p, {0, 1, 2}, opt);
  CHECK(svg.find("width=\"400\"") != std::string::npos);
  CHECK(svg.find("viewBox=\"0 0 400 300\"") != std::string::npos);
  // the first train departs at the time origin: leftmost x = margin
  CHECK(svg.find("points=\"20.0,") != std::string::npos);
}
