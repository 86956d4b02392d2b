#ifndef RAIL_IO_HPP
#define RAIL_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rail/model.hpp"
#include "rail/scheduler.hpp"

namespace rail {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Canonical line-oriented instance document. save_problem emits the canonical
// form; load_problem accepts exactly that grammar, so load(save(x)) == x and
// save(load(doc)) is byte-identical to a canonical doc.
std::string save_problem(const Problem& problem);
Problem load_problem(const std::string& document, std::vector<std::string>* warnings = nullptr);

Problem load_problem_file(const std::filesystem::path& path,
                          std::vector<std::string>* warnings = nullptr);
void save_problem_file(const Problem& problem, const std::filesystem::path& path);

// Schedule section: same grammar as the timetable plus the unscheduled list.
std::string save_schedule(const ScheduleResult& result, const Problem& problem);
// Loads assignments back into a fragment (same shape as ScheduleResult).
struct LoadedSchedule {
  ScheduleFragment fragment;
  std::vector<TrainId> unscheduled;
  Fitness fitness = 0;
};
LoadedSchedule load_schedule(const std::string& document, const Problem& problem);

// FNV-1a hash of the canonical serialization; stable across runs and builds.
std::uint64_t fnv1a64(const std::string& data);
std::uint64_t instance_hash(const Problem& problem);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace rail

#endif
