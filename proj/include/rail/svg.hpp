#ifndef RAIL_SVG_HPP
#define RAIL_SVG_HPP

#include <string>
#include <vector>

#include "rail/model.hpp"
#include "rail/scheduler.hpp"

namespace rail {

struct SvgOptions {
  int width = 960;
  int height = 540;
  int margin = 48;
};

// Space/time diagram: time on the horizontal axis, the given node path on the
// vertical axis. Each train whose itinerary is a contiguous sub-path (in
// either direction) becomes a polyline; a dwell at a node is a horizontal
// segment. The perturbed train is highlighted. Output is deterministic and
// valid SVG 1.1. Trains not on the path are skipped with a warning.
std::string emit_space_time(const ScheduleFragment& fragment, const Problem& problem,
                            const std::vector<NodeId>& node_path, const SvgOptions& options,
                            std::vector<std::string>* warnings = nullptr);

}  // namespace rail

#endif
