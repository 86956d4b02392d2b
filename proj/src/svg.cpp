#include "rail/svg.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace rail {

namespace {

const char* kPalette[] = {"#1f6fb2", "#2c9e4b", "#8a5fb0", "#b0813a", "#3aa6a6", "#5c5c8a"};

// Maps each itinerary node to its index on the path, or empty if the
// itinerary is not a contiguous sub-path in either direction.
std::vector<int> path_positions(const std::vector<NodeId>& itinerary,
                                const std::vector<NodeId>& path) {
  for (int dir : {1, -1}) {
    for (std::size_t start = 0; start < path.size(); ++start) {
      std::vector<int> pos;
      std::size_t q = 0;
      long long k = static_cast<long long>(start);
      while (q < itinerary.size() && k >= 0 && k < static_cast<long long>(path.size()) &&
             path[k] == itinerary[q]) {
        pos.push_back(static_cast<int>(k));
        ++q;
        k += dir;
      }
      if (pos.size() == itinerary.size()) return pos;
    }
  }
  return {};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << v;
  return os.str();
}

}  // namespace

std::string emit_space_time(const ScheduleFragment& fragment, const Problem& problem,
                            const std::vector<NodeId>& node_path, const SvgOptions& options,
                            std::vector<std::string>* warnings) {
  Time t_min = std::numeric_limits<Time>::max();
  Time t_max = std::numeric_limits<Time>::min();
  struct Drawn {
    int train_idx;
    std::vector<int> path_pos;
  };
  std::vector<Drawn> drawn;

  for (std::size_t i = 0; i < fragment.placed.size(); ++i) {
    if (fragment.placed[i].empty()) continue;
    const Train& c = problem.trains.trains[i];
    auto pos = path_positions(c.itinerary, node_path);
    if (pos.empty()) {
      if (warnings)
        warnings->push_back("train " + std::to_string(c.id) + " not on path, skipped");
      continue;
    }
    for (const Assignment& as : fragment.placed[i]) {
      t_min = std::min(t_min, as.arrival);
      t_max = std::max(t_max, as.departure);
    }
    drawn.push_back({static_cast<int>(i), std::move(pos)});
  }
  if (t_min > t_max) {
    t_min = 0;
    t_max = 1;
  }
  if (t_max == t_min) t_max = t_min + 1;

  const double plot_w = options.width - 2.0 * options.margin;
  const double plot_h = options.height - 2.0 * options.margin;
  auto x_of = [&](Time t) {
    return options.margin + plot_w * static_cast<double>(t - t_min) /
                                static_cast<double>(t_max - t_min);
  };
  auto y_of = [&](int k) {
    if (node_path.size() == 1) return options.margin + plot_h / 2.0;
    return options.margin + plot_h * static_cast<double>(k) /
                                static_cast<double>(node_path.size() - 1);
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.width
     << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << " "
     << options.height << "\">\n";
  os << "  <rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
     << "\" fill=\"white\"/>\n";

  for (std::size_t k = 0; k < node_path.size(); ++k) {
    const double y = y_of(static_cast<int>(k));
    os << "  <line x1=\"" << options.margin << "\" y1=\"" << fmt(y) << "\" x2=\""
       << options.width - options.margin << "\" y2=\"" << fmt(y)
       << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    os << "  <text x=\"4\" y=\"" << fmt(y + 4) << "\" font-size=\"12\" fill=\"#333333\">n"
       << node_path[k] << "</text>\n";
  }

  const TrainId perturbed =
      problem.perturbation ? problem.perturbation->train : std::numeric_limits<TrainId>::min();
  for (const Drawn& dr : drawn) {
    const Train& c = problem.trains.trains[dr.train_idx];
    const auto& placed = fragment.placed[dr.train_idx];
    std::ostringstream pts;
    for (std::size_t q = 0; q < placed.size(); ++q) {
      const double y = y_of(dr.path_pos[q]);
      if (q) pts << " ";
      pts << fmt(x_of(placed[q].arrival)) << "," << fmt(y) << " "
          << fmt(x_of(placed[q].departure)) << "," << fmt(y);
    }
    const bool highlight = c.id == perturbed;
    const char* color = highlight ? "#d62728" : kPalette[dr.train_idx % 6];
    os << "  <polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"" << (highlight ? 3 : 2) << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace rail
