#include "rail/io.hpp"

#include <fstream>
#include <sstream>

namespace rail {

namespace {

struct LineReader {
  std::istringstream stream;
  std::string line;
  int line_no = 0;

  explicit LineReader(const std::string& doc) : stream(doc) {}

  bool next() {
    while (std::getline(stream, line)) {
      ++line_no;
      if (!line.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line_no) + ": " + msg + " (got: '" + line + "')");
  }
};

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

long long to_int(LineReader& r, const std::string& tok) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) r.fail("malformed integer '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    r.fail("malformed integer '" + tok + "'");
  }
}

}  // namespace

std::string save_problem(const Problem& p) {
  std::ostringstream os;
  os << "railinstance 1\n";
  os << "[network]\n";
  os << "nodes " << p.network.node_count << "\n";
  for (NodeId j = 0; j < p.network.node_count; ++j)
    os << "node " << j << " tracks " << p.network.node_tracks[j] << "\n";
  for (std::size_t e = 0; e < p.network.edges.size(); ++e) {
    const Edge& edge = p.network.edges[e];
    os << "edge " << e << " " << edge.a << " " << edge.b << " tracks " << edge.track_count
       << " headway " << edge.headway << "\n";
  }
  for (NodeId j = 0; j < p.network.node_count; ++j)
    for (const RouteTriplet& r : p.network.routes[j])
      os << "route " << j << " " << r.u_inc << " " << r.u << " " << r.u_out << "\n";
  for (NodeId j = 0; j < p.network.node_count; ++j)
    for (const Gate& g : p.network.gates[j]) {
      os << "gate " << j << " " << g.capacity << " " << g.headway << " " << g.members.size();
      for (auto [edge, track] : g.members) os << " " << edge << ":" << track;
      os << "\n";
    }
  os << "[trains]\n";
  os << "trains " << p.trains.size() << "\n";
  for (const Train& c : p.trains.trains) {
    os << "train " << c.id << " nodes " << c.itinerary.size() << "\n";
    os << "itin " << c.id;
    for (NodeId j : c.itinerary) os << " " << j;
    os << "\n";
    for (std::size_t q = 0; q < c.stops.size(); ++q)
      os << "stopw " << c.id << " " << q << " " << c.stops[q].min_dwell << " "
         << c.stops[q].max_dwell << "\n";
    for (std::size_t q = 0; q < c.min_travel.size(); ++q)
      os << "travel " << c.id << " " << q << " " << c.min_travel[q] << "\n";
  }
  os << "[connections]\n";
  for (const Connection& cn : p.trains.connections)
    os << "conn " << cn.feeder << " " << cn.outgoing << " " << cn.node << " " << cn.min_transfer
       << "\n";
  os << "[timetable]\n";
  for (std::size_t i = 0; i < p.trains.trains.size(); ++i) {
    const Train& c = p.trains.trains[i];
    for (std::size_t q = 0; q < p.timetable.entries[i].size(); ++q) {
      const TimetableEntry& e = p.timetable.entries[i][q];
      os << "tt " << c.id << " " << q << " " << e.arrival << " " << e.departure << " "
         << e.route.u_inc << " " << e.route.u << " " << e.route.u_out << "\n";
    }
  }
  os << "[spacing]\n";
  os << "gamma_default " << p.spacing.default_gamma << "\n";
  for (const auto& [key, value] : p.spacing.overrides)
    os << "gamma " << std::get<0>(key) << " " << std::get<1>(key) << " " << std::get<2>(key)
       << " " << value << "\n";
  os << "[perturbation]\n";
  if (p.perturbation)
    os << "perturb " << p.perturbation->train << " " << p.perturbation->node << " "
       << p.perturbation->delay << "\n";
  return os.str();
}

Problem load_problem(const std::string& document, std::vector<std::string>* warnings) {
  Problem p;
  LineReader r(document);
  if (!r.next() || r.line != "railinstance 1") r.fail("expected 'railinstance 1' header");

  std::string section;
  while (r.next()) {
    if (r.line.front() == '[') {
      section = r.line;
      continue;
    }
    auto t = tokens(r.line);
    if (t.empty()) continue;
    const std::string& key = t[0];

    if (section == "[network]") {
      if (key == "nodes" && t.size() == 2) {
        p.network.node_count = static_cast<int>(to_int(r, t[1]));
        p.network.node_tracks.assign(p.network.node_count, 1);
        p.network.routes.resize(p.network.node_count);
        p.network.gates.resize(p.network.node_count);
      } else if (key == "node" && t.size() == 4 && t[2] == "tracks") {
        const int j = static_cast<int>(to_int(r, t[1]));
        if (j < 0 || j >= p.network.node_count) r.fail("node id out of range");
        p.network.node_tracks[j] = static_cast<int>(to_int(r, t[3]));
      } else if (key == "edge" && t.size() == 8 && t[4] == "tracks" && t[6] == "headway") {
        const int e = static_cast<int>(to_int(r, t[1]));
        if (e != static_cast<int>(p.network.edges.size())) r.fail("edge ids must be sequential");
        Edge edge;
        edge.a = static_cast<NodeId>(to_int(r, t[2]));
        edge.b = static_cast<NodeId>(to_int(r, t[3]));
        edge.track_count = static_cast<int>(to_int(r, t[5]));
        edge.headway = to_int(r, t[7]);
        p.network.edges.push_back(edge);
      } else if (key == "route" && t.size() == 5) {
        const int j = static_cast<int>(to_int(r, t[1]));
        if (j < 0 || j >= p.network.node_count) r.fail("route node out of range");
        p.network.routes[j].push_back({static_cast<int>(to_int(r, t[2])),
                                       static_cast<int>(to_int(r, t[3])),
                                       static_cast<int>(to_int(r, t[4]))});
      } else if (key == "gate" && t.size() >= 5) {
        const int j = static_cast<int>(to_int(r, t[1]));
        if (j < 0 || j >= p.network.node_count) r.fail("gate node out of range");
        Gate g;
        g.capacity = static_cast<int>(to_int(r, t[2]));
        g.headway = to_int(r, t[3]);
        const int m = static_cast<int>(to_int(r, t[4]));
        if (static_cast<int>(t.size()) != 5 + m) r.fail("gate member count mismatch");
        for (int k = 0; k < m; ++k) {
          const std::string& mem = t[5 + k];
          const auto colon = mem.find(':');
          if (colon == std::string::npos) r.fail("gate member must be edge:track");
          g.members.emplace_back(static_cast<int>(to_int(r, mem.substr(0, colon))),
                                 static_cast<int>(to_int(r, mem.substr(colon + 1))));
        }
        p.network.gates[j].push_back(std::move(g));
      } else {
        r.fail("unknown network record");
      }
    } else if (section == "[trains]") {
      if (key == "trains" && t.size() == 2) {
        // count line, informational
      } else if (key == "train" && t.size() == 4 && t[2] == "nodes") {
        Train c;
        c.id = static_cast<TrainId>(to_int(r, t[1]));
        const auto k = static_cast<std::size_t>(to_int(r, t[3]));
        c.itinerary.reserve(k);
        p.trains.trains.push_back(std::move(c));
      } else if (key == "itin" && t.size() >= 2) {
        const int idx = p.trains.index_of(static_cast<TrainId>(to_int(r, t[1])));
        if (idx < 0) r.fail("itin before train");
        Train& c = p.trains.trains[idx];
        for (std::size_t k = 2; k < t.size(); ++k)
          c.itinerary.push_back(static_cast<NodeId>(to_int(r, t[k])));
        c.stops.assign(c.itinerary.size(), {});
        c.min_travel.assign(c.itinerary.empty() ? 0 : c.itinerary.size() - 1, 1);
      } else if (key == "stopw" && t.size() == 5) {
        const int idx = p.trains.index_of(static_cast<TrainId>(to_int(r, t[1])));
        if (idx < 0) r.fail("stopw before train");
        const auto q = static_cast<std::size_t>(to_int(r, t[2]));
        if (q >= p.trains.trains[idx].stops.size()) r.fail("stopw position out of range");
        p.trains.trains[idx].stops[q] = {to_int(r, t[3]), to_int(r, t[4])};
      } else if (key == "travel" && t.size() == 4) {
        const int idx = p.trains.index_of(static_cast<TrainId>(to_int(r, t[1])));
        if (idx < 0) r.fail("travel before train");
        const auto q = static_cast<std::size_t>(to_int(r, t[2]));
        if (q >= p.trains.trains[idx].min_travel.size()) r.fail("travel leg out of range");
        p.trains.trains[idx].min_travel[q] = to_int(r, t[3]);
      } else {
        r.fail("unknown trains record");
      }
    } else if (section == "[connections]") {
      if (key == "conn" && t.size() == 5) {
        p.trains.connections.push_back({static_cast<TrainId>(to_int(r, t[1])),
                                        static_cast<TrainId>(to_int(r, t[2])),
                                        static_cast<NodeId>(to_int(r, t[3])), to_int(r, t[4])});
      } else {
        r.fail("unknown connections record");
      }
    } else if (section == "[timetable]") {
      if (key == "tt" && t.size() == 8) {
        const int idx = p.trains.index_of(static_cast<TrainId>(to_int(r, t[1])));
        if (idx < 0) r.fail("timetable entry for unknown train");
        if (p.timetable.entries.size() < p.trains.trains.size())
          p.timetable.entries.resize(p.trains.trains.size());
        auto& row = p.timetable.entries[idx];
        const auto q = static_cast<std::size_t>(to_int(r, t[2]));
        if (q != row.size()) r.fail("timetable positions must be sequential");
        TimetableEntry e;
        e.arrival = to_int(r, t[3]);
        e.departure = to_int(r, t[4]);
        e.route = {static_cast<int>(to_int(r, t[5])), static_cast<int>(to_int(r, t[6])),
                   static_cast<int>(to_int(r, t[7]))};
        row.push_back(e);
      } else {
        r.fail("unknown timetable record");
      }
    } else if (section == "[spacing]") {
      if (key == "gamma_default" && t.size() == 2) {
        p.spacing.default_gamma = to_int(r, t[1]);
      } else if (key == "gamma" && t.size() == 5) {
        p.spacing.overrides[{static_cast<TrainId>(to_int(r, t[1])),
                             static_cast<TrainId>(to_int(r, t[2])),
                             static_cast<NodeId>(to_int(r, t[3]))}] = to_int(r, t[4]);
      } else {
        r.fail("unknown spacing record");
      }
    } else if (section == "[perturbation]") {
      if (key == "perturb" && t.size() == 4) {
        p.perturbation = Perturbation{static_cast<TrainId>(to_int(r, t[1])),
                                      static_cast<NodeId>(to_int(r, t[2])), to_int(r, t[3])};
      } else {
        r.fail("unknown perturbation record");
      }
    } else {
      r.fail("record outside any section");
    }
  }

  if (p.timetable.entries.size() < p.trains.trains.size())
    p.timetable.entries.resize(p.trains.trains.size());
  validate_problem(p, warnings);
  return p;
}

Problem load_problem_file(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  return load_problem(read_file(path), warnings);
}

void save_problem_file(const Problem& problem, const std::filesystem::path& path) {
  write_file(path, save_problem(problem));
}

std::string save_schedule(const ScheduleResult& result, const Problem& problem) {
  std::ostringstream os;
  os << "railschedule 1\n";
  os << "[assignments]\n";
  for (std::size_t i = 0; i < result.fragment.placed.size(); ++i) {
    const Train& c = problem.trains.trains[i];
    for (std::size_t q = 0; q < result.fragment.placed[i].size(); ++q) {
      const Assignment& as = result.fragment.placed[i][q];
      os << "as " << c.id << " " << q << " " << as.arrival << " " << as.departure << " "
         << as.route.u_inc << " " << as.route.u << " " << as.route.u_out << "\n";
    }
  }
  os << "[unscheduled]\n";
  for (TrainId id : result.unscheduled) os << "un " << id << "\n";
  os << "[meta]\n";
  os << "fitness " << result.fitness << "\n";
  return os.str();
}

LoadedSchedule load_schedule(const std::string& document, const Problem& problem) {
  LoadedSchedule out;
  out.fragment.placed.resize(problem.trains.trains.size());
  LineReader r(document);
  if (!r.next() || r.line != "railschedule 1") r.fail("expected 'railschedule 1' header");
  std::string section;
  while (r.next()) {
    if (r.line.front() == '[') {
      section = r.line;
      continue;
    }
    auto t = tokens(r.line);
    if (section == "[assignments]" && t.size() == 8 && t[0] == "as") {
      const int idx = problem.trains.index_of(static_cast<TrainId>(to_int(r, t[1])));
      if (idx < 0) r.fail("assignment for unknown train");
      const auto q = static_cast<std::size_t>(to_int(r, t[2]));
      if (q != out.fragment.placed[idx].size()) r.fail("assignment positions must be sequential");
      Assignment as;
      as.arrival = to_int(r, t[3]);
      as.departure = to_int(r, t[4]);
      as.route = {static_cast<int>(to_int(r, t[5])), static_cast<int>(to_int(r, t[6])),
                  static_cast<int>(to_int(r, t[7]))};
      out.fragment.placed[idx].push_back(as);
    } else if (section == "[unscheduled]" && t.size() == 2 && t[0] == "un") {
      out.unscheduled.push_back(static_cast<TrainId>(to_int(r, t[1])));
    } else if (section == "[meta]" && t.size() == 2 && t[0] == "fitness") {
      out.fitness = to_int(r, t[1]);
    } else {
      r.fail("unknown schedule record");
    }
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t instance_hash(const Problem& problem) { return fnv1a64(save_problem(problem)); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << content;
}

}  // namespace rail
