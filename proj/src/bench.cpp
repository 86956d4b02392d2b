#include "rail/bench.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "rail/io.hpp"
#include "rail/svg.hpp"

namespace rail {

namespace {

std::string sanitize(const std::string& name) {
  std::string out;
  for (char ch : name)
    out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+') ? ch : '_';
  return out;
}

std::vector<NodeId> longest_itinerary(const Problem& problem) {
  const Train* best = &problem.trains.trains.front();
  for (const Train& c : problem.trains.trains)
    if (c.itinerary.size() > best->itinerary.size()) best = &c;
  return best->itinerary;
}

}  // namespace

std::string serialize_ea_config(const EAConfig& c) {
  std::ostringstream os;
  os << "mu=" << c.mu << " off=" << c.offspring_per_parent
     << " repl=" << (c.replacement == ReplacementKind::Plus ? "plus" : "ept")
     << " S=" << c.ept_opponents << " R=" << c.swap_radius
     << " anneal=" << (c.temperature.annealed ? 1 : 0) << " T=" << c.temperature.constant_t
     << " n0=" << c.temperature.n0 << " T0=" << c.temperature.t0
     << " Tinf=" << c.temperature.t_inf << " gdecay=" << c.temperature.gamma_decay
     << " binom=" << (c.temperature.binomial ? 1 : 0) << " gens=" << c.generations
     << " budget=" << c.wall_clock_budget_s << " threads=" << c.threads;
  return os.str();
}

EAConfig parse_ea_config(const std::string& text) {
  EAConfig c;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("ea config token without '=': " + tok);
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "mu") c.mu = std::stoi(val);
    else if (key == "off") c.offspring_per_parent = std::stoi(val);
    else if (key == "repl") c.replacement = val == "ept" ? ReplacementKind::Ept : ReplacementKind::Plus;
    else if (key == "S") c.ept_opponents = std::stoi(val);
    else if (key == "R") c.swap_radius = std::stoi(val);
    else if (key == "anneal") c.temperature.annealed = val != "0";
    else if (key == "T") c.temperature.constant_t = std::stod(val);
    else if (key == "n0") c.temperature.n0 = std::stoi(val);
    else if (key == "T0") c.temperature.t0 = std::stod(val);
    else if (key == "Tinf") c.temperature.t_inf = std::stod(val);
    else if (key == "gdecay") c.temperature.gamma_decay = std::stod(val);
    else if (key == "binom") c.temperature.binomial = val != "0";
    else if (key == "gens") c.generations = std::stoi(val);
    else if (key == "budget") c.wall_clock_budget_s = std::stod(val);
    else if (key == "threads") c.threads = std::stoi(val);
    else throw ParseError("unknown ea config key: " + key);
  }
  return c;
}

std::string serialize_plan(const ExperimentPlan& plan) {
  std::ostringstream os;
  os << "railplan 1\n";
  os << "runs " << plan.runs_per_variant << "\n";
  os << "seed " << plan.base_seed << "\n";
  os << "kick_limit " << plan.scheduler.kick_limit << "\n";
  os << "inoculant_config " << serialize_ea_config(plan.inoculant_config) << "\n";
  for (const auto& path : plan.instances) os << "instance " << path.string() << "\n";
  for (const VariantSpec& v : plan.variants)
    os << "variant " << v.name << " | " << (v.init ? scheme_name(*v.init) : "random") << " | "
       << serialize_ea_config(v.ea) << "\n";
  return os.str();
}

ExperimentPlan parse_plan(const std::string& text) {
  ExperimentPlan plan;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "railplan 1")
    throw ParseError("expected 'railplan 1' header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "runs") ls >> plan.runs_per_variant;
    else if (key == "seed") ls >> plan.base_seed;
    else if (key == "kick_limit") ls >> plan.scheduler.kick_limit;
    else if (key == "inoculant_config") {
      std::string rest;
      std::getline(ls, rest);
      plan.inoculant_config = parse_ea_config(rest);
    } else if (key == "instance") {
      std::string rest;
      ls >> std::ws;
      std::getline(ls, rest);
      plan.instances.emplace_back(rest);
    } else if (key == "variant") {
      std::string rest;
      ls >> std::ws;
      std::getline(ls, rest);
      const auto bar1 = rest.find(" | ");
      const auto bar2 = rest.find(" | ", bar1 + 3);
      if (bar1 == std::string::npos || bar2 == std::string::npos)
        throw ParseError("malformed variant line: " + rest);
      VariantSpec v;
      v.name = rest.substr(0, bar1);
      const std::string scheme = rest.substr(bar1 + 3, bar2 - bar1 - 3);
      if (scheme != "random") {
        auto parsed = parse_scheme(scheme);
        if (!parsed) throw ParseError("bad init scheme: " + scheme);
        v.init = *parsed;
      }
      v.ea = parse_ea_config(rest.substr(bar2 + 3));
      plan.variants.push_back(std::move(v));
    } else if (key == "inoculant" || key == "cell" || key == "error") {
      // runtime records appended by run_plan; irrelevant for replay
    } else {
      throw ParseError("unknown plan key: " + key);
    }
  }
  if (plan.variants.empty() || plan.instances.empty() || plan.runs_per_variant < 1)
    throw ParseError("plan needs at least one instance, one variant and one run");
  return plan;
}

std::string trace_csv(const RunTrace& trace) {
  std::ostringstream os;
  os << "generation,best_fitness,mean_fitness,elapsed_s,evals\n";
  os.setf(std::ios::fixed);
  for (const GenerationRecord& r : trace.records)
    os << r.generation << "," << r.best_fitness << "," << r.mean_fitness << ","
       << std::setprecision(3) << r.elapsed_s << "," << r.evaluations << "\n";
  return os.str();
}

std::vector<GenerationRecord> parse_trace_csv(const std::string& text) {
  std::vector<GenerationRecord> out;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("generation,", 0) != 0)
    throw ParseError("bad trace csv header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    GenerationRecord r;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    if (!(ls >> r.generation >> r.best_fitness >> r.mean_fitness >> r.elapsed_s >>
          r.evaluations))
      throw ParseError("bad trace csv row: " + line);
    out.push_back(r);
  }
  return out;
}

RunPlanResult run_plan(const ExperimentPlan& plan, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ostringstream manifest;
  manifest << serialize_plan(plan);
  RunPlanResult result;

  for (std::size_t ii = 0; ii < plan.instances.size(); ++ii) {
    const auto& inst_path = plan.instances[ii];
    Problem problem;
    try {
      problem = load_problem_file(inst_path);
    } catch (const std::exception& ex) {
      manifest << "error instance " << inst_path.string() << " : " << ex.what() << "\n";
      result.failed += plan.runs_per_variant * static_cast<int>(plan.variants.size());
      continue;
    }
    const PerturbedProblem bounds = problem.perturbation
                                        ? apply_perturbation(problem, *problem.perturbation)
                                        : unperturbed_bounds(problem);
    const std::uint64_t ihash = instance_hash(problem);

    // Pre-solve once per instance if any variant is inoculated.
    std::optional<Inoculant> inoculant;
    const bool needs_inoculant =
        std::any_of(plan.variants.begin(), plan.variants.end(),
                    [](const VariantSpec& v) { return v.init.has_value(); });
    if (needs_inoculant) {
      Problem unperturbed = problem;
      unperturbed.perturbation = Perturbation{problem.trains.trains.front().id,
                                              problem.trains.trains.front().itinerary.front(), 0};
      const auto cache = inst_path.string() + ".inoc";
      inoculant = compute_inoculant(unperturbed, plan.inoculant_config, plan.scheduler, cache);
      manifest << "inoculant " << inst_path.stem().string() << " fitness "
               << inoculant->achieved_fitness << " feasible " << inoculant->fully_feasible
               << "\n";
    }

    for (std::size_t vi = 0; vi < plan.variants.size(); ++vi) {
      const VariantSpec& variant = plan.variants[vi];
      for (int run = 0; run < plan.runs_per_variant; ++run) {
        const std::uint64_t seed = mix_seed(plan.base_seed, ii, vi, static_cast<std::uint64_t>(run));
        EAConfig ea = variant.ea;
        ea.seed = seed;
        const std::string cell = inst_path.stem().string() + "__" + sanitize(variant.name) +
                                 "__run" + std::to_string(run);
        try {
          Rng init_rng(mix_seed(seed, 0x9091, 0, 0));
          std::vector<Permutation> initial =
              variant.init ? init_population(inoculant->permutation, *variant.init, ea.mu, init_rng)
                           : init_random(ea.mu, problem.trains, init_rng);
          const RunTrace trace = evolve(problem, bounds, initial, ea, plan.scheduler);

          write_file(out_dir / (cell + ".trace.csv"), trace_csv(trace));
          write_file(out_dir / (cell + ".sched.txt"),
                     save_schedule(trace.best_result, problem));
          write_file(out_dir / (cell + ".svg"),
                     emit_space_time(trace.best_result.fragment, problem,
                                     longest_itinerary(problem), SvgOptions{}));
          manifest << "cell " << inst_path.stem().string() << " " << variant.name << " " << run
                   << " seed " << seed << " instance_hash " << std::hex << ihash
                   << " config_hash " << ea_config_hash(ea) << std::dec << " files " << cell
                   << ".trace.csv " << cell << ".sched.txt " << cell << ".svg\n";
          ++result.completed;
        } catch (const std::exception& ex) {
          manifest << "error cell " << cell << " : " << ex.what() << "\n";
          ++result.failed;
        }
      }
    }
  }

  result.manifest_path = out_dir / "manifest.txt";
  write_file(result.manifest_path, manifest.str());
  return result;
}

namespace {

// Strips the elapsed_s column, the only non-deterministic output field.
std::string canonical_trace(const std::string& text) {
  std::ostringstream os;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cols;
    std::string col;
    std::istringstream ls(line);
    while (std::getline(ls, col, ',')) cols.push_back(col);
    if (cols.size() == 5) cols.erase(cols.begin() + 3);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
  }
  return os.str();
}

}  // namespace

std::vector<std::string> compare_result_dirs(const std::filesystem::path& a,
                                             const std::filesystem::path& b) {
  std::vector<std::string> mismatches;
  std::set<std::string> names;
  for (const auto& dir : {a, b})
    for (const auto& entry : std::filesystem::directory_iterator(dir))
      if (entry.is_regular_file()) names.insert(entry.path().filename().string());
  for (const std::string& name : names) {
    const auto pa = a / name;
    const auto pb = b / name;
    if (!std::filesystem::exists(pa) || !std::filesystem::exists(pb)) {
      mismatches.push_back(name + " (missing)");
      continue;
    }
    std::string ca = read_file(pa);
    std::string cb = read_file(pb);
    if (name.size() > 10 && name.substr(name.size() - 10) == ".trace.csv") {
      ca = canonical_trace(ca);
      cb = canonical_trace(cb);
    }
    if (name == "manifest.txt") continue;  // carries absolute instance paths only
    if (ca != cb) mismatches.push_back(name);
  }
  return mismatches;
}

ComparisonReport summarize(const std::filesystem::path& results_dir) {
  const auto manifest_path = results_dir / "manifest.txt";
  if (!std::filesystem::exists(manifest_path))
    throw ParseError("no manifest.txt in " + results_dir.string());

  // instance -> variant -> list of traces
  std::map<std::string, std::map<std::string, std::vector<std::vector<GenerationRecord>>>> cells;
  ComparisonReport report;

  std::istringstream is(read_file(manifest_path));
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key != "cell") continue;
    std::string instance, variant;
    int run;
    ls >> instance >> variant >> run;
    std::string tok;
    while (ls >> tok && tok != "files") {
    }
    std::string trace_file;
    ls >> trace_file;
    try {
      cells[instance][variant].push_back(parse_trace_csv(read_file(results_dir / trace_file)));
    } catch (const std::exception& ex) {
      report.problems.push_back(trace_file + ": " + ex.what());
    }
  }
  if (cells.empty()) throw ParseError("manifest lists no completed cells");

  for (const auto& [instance, variants] : cells) {
    InstanceReport ir;
    ir.instance = instance;
    for (const auto& [variant, traces] : variants) {
      VariantSummary vs;
      vs.variant = variant;
      std::size_t max_len = 0;
      for (const auto& tr : traces) {
        vs.final_fitness.push_back(static_cast<double>(tr.back().best_fitness));
        max_len = std::max(max_len, tr.size());
      }
      vs.mean_final = mean(vs.final_fitness);
      vs.median_final = median(vs.final_fitness);
      vs.mean_curve.resize(max_len, 0.0);
      for (std::size_t g = 0; g < max_len; ++g) {
        double sum = 0.0;
        int count = 0;
        for (const auto& tr : traces) {
          // A trace stopped early (wall-clock budget) contributes its last value.
          const auto& rec = g < tr.size() ? tr[g] : tr.back();
          sum += static_cast<double>(rec.best_fitness);
          ++count;
        }
        vs.mean_curve[g] = sum / count;
      }
      ir.variants.push_back(std::move(vs));
    }
    for (std::size_t x = 0; x < ir.variants.size(); ++x) {
      for (std::size_t y = x + 1; y < ir.variants.size(); ++y) {
        PairVerdict pv;
        pv.variant_a = ir.variants[x].variant;
        pv.variant_b = ir.variants[y].variant;
        const auto rs = wilcoxon_rank_sum(ir.variants[x].final_fitness,
                                          ir.variants[y].final_fitness);
        pv.statistic = rs.statistic;
        pv.p_value = rs.p_value;
        if (rs.p_value < 0.01)
          pv.verdict = ir.variants[x].mean_final < ir.variants[y].mean_final
                           ? Verdict::ADominates
                           : Verdict::BDominates;
        ir.pairs.push_back(pv);
      }
    }
    report.instances.push_back(std::move(ir));
  }
  return report;
}

std::string report_text(const ComparisonReport& report) {
  std::ostringstream os;
  for (const InstanceReport& ir : report.instances) {
    os << "instance " << ir.instance << "\n";
    for (const VariantSummary& vs : ir.variants)
      os << "  variant " << vs.variant << " runs " << vs.final_fitness.size() << " mean_final "
         << vs.mean_final << " median_final " << vs.median_final << "\n";
    for (const PairVerdict& pv : ir.pairs) {
      os << "  pair " << pv.variant_a << " vs " << pv.variant_b << " W " << pv.statistic
         << " p " << pv.p_value << " verdict ";
      switch (pv.verdict) {
        case Verdict::ADominates: os << pv.variant_a << " dominates"; break;
        case Verdict::BDominates: os << pv.variant_b << " dominates"; break;
        case Verdict::Indistinguishable: os << "indistinguishable"; break;
      }
      os << " (99%)\n";
    }
  }
  for (const std::string& p : report.problems) os << "excluded " << p << "\n";
  return os.str();
}

}  // namespace rail
