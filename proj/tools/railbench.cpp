// railbench: generate instances, pre-solve inoculants, run seeded experiment
// batteries across initialization schemes, and report statistics.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "rail/bench.hpp"
#include "rail/instance_gen.hpp"
#include "rail/io.hpp"
#include "rail/svg.hpp"

namespace fs = std::filesystem;
using namespace rail;

namespace {

// Named algorithmic variants. Layer-based schemes use the tournament
// replacement so random layer individuals survive the first selections.
VariantSpec make_variant(const std::string& name, int generations, int mu, int offspring) {
  VariantSpec v;
  v.name = name;
  v.ea.mu = mu;
  v.ea.offspring_per_parent = offspring;
  v.ea.generations = generations;

  TemperatureSchedule annealed;
  annealed.annealed = true;
  annealed.binomial = false;
  annealed.n0 = 3;
  annealed.t0 = 50;
  annealed.t_inf = 4;
  annealed.gamma_decay = 0.2;

  if (name == "MM") {
    v.init = MassMutation{3};
  } else if (name == "GPer") {
    v.init = GradualPerturbation{0, 1};
  } else if (name == "R") {
    v.ea.temperature = annealed;
    v.init = MassMutation{3};
  } else if (name == "H") {
    v.init = two_layer_preset();
    v.ea.replacement = ReplacementKind::Ept;
  } else if (name == "T") {
    v.init = three_layer_preset();
    v.ea.replacement = ReplacementKind::Ept;
  } else if (name == "H+R") {
    v.ea.temperature = annealed;
    v.init = two_layer_preset();
    v.ea.replacement = ReplacementKind::Ept;
  } else if (name == "T+R") {
    v.ea.temperature = annealed;
    v.init = three_layer_preset();
    v.ea.replacement = ReplacementKind::Ept;
  } else if (name == "random") {
    v.init.reset();
  } else if (auto scheme = parse_scheme(name)) {
    v.init = *scheme;
  } else {
    throw CLI::ValidationError("variant", "unknown variant '" + name + "'");
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rail re-scheduling benchmark harness"};
  app.require_subcommand(1);

  // --- generate ---
  auto* gen_cmd = app.add_subcommand("generate", "emit a synthetic instance + metadata sidecar");
  GeneratorParams gp;
  std::string gen_out = "instance.rail";
  gen_cmd->add_option("--trains", gp.n_trains, "number of trains");
  gen_cmd->add_option("--nodes", gp.n_nodes, "corridor nodes");
  gen_cmd->add_option("--branches", gp.n_branches, "branch nodes");
  gen_cmd->add_option("--min-edge-tracks", gp.min_tracks_per_edge);
  gen_cmd->add_option("--max-edge-tracks", gp.max_tracks_per_edge);
  gen_cmd->add_option("--max-node-tracks", gp.max_node_tracks);
  gen_cmd->add_option("--gate-density", gp.gate_density);
  gen_cmd->add_option("--traffic-density", gp.traffic_density);
  gen_cmd->add_option("--opposite-fraction", gp.opposite_fraction);
  gen_cmd->add_option("--partial-fraction", gp.partial_itinerary_fraction);
  gen_cmd->add_option("--connection-rate", gp.connection_rate);
  gen_cmd->add_option("--violation-rate", gp.violation_rate);
  gen_cmd->add_option("--gamma", gp.gamma, "node spacing seconds");
  gen_cmd->add_option("--edge-headway", gp.edge_headway);
  gen_cmd->add_option("--dwell-slack", gp.dwell_slack);
  gen_cmd->add_option("--delta", gp.delta, "perturbation delay seconds");
  gen_cmd->add_option("--day-start", gp.day_start, "timetable origin seconds");
  gen_cmd->add_option("--seed", gp.seed);
  gen_cmd->add_option("-o,--out", gen_out, "output instance path");

  // --- inoculate ---
  auto* ino_cmd = app.add_subcommand("inoculate", "pre-solve the empty-perturbation problem");
  std::string ino_instance;
  int ino_gens = 100;
  std::uint64_t ino_seed = 1;
  ino_cmd->add_option("instance", ino_instance, "instance file")->required();
  ino_cmd->add_option("--gens", ino_gens, "pre-solve generation budget");
  ino_cmd->add_option("--seed", ino_seed);

  // --- run ---
  auto* run_cmd = app.add_subcommand("run", "execute an experiment plan");
  std::vector<std::string> run_instances;
  std::vector<std::string> run_variants = {"MM", "random"};
  std::string run_out = "results";
  std::string replay_manifest;
  int runs = 11;
  int gens = 100;
  int mu = 10;
  int offspring = 7;
  std::uint64_t run_seed = 1;
  int threads = 1;
  run_cmd->add_option("--instances", run_instances, "instance files")->delimiter(',');
  run_cmd->add_option("--variants", run_variants,
                      "variant names (MM, GPer, R, H, T, H+R, T+R, random, MM(k), ...)")
      ->delimiter(',');
  run_cmd->add_option("--runs", runs, "runs per variant");
  run_cmd->add_option("--gens", gens, "generations per run");
  run_cmd->add_option("--mu", mu);
  run_cmd->add_option("--offspring", offspring, "offspring per parent");
  run_cmd->add_option("--seed", run_seed);
  run_cmd->add_option("--threads", threads, "concurrent fitness evaluations");
  run_cmd->add_option("--replay", replay_manifest, "rerun the plan stored in a manifest");
  run_cmd->add_option("-o,--out", run_out, "results directory");

  // --- report ---
  auto* rep_cmd = app.add_subcommand("report", "summarize a results directory");
  std::string rep_dir = "results";
  rep_cmd->add_option("dir", rep_dir, "results directory");

  // --- plot ---
  auto* plot_cmd = app.add_subcommand("plot", "space/time SVG from a schedule file");
  std::string plot_instance, plot_schedule, plot_out = "diagram.svg";
  std::vector<int> plot_path;
  plot_cmd->add_option("instance", plot_instance)->required();
  plot_cmd->add_option("schedule", plot_schedule)->required();
  plot_cmd->add_option("--path", plot_path, "node path (default: longest itinerary)")
      ->delimiter(',');
  plot_cmd->add_option("-o,--out", plot_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) {
      const GeneratedInstance gen = generate(gp);
      save_problem_file(gen.problem, gen_out);
      write_file(gen_out + ".meta", save_metadata(gen.metadata));
      std::cout << "wrote " << gen_out << " (" << gen.problem.trains.trains.size() << " trains, "
                << gen.problem.network.node_count << " nodes, "
                << gen.metadata.injected.size() << " injected violations)\n";
      return 0;
    }
    if (*ino_cmd) {
      std::vector<std::string> warnings;
      Problem problem = load_problem_file(ino_instance, &warnings);
      if (problem.perturbation) problem.perturbation->delay = 0;
      EAConfig config;
      config.generations = ino_gens;
      config.seed = ino_seed;
      SchedulerConfig sched;
      const auto cache = fs::path(ino_instance + ".inoc");
      const Inoculant ino = compute_inoculant(problem, config, sched, cache);
      std::cout << "inoculant fitness " << ino.achieved_fitness << " feasible "
                << ino.fully_feasible << " cached at " << cache.string() << "\n";
      if (!ino.fully_feasible)
        std::cerr << "warning: no fully feasible permutation found within budget\n";
      return 0;
    }
    if (*run_cmd) {
      ExperimentPlan plan;
      if (!replay_manifest.empty()) {
        plan = parse_plan(read_file(replay_manifest));
      } else {
        if (run_instances.empty()) {
          std::cerr << "run: no instances given\n";
          return 2;
        }
        for (const auto& s : run_instances) plan.instances.emplace_back(s);
        for (const auto& name : run_variants) {
          VariantSpec v = make_variant(name, gens, mu, offspring);
          v.ea.threads = threads;
          plan.variants.push_back(std::move(v));
        }
        plan.runs_per_variant = runs;
        plan.base_seed = run_seed;
        plan.inoculant_config.generations = gens;
        plan.inoculant_config.seed = run_seed;
        plan.inoculant_config.threads = threads;
      }
      const RunPlanResult result = run_plan(plan, run_out);
      std::cout << "completed " << result.completed << " cells, failed " << result.failed
                << ", manifest " << result.manifest_path.string() << "\n";
      return result.failed == 0 ? 0 : 1;
    }
    if (*rep_cmd) {
      const ComparisonReport report = summarize(rep_dir);
      const std::string text = report_text(report);
      write_file(fs::path(rep_dir) / "report.txt", text);
      for (const InstanceReport& ir : report.instances)
        for (const VariantSummary& vs : ir.variants) {
          std::ostringstream os;
          os << "generation,mean_best_fitness\n";
          for (std::size_t g = 0; g < vs.mean_curve.size(); ++g)
            os << g << "," << vs.mean_curve[g] << "\n";
          write_file(fs::path(rep_dir) / (ir.instance + "__" + vs.variant + ".curve.csv"),
                     os.str());
        }
      std::cout << text;
      return report.problems.empty() ? 0 : 1;
    }
    if (*plot_cmd) {
      const Problem problem = load_problem_file(plot_instance);
      const LoadedSchedule sched = load_schedule(read_file(plot_schedule), problem);
      std::vector<NodeId> path(plot_path.begin(), plot_path.end());
      if (path.empty()) {
        const Train* longest = &problem.trains.trains.front();
        for (const Train& c : problem.trains.trains)
          if (c.itinerary.size() > longest->itinerary.size()) longest = &c;
        path = longest->itinerary;
      }
      std::vector<std::string> warnings;
      write_file(plot_out, emit_space_time(sched.fragment, problem, path, SvgOptions{}, &warnings));
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "wrote " << plot_out << "\n";
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
