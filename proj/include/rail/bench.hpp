#ifndef RAIL_BENCH_HPP
#define RAIL_BENCH_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rail/ea.hpp"
#include "rail/inoculation.hpp"
#include "rail/stats.hpp"

namespace rail {

// One algorithmic variant: an EA configuration plus an initialization scheme
// (nullopt = random initialization).
struct VariantSpec {
  std::string name;
  EAConfig ea;
  std::optional<InitScheme> init;
};

struct ExperimentPlan {
  std::vector<std::filesystem::path> instances;
  std::vector<VariantSpec> variants;
  int runs_per_variant = 11;
  std::uint64_t base_seed = 1;
  SchedulerConfig scheduler;
  EAConfig inoculant_config;  // pre-solve settings for the empty perturbation
};

std::string serialize_ea_config(const EAConfig& config);
EAConfig parse_ea_config(const std::string& text);

std::string serialize_plan(const ExperimentPlan& plan);
ExperimentPlan parse_plan(const std::string& text);

struct RunPlanResult {
  std::filesystem::path manifest_path;
  int completed = 0;
  int failed = 0;
};

// Executes every (instance, variant, run) cell: loads the instance, computes
// or reuses the cached inoculant when the variant needs one, evolves, and
// writes <cell>.trace.csv, <cell>.sched.txt and <cell>.svg plus a manifest
// tying outputs to seeds and config hashes. Per-cell failures are logged in
// the manifest and do not abort the plan.
RunPlanResult run_plan(const ExperimentPlan& plan, const std::filesystem::path& out_dir);

// generation,best_fitness,mean_fitness,elapsed_s,evals. All columns except
// elapsed_s (measured wall clock) are deterministic for a fixed seed.
std::string trace_csv(const RunTrace& trace);
std::vector<GenerationRecord> parse_trace_csv(const std::string& text);

// Byte comparison of two result directories with the non-deterministic
// elapsed_s column canonicalized; returns mismatching file names.
std::vector<std::string> compare_result_dirs(const std::filesystem::path& a,
                                             const std::filesystem::path& b);

struct VariantSummary {
  std::string variant;
  std::vector<double> final_fitness;  // one per run
  double mean_final = 0.0;
  double median_final = 0.0;
  std::vector<double> mean_curve;     // mean best fitness per generation
};

enum class Verdict { ADominates, BDominates, Indistinguishable };

struct PairVerdict {
  std::string variant_a;
  std::string variant_b;
  double statistic = 0.0;
  double p_value = 1.0;
  Verdict verdict = Verdict::Indistinguishable;  // at 99% confidence
};

struct InstanceReport {
  std::string instance;
  std::vector<VariantSummary> variants;
  std::vector<PairVerdict> pairs;
};

struct ComparisonReport {
  std::vector<InstanceReport> instances;
  std::vector<std::string> problems;  // missing/corrupt traces, excluded
};

// Recomputes all statistics from the raw traces in a run_plan output
// directory. Throws if the directory has no manifest.
ComparisonReport summarize(const std::filesystem::path& results_dir);

std::string report_text(const ComparisonReport& report);

}  // namespace rail

#endif
