#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "presched/engine.hpp"
#include "presched/metrics.hpp"
#include "presched/workloads.hpp"

namespace presched {

struct ExperimentConfig {
    // Exactly one workload source: a generator spec (seeded per run) or a
    // pre-generated workflow trace file.
    std::optional<WorkloadSpec> workload_spec;
    std::optional<std::filesystem::path> workload_file;

    std::vector<std::string> schedulers;
    std::vector<PreemptionPolicy> policies;
    std::vector<std::uint64_t> seeds;
    std::filesystem::path out_dir = "results";
    int workers = 0;  // 0 = hardware concurrency
    bool emit_gantt = false;
    bool emit_events = false;
    bool validate = true;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& root);
ExperimentConfig experiment_config_from_file(const std::filesystem::path& path);

// Runs every (seed, scheduler, policy) cell, writes results.csv and
// summary.csv (plus optional per-cell gantt/event files) under out_dir.
// Returns a process exit status: 0 ok, 3 internal-consistency failure,
// 4 I/O failure.
int run_experiment(const ExperimentConfig& config);

// Gantt trace: array of {task, graph, node, start, finish}, sorted by
// (node, start).
nlohmann::json gantt_json(const Schedule& schedule, const Network& net);
void emit_gantt(const Schedule& schedule, const Network& net,
                const std::filesystem::path& path);
Schedule schedule_from_gantt_json(const nlohmann::json& root, const Network& net);
Schedule load_gantt(const std::filesystem::path& path, const Network& net);

// Event log as JSON lines.
nlohmann::json event_json(const Event& event, const Network& net);
void emit_events_jsonl(const std::vector<Event>& events, const Network& net,
                       const std::filesystem::path& path);

const std::string& results_csv_header();
std::string metrics_csv_row(std::uint64_t seed, const std::string& scheduler,
                            const PreemptionPolicy& policy, const MetricVector& raw,
                            const MetricVector& normalized);

}  // namespace presched
