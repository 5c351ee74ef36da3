#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "presched/experiment.hpp"

namespace {

using namespace presched;

int cmd_generate(const std::string& config_path, std::uint64_t seed, bool seed_given,
                 const std::string& out_path) {
    WorkloadSpec spec = config_path.empty() ? WorkloadSpec::default_synthetic()
                                            : workload_spec_from_json_file(config_path);
    if (seed_given) spec.seed = seed;
    const Workload workload = generate_workload(spec);
    save_workflow_json(workload, out_path);
    std::cout << "wrote " << out_path << " (" << workload.graphs.size() << " graphs, "
              << workload.network.node_count() << " nodes)\n";
    return 0;
}

int cmd_run(const std::string& config_path, const std::vector<std::uint64_t>& seeds,
            const std::string& out_dir, int workers, bool emit_gantt, bool emit_events,
            bool no_validate) {
    ExperimentConfig config = experiment_config_from_file(config_path);
    if (!seeds.empty()) config.seeds = seeds;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (workers > 0) config.workers = workers;
    if (emit_gantt) config.emit_gantt = true;
    if (emit_events) config.emit_events = true;
    if (no_validate) config.validate = false;
    const int status = run_experiment(config);
    if (status == 0) {
        std::cout << "wrote " << (config.out_dir / "results.csv").string() << " and "
                  << (config.out_dir / "summary.csv").string() << '\n';
    }
    return status;
}

int cmd_validate(const std::string& workload_path, const std::string& gantt_path) {
    const Workload workload = load_workflow_json(workload_path);
    const Schedule schedule = load_gantt(gantt_path, workload.network);
    const ValidationReport report =
        validate_schedule(schedule, workload.graphs, workload.network);
    if (report.ok()) {
        std::cout << "valid: all " << schedule.assignments.size()
                  << " assignments satisfy every constraint\n";
        return 0;
    }
    std::cout << report.summary(32) << '\n';
    return 1;
}

int cmd_metrics(const std::string& workload_path, const std::string& gantt_path,
                const std::string& out_path) {
    const Workload workload = load_workflow_json(workload_path);
    const Schedule schedule = load_gantt(gantt_path, workload.network);
    // A gantt trace carries no scheduler wall-clock; runtime reports as 0.
    const MetricVector m =
        compute_metrics(schedule, workload.graphs, workload.network, {});
    std::ostringstream out;
    out << "total_makespan,mean_makespan,mean_flowtime,mean_utilization,scheduler_runtime\n"
        << m.total_makespan << ',' << m.mean_makespan << ',' << m.mean_flowtime << ','
        << m.mean_utilization << ',' << m.scheduler_runtime << '\n';
    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream file(out_path);
        if (!file) throw IoError("cannot write " + out_path);
        file << out.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic task-graph scheduling simulator with schedule preemption"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string workload_path;
    std::string gantt_path;
    std::vector<std::uint64_t> seeds;
    std::uint64_t seed = 0;
    int workers = 0;
    bool emit_gantt = false;
    bool emit_events = false;
    bool no_validate = false;

    auto* generate = app.add_subcommand("generate", "Generate a workload JSON from a spec");
    generate->add_option("--config", config_path, "Workload spec JSON (defaults when omitted)");
    auto* seed_opt = generate->add_option("--seed", seed, "Override the spec's master seed");
    generate->add_option("--out", out_path, "Output workflow JSON path")->required();

    auto* run = app.add_subcommand("run", "Run an experiment sweep");
    run->add_option("--config", config_path, "Experiment config JSON")->required();
    run->add_option("--seed", seeds, "Override the config's seed list");
    run->add_option("--out", out_path, "Output directory")->envname("PRESCHED_OUT");
    run->add_option("--workers", workers, "Concurrent experiment cells");
    run->add_flag("--emit-gantt", emit_gantt, "Write a gantt JSON per cell");
    run->add_flag("--emit-events", emit_events, "Write an event log per cell");
    run->add_flag("--no-validate", no_validate, "Skip final schedule validation");

    auto* validate = app.add_subcommand("validate", "Check a gantt trace against a workload");
    validate->add_option("--workload", workload_path, "Workflow JSON")->required();
    validate->add_option("--gantt", gantt_path, "Gantt trace JSON")->required();

    auto* metrics = app.add_subcommand("metrics", "Recompute metrics from a gantt trace");
    metrics->add_option("--workload", workload_path, "Workflow JSON")->required();
    metrics->add_option("--gantt", gantt_path, "Gantt trace JSON")->required();
    metrics->add_option("--out", out_path, "CSV output path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            return cmd_generate(config_path, seed, seed_opt->count() > 0, out_path);
        }
        if (run->parsed()) {
            return cmd_run(config_path, seeds, out_path, workers, emit_gantt, emit_events,
                           no_validate);
        }
        if (validate->parsed()) return cmd_validate(workload_path, gantt_path);
        if (metrics->parsed()) return cmd_metrics(workload_path, gantt_path, out_path);
    } catch (const presched::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const presched::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const presched::CycleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const presched::InternalError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const presched::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const presched::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
