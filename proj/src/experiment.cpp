#include "presched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace presched {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

double median(std::vector<double> values) {
    if (values.empty()) throw Error("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& root) {
    if (!root.is_object()) throw ParseError("experiment config must be a JSON object");
    ExperimentConfig config;

    if (root.contains("workload") && root.contains("workload_file")) {
        throw ParseError("give either 'workload' or 'workload_file', not both");
    }
    if (root.contains("workload")) {
        config.workload_spec = workload_spec_from_json(root["workload"]);
    } else if (root.contains("workload_spec_file")) {
        config.workload_spec = workload_spec_from_json_file(
            root["workload_spec_file"].get<std::string>());
    } else if (root.contains("workload_file")) {
        config.workload_file = std::filesystem::path(root["workload_file"].get<std::string>());
    } else {
        throw ParseError("experiment config needs 'workload', 'workload_spec_file', or "
                         "'workload_file'");
    }

    if (!root.contains("schedulers") || !root["schedulers"].is_array() ||
        root["schedulers"].empty()) {
        throw ParseError("experiment config needs a nonempty 'schedulers' array");
    }
    for (const json& s : root["schedulers"]) {
        const std::string name = s.get<std::string>();
        make_scheduler(name);  // validates the name
        config.schedulers.push_back(name);
    }

    if (!root.contains("policies") || !root["policies"].is_array() || root["policies"].empty()) {
        throw ParseError("experiment config needs a nonempty 'policies' array");
    }
    const std::vector<int> k_values = root.value("k", std::vector<int>{2, 5, 10, 20});
    for (const json& p : root["policies"]) {
        const std::string label = p.get<std::string>();
        if (label == "KP") {
            for (int k : k_values) config.policies.push_back(PreemptionPolicy::last_k(k));
        } else {
            config.policies.push_back(parse_policy(label));
        }
    }

    if (root.contains("seeds")) {
        if (root["seeds"].is_array()) {
            for (const json& s : root["seeds"]) {
                config.seeds.push_back(s.get<std::uint64_t>());
            }
        } else if (root["seeds"].is_object()) {
            const std::uint64_t start = root["seeds"].value("start", 0ull);
            const std::uint64_t count = root["seeds"].value("count", 1ull);
            for (std::uint64_t i = 0; i < count; ++i) config.seeds.push_back(start + i);
        } else {
            throw ParseError("'seeds' must be an array or {start, count}");
        }
    } else {
        config.seeds = {0};
    }
    if (config.seeds.empty()) throw ParseError("experiment config needs at least one seed");

    config.out_dir = root.value("out_dir", std::string("results"));
    config.workers = root.value("workers", 0);
    config.emit_gantt = root.value("emit_gantt", false);
    config.emit_events = root.value("emit_events", false);
    config.validate = root.value("validate", true);
    return config;
}

ExperimentConfig experiment_config_from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return experiment_config_from_json(root);
}

json gantt_json(const Schedule& schedule, const Network& net) {
    std::vector<const Assignment*> rows;
    rows.reserve(schedule.assignments.size());
    for (const auto& [id, a] : schedule.assignments) {
        (void)id;
        rows.push_back(&a);
    }
    std::sort(rows.begin(), rows.end(), [](const Assignment* x, const Assignment* y) {
        return std::tie(x->node, x->start, x->task) < std::tie(y->node, y->start, y->task);
    });
    json arr = json::array();
    for (const Assignment* a : rows) {
        arr.push_back({{"task", a->task.local_id},
                       {"graph", a->task.graph_index},
                       {"node", net.node(a->node).name},
                       {"start", a->start},
                       {"finish", a->finish}});
    }
    return arr;
}

void emit_gantt(const Schedule& schedule, const Network& net,
                const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << gantt_json(schedule, net).dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

Schedule schedule_from_gantt_json(const json& root, const Network& net) {
    if (!root.is_array()) throw ParseError("gantt trace must be a JSON array");
    Schedule schedule;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const json& entry = root[i];
        const std::string path = "/" + std::to_string(i);
        if (!entry.is_object() || !entry.contains("task") || !entry.contains("graph") ||
            !entry.contains("node") || !entry.contains("start") || !entry.contains("finish")) {
            throw ParseError("gantt entry missing fields at " + path);
        }
        const TaskId id{entry["graph"].get<int>(), entry["task"].get<int>()};
        if (schedule.assignments.count(id)) {
            throw ParseError("duplicate gantt entry for " + to_string(id) + " at " + path);
        }
        schedule.assignments[id] = Assignment{id, net.index_of(entry["node"].get<std::string>()),
                                              entry["start"].get<double>(),
                                              entry["finish"].get<double>()};
    }
    return schedule;
}

Schedule load_gantt(const std::filesystem::path& path, const Network& net) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return schedule_from_gantt_json(root, net);
}

json event_json(const Event& event, const Network& net) {
    json obj;
    obj["t"] = event.t;
    switch (event.kind) {
        case Event::Kind::Arrival:
            obj["event"] = "arrival";
            obj["graph"] = event.graph;
            break;
        case Event::Kind::Revert:
            obj["event"] = "revert";
            obj["task"] = to_string(event.task);
            break;
        case Event::Kind::Place:
            obj["event"] = "place";
            obj["task"] = to_string(event.task);
            obj["node"] = net.node(event.node).name;
            obj["start"] = event.start;
            obj["finish"] = event.finish;
            break;
    }
    return obj;
}

void emit_events_jsonl(const std::vector<Event>& events, const Network& net,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (const Event& e : events) out << event_json(e, net).dump() << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

const std::string& results_csv_header() {
    // scheduler_runtime columns are wall-clock and therefore not reproducible
    // across runs; all other columns are.
    static const std::string header =
        "workload_seed,scheduler,policy,k,total_makespan,mean_makespan,mean_flowtime,"
        "mean_utilization,scheduler_runtime,norm_total_makespan,norm_mean_makespan,"
        "norm_mean_flowtime,norm_mean_utilization,norm_scheduler_runtime";
    return header;
}

std::string metrics_csv_row(std::uint64_t seed, const std::string& scheduler,
                            const PreemptionPolicy& policy, const MetricVector& raw,
                            const MetricVector& normalized) {
    std::ostringstream row;
    row << seed << ',' << scheduler << ','
        << (policy.kind == PreemptionPolicy::Kind::LastK ? "KP" : policy.label()) << ','
        << policy.window << ',' << fmt_double(raw.total_makespan) << ','
        << fmt_double(raw.mean_makespan) << ',' << fmt_double(raw.mean_flowtime) << ','
        << fmt_double(raw.mean_utilization) << ',' << fmt_double(raw.scheduler_runtime) << ','
        << fmt_double(normalized.total_makespan) << ',' << fmt_double(normalized.mean_makespan)
        << ',' << fmt_double(normalized.mean_flowtime) << ','
        << fmt_double(normalized.mean_utilization) << ','
        << fmt_double(normalized.scheduler_runtime);
    return row.str();
}

namespace {

struct Cell {
    std::size_t seed_index = 0;
    std::size_t scheduler_index = 0;
    std::size_t policy_index = 0;
};

struct CellOutcome {
    MetricVector metrics;
    bool failed = false;
    bool io_failed = false;
    std::string error;
};

std::string cell_stem(std::uint64_t seed, const std::string& scheduler,
                      const PreemptionPolicy& policy) {
    return "seed" + std::to_string(seed) + "_" + scheduler + "_" + policy.label();
}

}  // namespace

int run_experiment(const ExperimentConfig& config) {
    try {
        std::filesystem::create_directories(config.out_dir);
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: cannot create output directory: " << e.what() << '\n';
        return 4;
    }

    // Workload per seed, generated once and shared across the seed's cells.
    std::vector<Workload> workloads;
    workloads.reserve(config.seeds.size());
    try {
        for (std::uint64_t seed : config.seeds) {
            if (config.workload_spec) {
                workloads.push_back(generate_workload(*config.workload_spec, seed));
            } else {
                workloads.push_back(load_workflow_json(*config.workload_file));
            }
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }

    std::vector<Cell> cells;
    for (std::size_t si = 0; si < config.seeds.size(); ++si) {
        for (std::size_t hi = 0; hi < config.schedulers.size(); ++hi) {
            for (std::size_t pi = 0; pi < config.policies.size(); ++pi) {
                cells.push_back(Cell{si, hi, pi});
            }
        }
    }
    std::vector<CellOutcome> outcomes(cells.size());

    std::vector<SchedulerFn> schedulers;
    schedulers.reserve(config.schedulers.size());
    for (const std::string& name : config.schedulers) {
        schedulers.push_back(make_scheduler(name));
    }

    const int worker_count =
        config.workers > 0 ? config.workers
                           : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    std::mutex io_mutex;

    auto run_cell = [&](std::size_t index) {
        const Cell& cell = cells[index];
        CellOutcome& outcome = outcomes[index];
        const Workload& workload = workloads[cell.seed_index];
        const std::uint64_t seed = config.seeds[cell.seed_index];
        const PreemptionPolicy& policy = config.policies[cell.policy_index];
        try {
            SimulationResult result =
                run_simulation(workload.graphs, workload.network, policy,
                               schedulers[cell.scheduler_index], seed, config.validate);
            // Measurement can quantize to zero on very fast invocations; keep
            // runtimes positive so normalization stays total.
            for (double& d : result.scheduler_durations) d = std::max(d, 1e-12);
            outcome.metrics = compute_metrics(result.schedule, workload.graphs,
                                              workload.network, result.scheduler_durations);
            const std::string stem =
                cell_stem(seed, config.schedulers[cell.scheduler_index], policy);
            if (config.emit_gantt) {
                std::lock_guard<std::mutex> lock(io_mutex);
                emit_gantt(result.schedule, workload.network,
                           config.out_dir / ("gantt_" + stem + ".json"));
            }
            if (config.emit_events) {
                std::lock_guard<std::mutex> lock(io_mutex);
                emit_events_jsonl(result.events, workload.network,
                                  config.out_dir / ("events_" + stem + ".jsonl"));
            }
        } catch (const IoError& e) {
            outcome.failed = true;
            outcome.io_failed = true;
            outcome.error = e.what();
        } catch (const Error& e) {
            outcome.failed = true;
            outcome.error = e.what();
        }
    };

    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
            run_cell(i);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < worker_count; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (outcomes[i].failed) {
            const Cell& cell = cells[i];
            std::cerr << "error: cell (seed " << config.seeds[cell.seed_index] << ", "
                      << config.schedulers[cell.scheduler_index] << ", "
                      << config.policies[cell.policy_index].label()
                      << ") failed: " << outcomes[i].error << '\n';
            return outcomes[i].io_failed ? 4 : 3;
        }
    }

    // Normalize each metric per workload instance across its cells.
    const std::size_t per_seed = config.schedulers.size() * config.policies.size();
    std::vector<MetricVector> normalized(cells.size());
    for (std::size_t si = 0; si < config.seeds.size(); ++si) {
        const std::size_t base = si * per_seed;
        auto column = [&](auto getter) {
            std::vector<double> values;
            values.reserve(per_seed);
            for (std::size_t k = 0; k < per_seed; ++k) {
                values.push_back(getter(outcomes[base + k].metrics));
            }
            return normalize(values);
        };
        const auto tm = column([](const MetricVector& m) { return m.total_makespan; });
        const auto mm = column([](const MetricVector& m) { return m.mean_makespan; });
        const auto mf = column([](const MetricVector& m) { return m.mean_flowtime; });
        const auto mu = column([](const MetricVector& m) { return m.mean_utilization; });
        const auto sr = column([](const MetricVector& m) { return m.scheduler_runtime; });
        for (std::size_t k = 0; k < per_seed; ++k) {
            normalized[base + k].total_makespan = tm[k];
            normalized[base + k].mean_makespan = mm[k];
            normalized[base + k].mean_flowtime = mf[k];
            normalized[base + k].mean_utilization = mu[k];
            normalized[base + k].scheduler_runtime = sr[k];
        }
    }

    try {
        std::ofstream results(config.out_dir / "results.csv");
        if (!results) throw IoError("cannot write results.csv");
        results << results_csv_header() << '\n';
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const Cell& cell = cells[i];
            results << metrics_csv_row(config.seeds[cell.seed_index],
                                       config.schedulers[cell.scheduler_index],
                                       config.policies[cell.policy_index],
                                       outcomes[i].metrics, normalized[i])
                    << '\n';
        }
        if (!results) throw IoError("failed writing results.csv");

        // Medians across seeds per (scheduler, policy) variant.
        std::ofstream summary(config.out_dir / "summary.csv");
        if (!summary) throw IoError("cannot write summary.csv");
        summary << "scheduler,policy,k,median_total_makespan,median_mean_makespan,"
                   "median_mean_flowtime,median_mean_utilization,median_scheduler_runtime,"
                   "median_norm_total_makespan,median_norm_mean_makespan,"
                   "median_norm_mean_flowtime,median_norm_mean_utilization,"
                   "median_norm_scheduler_runtime\n";
        for (std::size_t hi = 0; hi < config.schedulers.size(); ++hi) {
            for (std::size_t pi = 0; pi < config.policies.size(); ++pi) {
                auto med = [&](auto getter, bool of_normalized) {
                    std::vector<double> values;
                    for (std::size_t si = 0; si < config.seeds.size(); ++si) {
                        const std::size_t i =
                            si * per_seed + hi * config.policies.size() + pi;
                        values.push_back(getter(of_normalized ? normalized[i]
                                                              : outcomes[i].metrics));
                    }
                    return median(std::move(values));
                };
                const PreemptionPolicy& policy = config.policies[pi];
                summary << config.schedulers[hi] << ','
                        << (policy.kind == PreemptionPolicy::Kind::LastK ? "KP"
                                                                          : policy.label())
                        << ',' << policy.window;
                for (bool norm : {false, true}) {
                    summary << ','
                            << fmt_double(med([](const MetricVector& m) { return m.total_makespan; }, norm))
                            << ','
                            << fmt_double(med([](const MetricVector& m) { return m.mean_makespan; }, norm))
                            << ','
                            << fmt_double(med([](const MetricVector& m) { return m.mean_flowtime; }, norm))
                            << ','
                            << fmt_double(med([](const MetricVector& m) { return m.mean_utilization; }, norm))
                            << ','
                            << fmt_double(med([](const MetricVector& m) { return m.scheduler_runtime; }, norm));
                }
                summary << '\n';
            }
        }
        if (!summary) throw IoError("failed writing summary.csv");
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }

    return 0;
}

}  // namespace presched
