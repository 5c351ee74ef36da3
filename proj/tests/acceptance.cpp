// Acceptance suite: one pass/fail line per shipped criterion. Exit status is
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "oracle.hpp"
#include "presched/engine.hpp"
#include "presched/metrics.hpp"
#include "presched/rng.hpp"
#include "presched/workloads.hpp"

using namespace presched;

namespace {

struct Outcome {
    int id;
    std::string name;
    bool passed;
    std::string details;
};

std::vector<Outcome> outcomes;

void report(int id, const std::string& name, bool passed, const std::string& details) {
    outcomes.push_back({id, name, passed, details});
    std::cout << (passed ? "[PASS] " : "[FAIL] ") << id << ' ' << name << ": " << details
              << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string fmt(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << v;
    return out.str();
}

// ---------------------------------------------------------------------------
// 1. Validity: >= 200 randomized cells at desk scale, zero violations
// ---------------------------------------------------------------------------

void criterion1_validity() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<PreemptionPolicy> policies = {
        PreemptionPolicy::fully_preemptive(), PreemptionPolicy::non_preemptive(),
        PreemptionPolicy::last_k(2), PreemptionPolicy::last_k(5)};

    int cells = 0;
    int violations = 0;
    std::string first_failure;
    for (int i = 0; i < 200; ++i) {
        std::mt19937_64 knobs(derive_seed(4242, i));
        WorkloadSpec spec = WorkloadSpec::default_synthetic();
        auto& s = std::get<SyntheticSpec>(spec.shape);
        s.graph_count = uniform_int(knobs, 3, 12);
        s.node_count = uniform_int(knobs, 2, 8);
        s.levels = {2, 3};
        s.fork_width = {2, 4};
        s.chain_length = {3, 10};
        s.arrivals = (i % 2 == 0)
                         ? ArrivalProcess::poisson(0.01 + 0.05 * uniform01(knobs))
                         : ArrivalProcess::fixed_interval(5.0 + 25.0 * uniform01(knobs));

        const Workload w = generate_workload(spec, 100 + i);
        const std::string scheduler = scheduler_names()[i % scheduler_names().size()];
        const PreemptionPolicy policy = policies[(i / 5) % policies.size()];

        const SimulationResult result = run_simulation(
            w.graphs, w.network, policy, make_scheduler(scheduler), i, /*validate=*/false);
        const ValidationReport report = validate_schedule(result.schedule, w.graphs, w.network);
        ++cells;
        if (!report.ok()) {
            violations += static_cast<int>(report.violations.size());
            if (first_failure.empty()) {
                first_failure = " first failure: cell " + std::to_string(i) + " (" + scheduler +
                                ", " + policy.label() + "): " + report.summary(2);
            }
        }
    }
    const double elapsed = seconds_since(t0);
    const bool passed = violations == 0 && elapsed < 120.0;
    report(1, "validity suite", passed,
           std::to_string(cells) + " cells, " + std::to_string(violations) + " violations, " +
               fmt(elapsed) + "s (limit 120s)" + first_failure);
}

// ---------------------------------------------------------------------------
// 2. Policy lattice: LastK(0) == NP, LastK(>= graph count) == P, exactly
// ---------------------------------------------------------------------------

void criterion2_lattice() {
    int cells = 0;
    int mismatches = 0;
    for (int i = 0; i < 50; ++i) {
        std::mt19937_64 knobs(derive_seed(777, i));
        WorkloadSpec spec = WorkloadSpec::default_synthetic();
        auto& s = std::get<SyntheticSpec>(spec.shape);
        s.graph_count = uniform_int(knobs, 2, 8);
        s.node_count = uniform_int(knobs, 1, 5);
        s.levels = {2, 3};
        s.arrivals = ArrivalProcess::poisson(0.02 + 0.08 * uniform01(knobs));
        const Workload w = generate_workload(spec, 500 + i);
        const std::string scheduler = scheduler_names()[i % scheduler_names().size()];
        const SchedulerFn fn = make_scheduler(scheduler);

        const Schedule np =
            run_simulation(w.graphs, w.network, PreemptionPolicy::non_preemptive(), fn, i)
                .schedule;
        const Schedule k0 =
            run_simulation(w.graphs, w.network, PreemptionPolicy::last_k(0), fn, i).schedule;
        const Schedule p =
            run_simulation(w.graphs, w.network, PreemptionPolicy::fully_preemptive(), fn, i)
                .schedule;
        const Schedule kbig =
            run_simulation(w.graphs, w.network,
                           PreemptionPolicy::last_k(s.graph_count + uniform_int(knobs, 0, 3)),
                           fn, i)
                .schedule;
        ++cells;
        if (!(np == k0) || !(p == kbig)) ++mismatches;
    }
    report(2, "policy lattice", mismatches == 0,
           std::to_string(cells) + " cells, " + std::to_string(mismatches) + " mismatches");
}

// ---------------------------------------------------------------------------
// 3 + 6. Adversarial suite shared by the makespan-gap and utilization trends
// ---------------------------------------------------------------------------

struct AdversarialRun {
    std::map<std::string, std::vector<MetricVector>> by_policy;  // label -> per-seed metrics
    std::vector<double> total_work;                              // per seed
    std::vector<std::vector<double>> node_speeds;                // per seed
    double elapsed = 0.0;
    int seeds = 0;
};

AdversarialRun run_adversarial_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    AdversarialRun out;
    WorkloadSpec spec = WorkloadSpec::default_adversarial();
    auto& a = std::get<AdversarialSpec>(spec.shape);
    a.graph_count = 20;
    a.successor_count = 16;
    a.root_cost = 100.0;
    a.ccr = 0.2;
    a.node_count = 2;
    a.arrivals = ArrivalProcess::fixed_interval(30.0);

    const std::vector<PreemptionPolicy> policies = {
        PreemptionPolicy::fully_preemptive(), PreemptionPolicy::non_preemptive(),
        PreemptionPolicy::last_k(5), PreemptionPolicy::last_k(10), PreemptionPolicy::last_k(20)};
    const SchedulerFn fn = make_scheduler("heft");

    out.seeds = 30;
    for (int seed = 0; seed < out.seeds; ++seed) {
        const Workload w = generate_workload(spec, 9000 + seed);
        double work = 0.0;
        for (const TaskGraph& g : w.graphs) {
            for (const Task& t : g.tasks) work += t.cost;
        }
        out.total_work.push_back(work);
        std::vector<double> speeds;
        for (int v = 0; v < w.network.node_count(); ++v) speeds.push_back(w.network.speed(v));
        out.node_speeds.push_back(speeds);
        for (const PreemptionPolicy& policy : policies) {
            const SimulationResult result =
                run_simulation(w.graphs, w.network, policy, fn, seed);
            out.by_policy[policy.label()].push_back(compute_metrics(
                result.schedule, w.graphs, w.network, result.scheduler_durations));
        }
    }
    out.elapsed = seconds_since(t0);
    return out;
}

void criterion3_adversarial_gap(const AdversarialRun& adv) {
    auto ratio_med = [&](const std::string& label) {
        std::vector<double> ratios;
        for (int s = 0; s < adv.seeds; ++s) {
            ratios.push_back(adv.by_policy.at(label)[s].total_makespan /
                             adv.by_policy.at("P")[s].total_makespan);
        }
        return median(std::move(ratios));
    };
    const double np = ratio_med("NP");
    const double k5 = ratio_med("5P");
    const double k10 = ratio_med("10P");
    const double k20 = ratio_med("20P");
    const bool passed = np >= 1.3 && k5 <= np && k10 <= np && k20 <= np &&
                        adv.elapsed < 300.0;
    report(3, "adversarial makespan gap", passed,
           "median NP/P=" + fmt(np) + " (floor 1.3), 5P/P=" + fmt(k5) + ", 10P/P=" + fmt(k10) +
               ", 20P/P=" + fmt(k20) + ", " + fmt(adv.elapsed) + "s (limit 300s)");
}

void criterion6_utilization(const AdversarialRun& adv) {
    auto util_med = [&](const std::string& label) {
        std::vector<double> values;
        for (const MetricVector& m : adv.by_policy.at(label)) {
            values.push_back(m.mean_utilization);
        }
        return median(std::move(values));
    };
    const double up = util_med("P");
    const double unp = util_med("NP");

    bool bounds_ok = true;
    bool conservation_ok = true;
    for (const auto& [label, runs] : adv.by_policy) {
        (void)label;
        for (int s = 0; s < adv.seeds; ++s) {
            const MetricVector& m = runs[s];
            for (double u : m.node_utilization) {
                if (u < 0.0 || u > 1.0 + 1e-9) bounds_ok = false;
            }
            double lhs = 0.0;
            for (std::size_t v = 0; v < m.node_utilization.size(); ++v) {
                lhs += m.node_utilization[v] * adv.node_speeds[s][v] * m.total_makespan;
            }
            if (std::abs(lhs - adv.total_work[s]) > 1e-6 * adv.total_work[s]) {
                conservation_ok = false;
            }
        }
    }
    const bool passed = up >= unp && bounds_ok && conservation_ok;
    report(6, "utilization trend", passed,
           "median mean-util P=" + fmt(up) + " >= NP=" + fmt(unp) +
               (bounds_ok ? ", bounds ok" : ", BOUNDS BROKEN") +
               (conservation_ok ? ", work conservation ok" : ", CONSERVATION BROKEN"));
}

// ---------------------------------------------------------------------------
// 4. Runtime ordering NP <= 2P <= P for HEFT on a 50-graph workload
// ---------------------------------------------------------------------------

void criterion4_runtime_order() {
    WorkloadSpec spec = WorkloadSpec::default_synthetic();
    auto& s = std::get<SyntheticSpec>(spec.shape);
    s.graph_count = 50;
    s.node_count = 4;
    s.levels = {2, 3};
    s.arrivals = ArrivalProcess::poisson(0.05);

    const SchedulerFn fn = make_scheduler("heft");
    std::vector<double> np_times, k2_times, p_times;
    for (int seed = 0; seed < 30; ++seed) {
        const Workload w = generate_workload(spec, 3000 + seed);
        np_times.push_back(scheduler_runtime(
            run_simulation(w.graphs, w.network, PreemptionPolicy::non_preemptive(), fn, seed)
                .scheduler_durations));
        k2_times.push_back(scheduler_runtime(
            run_simulation(w.graphs, w.network, PreemptionPolicy::last_k(2), fn, seed)
                .scheduler_durations));
        p_times.push_back(scheduler_runtime(
            run_simulation(w.graphs, w.network, PreemptionPolicy::fully_preemptive(), fn, seed)
                .scheduler_durations));
    }
    const double np = median(np_times);
    const double k2 = median(k2_times);
    const double p = median(p_times);
    report(4, "scheduler runtime ordering", np <= k2 && k2 <= p,
           "median seconds NP=" + fmt(np * 1e3) + "ms <= 2P=" + fmt(k2 * 1e3) +
               "ms <= P=" + fmt(p * 1e3) + "ms");
}

// ---------------------------------------------------------------------------
// 5. Fairness: NP flowtime <= P flowtime for HEFT and CPOP
// ---------------------------------------------------------------------------

struct FairnessRun {
    std::map<std::string, std::vector<MetricVector>> np;  // scheduler -> per-seed
    std::map<std::string, std::vector<MetricVector>> p;
};

FairnessRun run_fairness_suite() {
    FairnessRun out;
    WorkloadSpec spec = WorkloadSpec::default_synthetic();
    auto& s = std::get<SyntheticSpec>(spec.shape);
    s.graph_count = 20;
    s.node_count = 3;
    s.levels = {2, 3};
    s.arrivals = ArrivalProcess::poisson(0.04);

    for (const std::string scheduler : {"heft", "cpop"}) {
        const SchedulerFn fn = make_scheduler(scheduler);
        for (int seed = 0; seed < 30; ++seed) {
            const Workload w = generate_workload(spec, 6000 + seed);
            const SimulationResult np_result =
                run_simulation(w.graphs, w.network, PreemptionPolicy::non_preemptive(), fn, seed);
            const SimulationResult p_result = run_simulation(
                w.graphs, w.network, PreemptionPolicy::fully_preemptive(), fn, seed);
            out.np[scheduler].push_back(compute_metrics(np_result.schedule, w.graphs, w.network,
                                                        np_result.scheduler_durations));
            out.p[scheduler].push_back(compute_metrics(p_result.schedule, w.graphs, w.network,
                                                       p_result.scheduler_durations));
        }
    }
    return out;
}

void criterion5_fairness(const FairnessRun& fair) {
    bool passed = true;
    std::string details;
    for (const std::string scheduler : {"heft", "cpop"}) {
        std::vector<double> np_flow, p_flow;
        for (const MetricVector& m : fair.np.at(scheduler)) np_flow.push_back(m.mean_flowtime);
        for (const MetricVector& m : fair.p.at(scheduler)) p_flow.push_back(m.mean_flowtime);
        const double np = median(np_flow);
        const double p = median(p_flow);
        passed = passed && np <= p;
        if (!details.empty()) details += "; ";
        details += scheduler + ": median NP=" + fmt(np) + " <= P=" + fmt(p);
    }
    report(5, "fairness (flowtime) trend", passed, details);
}

// ---------------------------------------------------------------------------
// 7. Oracle equivalence on micro-instances and corrupted schedules
// ---------------------------------------------------------------------------

std::vector<TaskGraph> micro_instance(std::mt19937_64& rng, int* node_count) {
    const int total_tasks = uniform_int(rng, 1, 4);
    const int graph_count = total_tasks > 1 ? uniform_int(rng, 1, 2) : 1;
    *node_count = uniform_int(rng, 1, 2);
    std::vector<TaskGraph> graphs;
    int made = 0;
    for (int g = 0; g < graph_count; ++g) {
        const int remaining = total_tasks - made;
        const int n = g + 1 == graph_count ? remaining
                                           : uniform_int(rng, 1, remaining - (graph_count - g - 1));
        std::vector<double> costs;
        for (int t = 0; t < n; ++t) costs.push_back(static_cast<double>(uniform_int(rng, 1, 3)));
        std::vector<std::tuple<int, int, double>> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (uniform01(rng) < 0.5) {
                    edges.emplace_back(i, j, static_cast<double>(uniform_int(rng, 1, 2)));
                }
            }
        }
        graphs.push_back(make_graph(g, costs, edges, g == 0 ? 0.0 : 1.0));
        made += n;
    }
    return graphs;
}

void criterion7_oracle() {
    std::mt19937_64 rng(31337);

    // (a) heuristics never beat the enumerated optimum
    int instances = 0;
    int beat_optimal = 0;
    for (int i = 0; i < 40; ++i) {
        int node_count = 1;
        const std::vector<TaskGraph> graphs = micro_instance(rng, &node_count);
        const Network net = Network::homogeneous(node_count, node_count > 1 ? 1.0 : 2.0, 1.0);
        const double optimal = oracle::optimal_makespan(graphs, net);
        ++instances;
        for (const std::string& scheduler : scheduler_names()) {
            for (const PreemptionPolicy& policy :
                 {PreemptionPolicy::fully_preemptive(), PreemptionPolicy::non_preemptive(),
                  PreemptionPolicy::last_k(2)}) {
                const SimulationResult result = run_simulation(
                    graphs, net, policy, make_scheduler(scheduler), i);
                if (total_makespan(result.schedule) < optimal - 1e-9) ++beat_optimal;
            }
        }
    }

    // (b) validator verdicts agree with the independent checker on valid and
    // deliberately corrupted schedules
    int checked = 0;
    int disagreements = 0;
    while (checked < 1000) {
        int node_count = 1;
        const std::vector<TaskGraph> graphs = micro_instance(rng, &node_count);
        const Network net = Network::homogeneous(node_count, 1.0, 2.0);
        const SimulationResult base = run_simulation(
            graphs, net, PreemptionPolicy::fully_preemptive(), make_scheduler("random"),
            checked);
        for (int variant = 0; variant < 5 && checked < 1000; ++variant, ++checked) {
            Schedule s = base.schedule;
            if (variant > 0 && !s.assignments.empty()) {
                auto it = s.assignments.begin();
                std::advance(it, static_cast<long>(rng() % s.assignments.size()));
                Assignment& a = it->second;
                switch (variant) {
                    case 1: {  // shift an interval
                        const double delta =
                            (uniform01(rng) < 0.5 ? -1.0 : 1.0) * (0.05 + 2.0 * uniform01(rng));
                        a.start += delta;
                        a.finish += delta;
                        break;
                    }
                    case 2:  // hop to another node without retiming
                        a.node = (a.node + 1) % net.node_count();
                        break;
                    case 3:  // truncate the execution
                        a.finish = a.start + 0.5 * (a.finish - a.start);
                        break;
                    case 4:  // drop the assignment entirely
                        s.assignments.erase(it);
                        break;
                }
            }
            const ValidationReport report = validate_schedule(s, graphs, net);
            std::set<int> reported;
            for (const Violation& v : report.violations) reported.insert(v.constraint);
            const std::set<int> expected = oracle::violated_constraints(s, graphs, net);
            if (reported != expected) ++disagreements;
        }
    }

    const bool passed = beat_optimal == 0 && disagreements == 0;
    report(7, "oracle equivalence", passed,
           std::to_string(instances) + " micro-instances with no heuristic below optimal (" +
               std::to_string(beat_optimal) + " breaches), " + std::to_string(checked) +
               " schedules cross-checked, " + std::to_string(disagreements) + " disagreements");
}

// ---------------------------------------------------------------------------
// 8. Metric formula fixtures + flowtime <= mean makespan on every run
// ---------------------------------------------------------------------------

void criterion8_metric_fixtures(const AdversarialRun& adv, const FairnessRun& fair) {
    bool fixtures = true;
    {
        Schedule s;
        s.assignments[TaskId{0, 0}] = Assignment{TaskId{0, 0}, 0, 0.0, 3.0};
        fixtures = fixtures && total_makespan(s) == 3.0;
        Schedule two;
        two.assignments[TaskId{0, 0}] = Assignment{TaskId{0, 0}, 0, 0.0, 5.0};
        two.assignments[TaskId{1, 0}] = Assignment{TaskId{1, 0}, 0, 5.0, 9.0};
        fixtures = fixtures && total_makespan(two) == 9.0;

        const std::vector<TaskGraph> graphs = {make_graph(0, {4.0}, {}, 0.0),
                                               make_graph(1, {6.0}, {}, 2.0)};
        Schedule mm;
        mm.assignments[TaskId{0, 0}] = Assignment{TaskId{0, 0}, 0, 0.0, 4.0};
        mm.assignments[TaskId{1, 0}] = Assignment{TaskId{1, 0}, 1, 2.0, 8.0};
        fixtures = fixtures && std::abs(mean_makespan(mm, graphs) - 5.0) < 1e-12;

        const std::vector<TaskGraph> flow_graphs = {make_graph(0, {2.0, 3.0}, {}, 0.0)};
        Schedule flow;
        flow.assignments[TaskId{0, 0}] = Assignment{TaskId{0, 0}, 0, 1.0, 3.0};
        flow.assignments[TaskId{0, 1}] = Assignment{TaskId{0, 1}, 0, 3.0, 6.0};
        fixtures = fixtures && std::abs(mean_flowtime(flow, flow_graphs) - 5.0) < 1e-12;

        const Network net = Network::homogeneous(1, 1.0, 1.0);
        const std::vector<TaskGraph> util_graphs = {make_graph(0, {2.0}, {}, 0.0)};
        Schedule util_s;
        util_s.assignments[TaskId{0, 0}] = Assignment{TaskId{0, 0}, 0, 0.0, 2.0};
        Schedule util_gap = util_s;
        util_gap.assignments[TaskId{0, 0}] = Assignment{TaskId{0, 0}, 0, 2.0, 4.0};
        fixtures = fixtures && utilization(util_s, util_graphs, net)[0] == 1.0;
        fixtures = fixtures &&
                   std::abs(utilization(util_gap, util_graphs, net)[0] - 0.5) < 1e-12;

        fixtures = fixtures && scheduler_runtime({}) == 0.0 &&
                   std::abs(scheduler_runtime({0.1, 0.2}) - 0.3) < 1e-12;

        const std::vector<double> norm = normalize({4.0, 8.0});
        fixtures = fixtures && norm[0] == 1.0 && norm[1] == 2.0;
    }

    int relation_breaches = 0;
    auto check_relation = [&relation_breaches](const MetricVector& m) {
        if (m.mean_flowtime > m.mean_makespan + 1e-9) ++relation_breaches;
    };
    for (const auto& [label, runs] : adv.by_policy) {
        (void)label;
        for (const MetricVector& m : runs) check_relation(m);
    }
    for (const auto& [label, runs] : fair.np) {
        (void)label;
        for (const MetricVector& m : runs) check_relation(m);
    }
    for (const auto& [label, runs] : fair.p) {
        (void)label;
        for (const MetricVector& m : runs) check_relation(m);
    }

    report(8, "metric formula fixtures", fixtures && relation_breaches == 0,
           std::string(fixtures ? "fixtures exact" : "FIXTURES BROKEN") + ", flowtime<=makespan " +
               (relation_breaches == 0 ? "on every run" :
                                         (std::to_string(relation_breaches) + " breaches")));
}

}  // namespace

int main() {
    std::cout << "presched acceptance suite\n";
    const auto t0 = std::chrono::steady_clock::now();

    criterion1_validity();
    criterion2_lattice();
    const AdversarialRun adv = run_adversarial_suite();
    criterion3_adversarial_gap(adv);
    criterion4_runtime_order();
    const FairnessRun fair = run_fairness_suite();
    criterion5_fairness(fair);
    criterion6_utilization(adv);
    criterion7_oracle();
    criterion8_metric_fixtures(adv, fair);

    int failed = 0;
    for (const Outcome& o : outcomes) {
        if (!o.passed) ++failed;
    }
    std::cout << "ACCEPTANCE: " << (outcomes.size() - failed) << "/" << outcomes.size()
              << " criteria passed in " << fmt(seconds_since(t0)) << "s\n";
    return failed == 0 ? 0 : 1;
}
