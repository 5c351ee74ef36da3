#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "presched/engine.hpp"
#include "presched/metrics.hpp"
#include "presched/rng.hpp"
#include "presched/workloads.hpp"

using namespace presched;

namespace {

Schedule schedule_of(std::initializer_list<Assignment> assignments) {
    Schedule s;
    for (const Assignment& a : assignments) s.assignments[a.task] = a;
    return s;
}

}  // namespace

TEST_CASE("total makespan is the latest finish") {
    CHECK(total_makespan(schedule_of({Assignment{TaskId{0, 0}, 0, 0.0, 3.0}})) == 3.0);
    CHECK(total_makespan(schedule_of({Assignment{TaskId{0, 0}, 0, 0.0, 5.0},
                                      Assignment{TaskId{1, 0}, 0, 5.0, 9.0}})) == 9.0);
    CHECK_THROWS_AS(total_makespan(Schedule{}), Error);
}

TEST_CASE("mean makespan averages per-graph spans since arrival") {
    SUBCASE("single graph") {
        const std::vector<TaskGraph> graphs = {make_graph(0, {7.0}, {}, 0.0)};
        const Schedule s = schedule_of({Assignment{TaskId{0, 0}, 0, 0.0, 7.0}});
        CHECK(mean_makespan(s, graphs) == doctest::Approx(7.0));
        CHECK(mean_makespan(s, graphs) == doctest::Approx(total_makespan(s)));
    }
    SUBCASE("two graphs") {
        const std::vector<TaskGraph> graphs = {make_graph(0, {4.0}, {}, 0.0),
                                               make_graph(1, {6.0}, {}, 2.0)};
        const Schedule s = schedule_of({Assignment{TaskId{0, 0}, 0, 0.0, 4.0},
                                        Assignment{TaskId{1, 0}, 1, 2.0, 8.0}});
        CHECK(mean_makespan(s, graphs) == doctest::Approx(5.0));  // (4 + 6)/2
    }
}

TEST_CASE("mean flowtime is arrival-independent") {
    SUBCASE("one graph spanning 1..6") {
        const std::vector<TaskGraph> graphs = {make_graph(0, {2.0, 3.0}, {}, 0.0)};
        const Schedule s = schedule_of({Assignment{TaskId{0, 0}, 0, 1.0, 3.0},
                                        Assignment{TaskId{0, 1}, 0, 3.0, 6.0}});
        CHECK(mean_flowtime(s, graphs) == doctest::Approx(5.0));
    }
    SUBCASE("single-task graphs reduce to mean exec time") {
        const std::vector<TaskGraph> graphs = {make_graph(0, {2.0}, {}, 0.0),
                                               make_graph(1, {4.0}, {}, 1.0)};
        const Schedule s = schedule_of({Assignment{TaskId{0, 0}, 0, 0.0, 2.0},
                                        Assignment{TaskId{1, 0}, 0, 2.0, 6.0}});
        CHECK(mean_flowtime(s, graphs) == doctest::Approx(3.0));
    }
    SUBCASE("shifting arrivals with the same shape leaves it unchanged") {
        const std::vector<TaskGraph> early = {make_graph(0, {2.0}, {}, 0.0)};
        const std::vector<TaskGraph> late = {make_graph(0, {2.0}, {}, 5.0)};
        const Schedule s0 = schedule_of({Assignment{TaskId{0, 0}, 0, 1.0, 3.0}});
        const Schedule s5 = schedule_of({Assignment{TaskId{0, 0}, 0, 6.0, 8.0}});
        CHECK(mean_flowtime(s0, early) == mean_flowtime(s5, late));
    }
}

TEST_CASE("utilization fixtures") {
    const Network net = Network::homogeneous(2, 1.0, 1.0);
    SUBCASE("back-to-back work is fully utilized") {
        const std::vector<TaskGraph> graphs = {make_graph(0, {2.0, 2.0}, {}, 0.0)};
        const Schedule s = schedule_of({Assignment{TaskId{0, 0}, 0, 0.0, 2.0},
                                        Assignment{TaskId{0, 1}, 0, 2.0, 4.0}});
        const std::vector<double> u = utilization(s, graphs, net);
        CHECK(u[0] == doctest::Approx(1.0));
        CHECK(u[1] == 0.0);  // idle node
    }
    SUBCASE("half-busy node") {
        const std::vector<TaskGraph> graphs = {make_graph(0, {2.0, 4.0}, {}, 0.0)};
        const Schedule s = schedule_of({Assignment{TaskId{0, 0}, 0, 0.0, 2.0},
                                        Assignment{TaskId{0, 1}, 1, 0.0, 4.0}});
        CHECK(utilization(s, graphs, net)[0] == doctest::Approx(0.5));
    }
}

TEST_CASE("scheduler runtime sums the recorded durations") {
    CHECK(scheduler_runtime({}) == 0.0);
    CHECK(scheduler_runtime({0.1, 0.2}) == doctest::Approx(0.3));
}

TEST_CASE("normalize maps the minimum to 1.0") {
    CHECK(normalize({4.0, 8.0}) == std::vector<double>{1.0, 2.0});
    CHECK(normalize({5.0}) == std::vector<double>{1.0});
    CHECK_THROWS_AS(normalize({2.0, 0.0}), Error);
    CHECK_THROWS_AS(normalize({}), Error);

    SUBCASE("order is preserved") {
        const std::vector<double> values = {3.0, 1.5, 9.0, 2.0};
        const std::vector<double> norm = normalize(values);
        for (std::size_t i = 0; i < values.size(); ++i) {
            for (std::size_t j = 0; j < values.size(); ++j) {
                CHECK((values[i] < values[j]) == (norm[i] < norm[j]));
            }
        }
    }
    SUBCASE("scale invariance") {
        const std::vector<double> values = {3.0, 1.5, 9.0};
        std::vector<double> scaled = values;
        for (double& v : scaled) v *= 17.5;
        CHECK(normalize(values) == normalize(scaled));
    }
}

TEST_CASE("metric relations hold on simulated workloads") {
    WorkloadSpec spec = WorkloadSpec::default_synthetic();
    std::get<SyntheticSpec>(spec.shape).graph_count = 12;
    std::get<SyntheticSpec>(spec.shape).node_count = 3;

    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const Workload w = generate_workload(spec, seed);
        const SimulationResult result =
            run_simulation(w.graphs, w.network, PreemptionPolicy::fully_preemptive(),
                           make_scheduler("heft"), seed);
        const MetricVector m =
            compute_metrics(result.schedule, w.graphs, w.network, result.scheduler_durations);

        CHECK(m.mean_flowtime <= m.mean_makespan + 1e-9);
        CHECK(m.total_makespan + 1e-9 >= m.mean_makespan);
        for (double u : m.node_utilization) {
            CHECK(u >= 0.0);
            CHECK(u <= 1.0 + 1e-9);
        }

        // work conservation: sum over nodes of u(v) * s(v) * makespan == total work
        double lhs = 0.0;
        for (int v = 0; v < w.network.node_count(); ++v) {
            lhs += m.node_utilization[v] * w.network.speed(v) * m.total_makespan;
        }
        double total_work = 0.0;
        for (const TaskGraph& g : w.graphs) {
            for (const Task& t : g.tasks) total_work += t.cost;
        }
        CHECK(lhs == doctest::Approx(total_work).epsilon(1e-6));
    }
}
