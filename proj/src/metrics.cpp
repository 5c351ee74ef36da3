#include "presched/metrics.hpp"

#include <algorithm>
#include <limits>

namespace presched {

namespace {

const Assignment& assignment_of(const Schedule& schedule, TaskId id) {
    auto it = schedule.assignments.find(id);
    if (it == schedule.assignments.end()) {
        throw LookupError("metric over a schedule missing task " + to_string(id));
    }
    return it->second;
}

}  // namespace

double total_makespan(const Schedule& schedule) {
    if (schedule.assignments.empty()) throw Error("total makespan of an empty schedule");
    double end = 0.0;
    for (const auto& [id, a] : schedule.assignments) {
        (void)id;
        end = std::max(end, a.finish);
    }
    return end;
}

double mean_makespan(const Schedule& schedule, const std::vector<TaskGraph>& graphs) {
    if (graphs.empty()) throw Error("mean makespan of an empty workload");
    double sum = 0.0;
    for (const TaskGraph& g : graphs) {
        if (g.tasks.empty()) throw Error("mean makespan with an empty graph");
        double end = -std::numeric_limits<double>::infinity();
        for (const Task& t : g.tasks) {
            end = std::max(end, assignment_of(schedule, t.id).finish);
        }
        sum += end - g.arrival_time;
    }
    return sum / graphs.size();
}

double mean_flowtime(const Schedule& schedule, const std::vector<TaskGraph>& graphs) {
    if (graphs.empty()) throw Error("mean flowtime of an empty workload");
    double sum = 0.0;
    for (const TaskGraph& g : graphs) {
        if (g.tasks.empty()) throw Error("mean flowtime with an empty graph");
        double end = -std::numeric_limits<double>::infinity();
        double first = std::numeric_limits<double>::infinity();
        for (const Task& t : g.tasks) {
            const Assignment& a = assignment_of(schedule, t.id);
            end = std::max(end, a.finish);
            first = std::min(first, a.start);
        }
        sum += end - first;
    }
    return sum / graphs.size();
}

std::vector<double> utilization(const Schedule& schedule, const std::vector<TaskGraph>& graphs,
                                const Network& net) {
    const double span = total_makespan(schedule);
    if (!(span > 0.0)) throw Error("utilization is undefined for a zero makespan");
    std::vector<double> busy(net.node_count(), 0.0);
    for (const TaskGraph& g : graphs) {
        for (const Task& t : g.tasks) {
            const Assignment& a = assignment_of(schedule, t.id);
            busy[a.node] += exec_time(t.cost, net.speed(a.node));
        }
    }
    for (double& b : busy) b /= span;
    return busy;
}

double scheduler_runtime(const std::vector<double>& durations) {
    double total = 0.0;
    for (double d : durations) total += d;
    return total;
}

MetricVector compute_metrics(const Schedule& schedule, const std::vector<TaskGraph>& graphs,
                             const Network& net, const std::vector<double>& durations) {
    MetricVector m;
    m.total_makespan = total_makespan(schedule);
    m.mean_makespan = mean_makespan(schedule, graphs);
    m.mean_flowtime = mean_flowtime(schedule, graphs);
    m.node_utilization = utilization(schedule, graphs, net);
    double sum = 0.0;
    for (double u : m.node_utilization) sum += u;
    m.mean_utilization = sum / m.node_utilization.size();
    m.scheduler_runtime = scheduler_runtime(durations);
    return m;
}

std::vector<double> normalize(const std::vector<double>& values) {
    if (values.empty()) throw Error("cannot normalize an empty value set");
    double best = std::numeric_limits<double>::infinity();
    for (double v : values) {
        if (!(v > 0.0)) throw Error("normalization needs positive values");
        best = std::min(best, v);
    }
    std::vector<double> result;
    result.reserve(values.size());
    for (double v : values) result.push_back(v / best);
    return result;
}

}  // namespace presched
