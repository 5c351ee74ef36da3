#pragma once

#include <vector>

#include "presched/core.hpp"

namespace presched {

struct MetricVector {
    double total_makespan = 0.0;
    double mean_makespan = 0.0;
    double mean_flowtime = 0.0;
    std::vector<double> node_utilization;  // indexed by node
    double mean_utilization = 0.0;
    double scheduler_runtime = 0.0;  // wall-clock seconds
};

// max over all tasks of the finish time. Generators pin the first arrival to
// time 0, so this is also the span since the first arrival.
double total_makespan(const Schedule& schedule);

// mean over graphs of (last finish - arrival).
double mean_makespan(const Schedule& schedule, const std::vector<TaskGraph>& graphs);

// mean over graphs of (last finish - earliest start); independent of arrivals.
double mean_flowtime(const Schedule& schedule, const std::vector<TaskGraph>& graphs);

// Per node: busy time (sum of c(t)/s(v) of its tasks) over the total makespan.
std::vector<double> utilization(const Schedule& schedule, const std::vector<TaskGraph>& graphs,
                                const Network& net);

// Total scheduler wall-clock over all arrivals.
double scheduler_runtime(const std::vector<double>& durations);

MetricVector compute_metrics(const Schedule& schedule, const std::vector<TaskGraph>& graphs,
                             const Network& net, const std::vector<double>& durations);

// Divides every value by the minimum; the best variant maps to 1.0. Error on
// empty input or nonpositive values.
std::vector<double> normalize(const std::vector<double>& values);

}  // namespace presched
