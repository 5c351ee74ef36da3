#pragma once

#include <map>
#include <utility>
#include <vector>

#include "presched/core.hpp"

namespace presched {

struct TimelineInterval {
    double start = 0.0;
    double finish = 0.0;
    TaskId task;
};

// Committed execution intervals of one node, sorted by start and pairwise
// non-overlapping.
class NodeTimeline {
public:
    NodeTimeline() = default;
    explicit NodeTimeline(int node) : node_(node) {}

    int node() const { return node_; }
    const std::vector<TimelineInterval>& committed() const { return committed_; }

    // Earliest start >= lower such that [start, start + duration] fits in an
    // idle gap between committed intervals, or after the last one.
    double earliest_fit(double lower, double duration) const;

    void commit(const TimelineInterval& interval);  // InternalError on overlap

private:
    int node_ = -1;
    std::vector<TimelineInterval> committed_;
};

struct FixedFinish {
    int node = -1;
    double finish = 0.0;
};

// Cross-set dependency: an edge whose source is already fixed and therefore
// not part of the graph being scheduled.
struct FixedPred {
    TaskId pred;
    double data_size = 0.0;
};

// Everything a static scheduler may use: the network, per-node committed
// intervals, finish info for fixed predecessor tasks, and the current time.
struct SchedulingContext {
    const Network* network = nullptr;
    std::vector<NodeTimeline> timelines;
    std::map<TaskId, FixedFinish> fixed_finish;
    std::map<TaskId, std::vector<FixedPred>> fixed_preds;
    double now = 0.0;

    static SchedulingContext fresh(const Network& net, double now = 0.0);
};

// Earliest feasible (start, finish) for `task` on `node`. `preds_ready` is the
// latest data-ready time over all predecessors at this node (0 when none).
std::pair<double, double> earliest_start(const Task& task, int node,
                                         const SchedulingContext& ctx,
                                         double preds_ready);

}  // namespace presched
