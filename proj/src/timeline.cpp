#include "presched/timeline.hpp"

#include <algorithm>

namespace presched {

double NodeTimeline::earliest_fit(double lower, double duration) const {
    double candidate = lower;
    for (const TimelineInterval& iv : committed_) {
        if (candidate + duration <= iv.start) return candidate;
        candidate = std::max(candidate, iv.finish);
    }
    return candidate;
}

void NodeTimeline::commit(const TimelineInterval& interval) {
    auto pos = std::upper_bound(committed_.begin(), committed_.end(), interval,
                                [](const TimelineInterval& a, const TimelineInterval& b) {
                                    return a.start < b.start;
                                });
    if (pos != committed_.end() && interval.finish > pos->start) {
        throw InternalError("timeline commit overlaps " + to_string(pos->task));
    }
    if (pos != committed_.begin() && std::prev(pos)->finish > interval.start) {
        throw InternalError("timeline commit overlaps " + to_string(std::prev(pos)->task));
    }
    committed_.insert(pos, interval);
}

SchedulingContext SchedulingContext::fresh(const Network& net, double now) {
    SchedulingContext ctx;
    ctx.network = &net;
    ctx.timelines.reserve(net.node_count());
    for (int v = 0; v < net.node_count(); ++v) ctx.timelines.emplace_back(v);
    ctx.now = now;
    return ctx;
}

std::pair<double, double> earliest_start(const Task& task, int node,
                                         const SchedulingContext& ctx,
                                         double preds_ready) {
    const double duration = exec_time(task.cost, ctx.network->speed(node));
    const double lower = std::max({task.release, ctx.now, preds_ready});
    const double start = ctx.timelines[node].earliest_fit(lower, duration);
    return {start, start + duration};
}

}  // namespace presched
