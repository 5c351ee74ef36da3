#include "presched/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "presched/rng.hpp"

namespace presched {

namespace {

struct GraphView {
    const TaskGraph& graph;
    std::map<TaskId, std::size_t> index;
    std::vector<std::vector<std::pair<std::size_t, double>>> succs;  // (task, data size)
    std::vector<std::vector<std::pair<std::size_t, double>>> preds;

    explicit GraphView(const TaskGraph& g) : graph(g) {
        for (std::size_t i = 0; i < g.tasks.size(); ++i) index[g.tasks[i].id] = i;
        succs.resize(g.tasks.size());
        preds.resize(g.tasks.size());
        for (const Dependency& d : g.dependencies) {
            const std::size_t s = index.at(d.src);
            const std::size_t t = index.at(d.dst);
            succs[s].emplace_back(t, d.data_size);
            preds[t].emplace_back(s, d.data_size);
        }
    }
};

// Latest data-ready time of task `ti` at `node`, over placed in-graph
// predecessors and fixed external ones.
double data_ready(const GraphView& view, std::size_t ti, int node,
                  const ScheduleFragment& placed, const SchedulingContext& ctx) {
    double ready = 0.0;
    for (const auto& [pi, size] : view.preds[ti]) {
        const Assignment& a = placed.at(view.graph.tasks[pi].id);
        ready = std::max(ready, a.finish + comm_time(size, a.node, node, *ctx.network));
    }
    auto it = ctx.fixed_preds.find(view.graph.tasks[ti].id);
    if (it != ctx.fixed_preds.end()) {
        for (const FixedPred& fp : it->second) {
            auto ff = ctx.fixed_finish.find(fp.pred);
            if (ff == ctx.fixed_finish.end()) {
                throw InternalError("fixed predecessor " + to_string(fp.pred) +
                                    " missing from fixed_finish");
            }
            ready = std::max(ready, ff->second.finish +
                                        comm_time(fp.data_size, ff->second.node, node,
                                                  *ctx.network));
        }
    }
    return ready;
}

Assignment place_on(const GraphView& view, std::size_t ti, int node,
                    const ScheduleFragment& placed, const SchedulingContext& work) {
    const Task& task = view.graph.tasks[ti];
    const double ready = data_ready(view, ti, node, placed, work);
    const auto [start, finish] = earliest_start(task, node, work, ready);
    return Assignment{task.id, node, start, finish};
}

// Minimum earliest-finish placement over all nodes, ties by node order.
Assignment best_eft(const GraphView& view, std::size_t ti, const ScheduleFragment& placed,
                    const SchedulingContext& work) {
    Assignment best;
    best.finish = std::numeric_limits<double>::infinity();
    for (int v = 0; v < work.network->node_count(); ++v) {
        const Assignment a = place_on(view, ti, v, placed, work);
        if (a.finish < best.finish) best = a;
    }
    return best;
}

void commit(SchedulingContext& work, ScheduleFragment& placed, const Assignment& a) {
    work.timelines[a.node].commit(TimelineInterval{a.start, a.finish, a.task});
    placed.emplace(a.task, a);
}

// rank_u(t) = mean_exec(t) + max over successors of (mean_comm + rank_u(succ))
std::vector<double> upward_ranks(const GraphView& view, const Network& net) {
    const double mis = net.mean_inverse_speed();
    const double mistr = net.mean_inverse_strength();
    const std::vector<TaskId> order = topological_order(view.graph);
    std::vector<double> rank(view.graph.tasks.size(), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t ti = view.index.at(*it);
        double best_succ = 0.0;
        for (const auto& [si, size] : view.succs[ti]) {
            best_succ = std::max(best_succ, size * mistr + rank[si]);
        }
        rank[ti] = view.graph.tasks[ti].cost * mis + best_succ;
    }
    return rank;
}

std::vector<double> downward_ranks(const GraphView& view, const Network& net) {
    const double mis = net.mean_inverse_speed();
    const double mistr = net.mean_inverse_strength();
    const std::vector<TaskId> order = topological_order(view.graph);
    std::vector<double> rank(view.graph.tasks.size(), 0.0);
    for (const TaskId& id : order) {
        const std::size_t ti = view.index.at(id);
        for (const auto& [pi, size] : view.preds[ti]) {
            rank[ti] = std::max(rank[ti], rank[pi] + view.graph.tasks[pi].cost * mis +
                                              size * mistr);
        }
    }
    return rank;
}

// Places tasks by descending priority among the ready set (all in-graph
// predecessors placed); `choose(ti, placed)` maps a ready task to its
// assignment given what has been placed so far.
template <typename Choose>
ScheduleFragment priority_list_schedule(const GraphView& view,
                                        const std::vector<double>& priority,
                                        SchedulingContext& work, Choose&& choose) {
    const std::size_t n = view.graph.tasks.size();
    std::vector<int> missing_preds(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        missing_preds[i] = static_cast<int>(view.preds[i].size());
    }

    // (-priority, id) so the set's begin() is the highest-priority ready task
    std::set<std::pair<double, TaskId>> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (missing_preds[i] == 0) ready.emplace(-priority[i], view.graph.tasks[i].id);
    }

    ScheduleFragment placed;
    while (!ready.empty()) {
        const TaskId id = ready.begin()->second;
        ready.erase(ready.begin());
        const std::size_t ti = view.index.at(id);
        commit(work, placed, choose(ti, placed));
        for (const auto& [si, size] : view.succs[ti]) {
            (void)size;
            if (--missing_preds[si] == 0) {
                ready.emplace(-priority[si], view.graph.tasks[si].id);
            }
        }
    }
    if (placed.size() != n) {
        throw CycleError("graph has a dependency cycle", {});
    }
    return placed;
}

}  // namespace

ScheduleFragment heft(const TaskGraph& graph, const SchedulingContext& ctx) {
    const GraphView view(graph);
    const std::vector<double> rank = upward_ranks(view, *ctx.network);
    SchedulingContext work = ctx;
    return priority_list_schedule(view, rank, work,
                                  [&](std::size_t ti, const ScheduleFragment& placed) {
                                      return best_eft(view, ti, placed, work);
                                  });
}

ScheduleFragment cpop(const TaskGraph& graph, const SchedulingContext& ctx) {
    if (graph.tasks.empty()) return {};
    const GraphView view(graph);
    const Network& net = *ctx.network;
    const std::vector<double> up = upward_ranks(view, net);
    const std::vector<double> down = downward_ranks(view, net);

    std::vector<double> priority(up.size());
    for (std::size_t i = 0; i < up.size(); ++i) priority[i] = up[i] + down[i];

    // Critical path: walk maximal-priority successors from the maximal entry task.
    std::size_t entry = up.size();
    for (std::size_t i = 0; i < up.size(); ++i) {
        if (!view.preds[i].empty()) continue;
        if (entry == up.size() || priority[i] > priority[entry] ||
            (priority[i] == priority[entry] &&
             view.graph.tasks[i].id < view.graph.tasks[entry].id)) {
            entry = i;
        }
    }
    std::vector<bool> on_path(up.size(), false);
    double path_cost = 0.0;
    for (std::size_t cur = entry;;) {
        on_path[cur] = true;
        path_cost += view.graph.tasks[cur].cost;
        std::size_t next = up.size();
        for (const auto& [si, size] : view.succs[cur]) {
            (void)size;
            if (next == up.size() || priority[si] > priority[next] ||
                (priority[si] == priority[next] &&
                 view.graph.tasks[si].id < view.graph.tasks[next].id)) {
                next = si;
            }
        }
        if (next == up.size()) break;
        cur = next;
    }

    int pinned = 0;
    double best_time = std::numeric_limits<double>::infinity();
    for (int v = 0; v < net.node_count(); ++v) {
        const double t = exec_time(path_cost, net.speed(v));
        if (t < best_time) {
            best_time = t;
            pinned = v;
        }
    }

    SchedulingContext work = ctx;
    return priority_list_schedule(view, priority, work,
                                  [&](std::size_t ti, const ScheduleFragment& placed) {
                                      if (on_path[ti]) {
                                          return place_on(view, ti, pinned, placed, work);
                                      }
                                      return best_eft(view, ti, placed, work);
                                  });
}

namespace {

ScheduleFragment ready_set_schedule(const TaskGraph& graph, const SchedulingContext& ctx,
                                    bool pick_largest) {
    const GraphView view(graph);
    const std::size_t n = graph.tasks.size();
    SchedulingContext work = ctx;
    ScheduleFragment placed;

    std::vector<int> missing_preds(n, 0);
    for (std::size_t i = 0; i < n; ++i) missing_preds[i] = static_cast<int>(view.preds[i].size());
    std::set<TaskId> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (missing_preds[i] == 0) ready.insert(graph.tasks[i].id);
    }

    while (!ready.empty()) {
        bool have = false;
        TaskId chosen;
        Assignment chosen_a;
        for (const TaskId& id : ready) {  // ascending id keeps ties deterministic
            const Assignment a = best_eft(view, view.index.at(id), placed, work);
            const bool better = !have || (pick_largest ? a.finish > chosen_a.finish
                                                       : a.finish < chosen_a.finish);
            if (better) {
                have = true;
                chosen = id;
                chosen_a = a;
            }
        }
        ready.erase(chosen);
        commit(work, placed, chosen_a);
        for (const auto& [si, size] : view.succs[view.index.at(chosen)]) {
            (void)size;
            if (--missing_preds[si] == 0) ready.insert(graph.tasks[si].id);
        }
    }
    if (placed.size() != n) throw CycleError("graph has a dependency cycle", {});
    return placed;
}

}  // namespace

ScheduleFragment minmin(const TaskGraph& graph, const SchedulingContext& ctx) {
    return ready_set_schedule(graph, ctx, false);
}

ScheduleFragment maxmin(const TaskGraph& graph, const SchedulingContext& ctx) {
    return ready_set_schedule(graph, ctx, true);
}

ScheduleFragment random_schedule(const TaskGraph& graph, const SchedulingContext& ctx,
                                 std::uint64_t seed) {
    const GraphView view(graph);
    std::mt19937_64 rng(seed);
    SchedulingContext work = ctx;
    ScheduleFragment placed;
    for (const TaskId& id : topological_order(graph)) {
        const std::size_t ti = view.index.at(id);
        const int node = static_cast<int>(rng() %
                                          static_cast<std::uint64_t>(work.network->node_count()));
        commit(work, placed, place_on(view, ti, node, placed, work));
    }
    return placed;
}

SchedulerFn make_scheduler(std::string_view name) {
    if (name == "heft") {
        return [](const TaskGraph& g, const SchedulingContext& c, std::uint64_t) {
            return heft(g, c);
        };
    }
    if (name == "cpop") {
        return [](const TaskGraph& g, const SchedulingContext& c, std::uint64_t) {
            return cpop(g, c);
        };
    }
    if (name == "minmin") {
        return [](const TaskGraph& g, const SchedulingContext& c, std::uint64_t) {
            return minmin(g, c);
        };
    }
    if (name == "maxmin") {
        return [](const TaskGraph& g, const SchedulingContext& c, std::uint64_t) {
            return maxmin(g, c);
        };
    }
    if (name == "random") {
        return [](const TaskGraph& g, const SchedulingContext& c, std::uint64_t seed) {
            return random_schedule(g, c, seed);
        };
    }
    throw Error("unknown scheduler '" + std::string(name) + "'");
}

const std::vector<std::string>& scheduler_names() {
    static const std::vector<std::string> names = {"heft", "cpop", "minmin", "maxmin", "random"};
    return names;
}

}  // namespace presched
