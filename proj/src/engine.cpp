#include "presched/engine.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

#include "presched/rng.hpp"

namespace presched {

std::string_view to_string(TaskState state) {
    switch (state) {
        case TaskState::Unscheduled: return "unscheduled";
        case TaskState::Scheduled: return "scheduled";
        case TaskState::Executing: return "executing";
        case TaskState::Finished: return "finished";
    }
    return "?";
}

PreemptionPolicy PreemptionPolicy::last_k(int window) {
    if (window < 0) throw Error("Last-K window must be nonnegative");
    if (window == 0) return non_preemptive();
    return {Kind::LastK, window};
}

std::string PreemptionPolicy::label() const {
    switch (kind) {
        case Kind::FullyPreemptive: return "P";
        case Kind::NonPreemptive: return "NP";
        case Kind::LastK: return std::to_string(window) + "P";
    }
    return "?";
}

PreemptionPolicy parse_policy(std::string_view text) {
    if (text == "P") return PreemptionPolicy::fully_preemptive();
    if (text == "NP") return PreemptionPolicy::non_preemptive();
    if (text.size() > 1 && text.back() == 'P') {
        const std::string digits(text.substr(0, text.size() - 1));
        if (!digits.empty() &&
            std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            return PreemptionPolicy::last_k(std::stoi(digits));
        }
    }
    throw Error("unknown policy '" + std::string(text) + "' (expected P, NP, or <k>P)");
}

void advance_to(SimulationState& state, double time) {
    if (time < state.clock) {
        std::ostringstream msg;
        msg << "cannot advance clock backwards from " << state.clock << " to " << time;
        throw Error(msg.str());
    }
    state.clock = time;
    for (auto& [id, task_state] : state.states) {
        if (task_state != TaskState::Scheduled && task_state != TaskState::Executing) continue;
        const Assignment& a = state.assignments.at(id);
        if (task_state == TaskState::Scheduled && a.start <= time) {
            task_state = TaskState::Executing;
        }
        if (task_state == TaskState::Executing && a.finish <= time) {
            task_state = TaskState::Finished;
        }
    }
}

std::vector<TaskId> reschedulable_set(const SimulationState& state,
                                      const PreemptionPolicy& policy, int new_graph_index) {
    std::vector<TaskId> result;
    if (policy.kind == PreemptionPolicy::Kind::NonPreemptive) return result;
    const int lowest_graph = policy.kind == PreemptionPolicy::Kind::LastK
                                 ? new_graph_index - policy.window
                                 : 0;
    for (const auto& [id, task_state] : state.states) {
        if (task_state != TaskState::Scheduled) continue;
        if (id.graph_index >= new_graph_index) continue;
        if (id.graph_index < lowest_graph) continue;
        result.push_back(id);
    }
    return result;
}

namespace {

const TaskGraph& origin_graph(const SimulationState& state, int graph_index) {
    if (graph_index < 0 || graph_index >= static_cast<int>(state.arrived.size())) {
        throw InternalError("unknown origin graph " + std::to_string(graph_index));
    }
    return state.arrived[graph_index];
}

}  // namespace

double handle_arrival(SimulationState& state, const TaskGraph& graph,
                      const PreemptionPolicy& policy, const SchedulerFn& scheduler,
                      std::uint64_t seed, std::vector<Event>* events) {
    if (!state.network) throw InternalError("simulation state has no network");
    if (graph.arrival_time < state.clock) {
        throw Error("arrival time regression at graph " +
                    std::to_string(state.arrived.size()));
    }
    const int new_graph_index = static_cast<int>(state.arrived.size());
    advance_to(state, graph.arrival_time);
    if (events) {
        events->push_back(Event{Event::Kind::Arrival, state.clock, new_graph_index, {}, -1, 0, 0});
    }

    // Revert what the policy allows; their intervals are released implicitly
    // because timelines are rebuilt from the remaining assignments below.
    const std::vector<TaskId> reverted = reschedulable_set(state, policy, new_graph_index);
    std::set<int> reverted_graphs;
    for (const TaskId& id : reverted) {
        state.states[id] = TaskState::Unscheduled;
        state.assignments.erase(id);
        reverted_graphs.insert(id.graph_index);
        if (events) {
            events->push_back(Event{Event::Kind::Revert, state.clock, -1, id, -1, 0, 0});
        }
    }

    state.arrived.push_back(graph);
    for (const Task& t : graph.tasks) state.states[t.id] = TaskState::Unscheduled;

    // Merged graph: the new graph plus one fragment per reverted graph,
    // carrying original releases and the dependencies internal to each
    // fragment. Edges from fixed tasks become fixed_preds in the context.
    const std::set<TaskId> reverted_set(reverted.begin(), reverted.end());
    std::vector<TaskGraph> fragments;
    for (int g : reverted_graphs) {
        const TaskGraph& origin = origin_graph(state, g);
        TaskGraph fragment;
        fragment.arrival_time = origin.arrival_time;
        for (const Task& t : origin.tasks) {
            if (reverted_set.count(t.id)) fragment.tasks.push_back(t);
        }
        for (const Dependency& d : origin.dependencies) {
            if (reverted_set.count(d.src) && reverted_set.count(d.dst)) {
                fragment.dependencies.push_back(d);
            }
        }
        fragments.push_back(std::move(fragment));
    }
    fragments.push_back(graph);
    const TaskGraph merged = merge_graphs(fragments);

    SchedulingContext ctx = SchedulingContext::fresh(*state.network, state.clock);
    for (const auto& [id, a] : state.assignments) {
        ctx.timelines[a.node].commit(TimelineInterval{a.start, a.finish, id});
        ctx.fixed_finish[id] = FixedFinish{a.node, a.finish};
    }
    std::set<TaskId> merged_ids;
    for (const Task& t : merged.tasks) merged_ids.insert(t.id);
    for (const Task& t : merged.tasks) {
        const TaskGraph& origin = origin_graph(state, t.id.graph_index);
        for (const Dependency& d : origin.dependencies) {
            if (d.dst != t.id || merged_ids.count(d.src)) continue;
            if (!ctx.fixed_finish.count(d.src)) {
                throw InternalError("arrival " + std::to_string(new_graph_index) +
                                    ": predecessor " + to_string(d.src) +
                                    " is neither merged nor fixed");
            }
            ctx.fixed_preds[t.id].push_back(FixedPred{d.src, d.data_size});
        }
    }

    ScheduleFragment fragment;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fragment = scheduler(merged, ctx, seed);
    } catch (const Error& e) {
        throw Error("arrival " + std::to_string(new_graph_index) + ": " + e.what());
    }
    const auto t1 = std::chrono::steady_clock::now();

    if (fragment.size() != merged.tasks.size()) {
        throw InternalError("arrival " + std::to_string(new_graph_index) +
                            ": scheduler returned " + std::to_string(fragment.size()) +
                            " assignments for " + std::to_string(merged.tasks.size()) +
                            " tasks");
    }
    for (const auto& [id, a] : fragment) {
        if (!merged_ids.count(id)) {
            throw InternalError("arrival " + std::to_string(new_graph_index) +
                                ": scheduler assigned unknown task " + to_string(id));
        }
        state.states[id] = TaskState::Scheduled;
        state.assignments[id] = a;
        if (events) {
            events->push_back(
                Event{Event::Kind::Place, state.clock, -1, id, a.node, a.start, a.finish});
        }
    }

    return std::chrono::duration<double>(t1 - t0).count();
}

SimulationResult run_simulation(const std::vector<TaskGraph>& graphs, const Network& net,
                                const PreemptionPolicy& policy, const SchedulerFn& scheduler,
                                std::uint64_t rng_seed, bool validate_result) {
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        for (const Task& t : graphs[i].tasks) {
            if (t.id.graph_index != static_cast<int>(i)) {
                throw Error("graph at position " + std::to_string(i) +
                            " carries task " + to_string(t.id) +
                            "; graph_index must equal arrival order");
            }
        }
        if (i > 0 && graphs[i].arrival_time < graphs[i - 1].arrival_time) {
            throw Error("graphs must be sorted by arrival time");
        }
    }

    SimulationState state;
    state.network = &net;
    SimulationResult result;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        result.scheduler_durations.push_back(handle_arrival(
            state, graphs[i], policy, scheduler, derive_seed(rng_seed, i), &result.events));
    }

    double end = state.clock;
    for (const auto& [id, a] : state.assignments) {
        (void)id;
        end = std::max(end, a.finish);
    }
    advance_to(state, end);

    result.schedule.assignments = state.assignments;
    if (validate_result) {
        const ValidationReport report = validate_schedule(result.schedule, graphs, net);
        if (!report.ok()) {
            throw InternalError("final schedule is invalid: " + report.summary());
        }
    }
    return result;
}

Schedule replay_events(const std::vector<Event>& events) {
    Schedule schedule;
    for (const Event& e : events) {
        switch (e.kind) {
            case Event::Kind::Arrival: break;
            case Event::Kind::Revert: schedule.assignments.erase(e.task); break;
            case Event::Kind::Place:
                schedule.assignments[e.task] = Assignment{e.task, e.node, e.start, e.finish};
                break;
        }
    }
    return schedule;
}

void check_state_invariants(const SimulationState& state) {
    for (const auto& [id, task_state] : state.states) {
        if (task_state == TaskState::Unscheduled) {
            if (state.assignments.count(id)) {
                throw InternalError(to_string(id) + " is unscheduled but has an assignment");
            }
            continue;
        }
        const Assignment& a = state.assignments.at(id);
        const double clock = state.clock;
        switch (task_state) {
            case TaskState::Scheduled:
                if (a.start < clock - kTimeSlack) {
                    throw InternalError(to_string(id) + " is scheduled in the past");
                }
                break;
            case TaskState::Executing:
                if (a.start > clock + kTimeSlack || a.finish <= clock) {
                    throw InternalError(to_string(id) + " executing outside its interval");
                }
                break;
            case TaskState::Finished:
                if (a.finish > clock + kTimeSlack) {
                    throw InternalError(to_string(id) + " finished in the future");
                }
                break;
            default: break;
        }
    }
}

}  // namespace presched
