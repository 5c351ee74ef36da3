#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "presched/core.hpp"
#include "presched/schedulers.hpp"

namespace presched {

// Lifecycle of one task. The only transitions are
// Unscheduled -> Scheduled -> Executing -> Finished, plus the preemption
// revert Scheduled -> Unscheduled.
enum class TaskState { Unscheduled, Scheduled, Executing, Finished };

std::string_view to_string(TaskState state);

struct PreemptionPolicy {
    enum class Kind { FullyPreemptive, NonPreemptive, LastK };
    Kind kind = Kind::FullyPreemptive;
    int window = 0;  // LastK only: number of most recent prior graphs

    static PreemptionPolicy fully_preemptive() { return {Kind::FullyPreemptive, 0}; }
    static PreemptionPolicy non_preemptive() { return {Kind::NonPreemptive, 0}; }
    static PreemptionPolicy last_k(int window);  // 0 normalizes to NonPreemptive

    std::string label() const;  // "P", "NP", "<k>P"
    bool operator==(const PreemptionPolicy&) const = default;
};

// Parses "P", "NP", or "<k>P" (e.g. "5P").
PreemptionPolicy parse_policy(std::string_view text);

struct Event {
    enum class Kind { Arrival, Revert, Place };
    Kind kind = Kind::Arrival;
    double t = 0.0;
    int graph = -1;  // Arrival only
    TaskId task;     // Revert / Place
    int node = -1;   // Place only
    double start = 0.0;
    double finish = 0.0;
};

struct SimulationState {
    const Network* network = nullptr;
    double clock = 0.0;
    std::map<TaskId, TaskState> states;
    std::map<TaskId, Assignment> assignments;  // Scheduled / Executing / Finished
    std::vector<TaskGraph> arrived;
};

struct SimulationResult {
    Schedule schedule;
    std::vector<double> scheduler_durations;  // seconds, one per arrival
    std::vector<Event> events;
};

// Moves the clock forward, promoting Scheduled -> Executing -> Finished as
// start/finish times pass. Throws Error on time regression.
void advance_to(SimulationState& state, double time);

// Tasks the policy allows to be reverted when graph `new_graph_index`
// arrives. Only Scheduled (never started) tasks are ever returned.
std::vector<TaskId> reschedulable_set(const SimulationState& state,
                                      const PreemptionPolicy& policy, int new_graph_index);

// Processes one arrival: advances time, reverts the reschedulable set,
// reschedules the merged graph, and records the new placements. Returns the
// scheduler invocation's wall-clock duration in seconds.
double handle_arrival(SimulationState& state, const TaskGraph& graph,
                      const PreemptionPolicy& policy, const SchedulerFn& scheduler,
                      std::uint64_t seed, std::vector<Event>* events = nullptr);

// Runs the full dynamic simulation over arrival-ordered graphs. Deterministic
// given rng_seed (only the random scheduler consumes it). When
// validate_result is set, a failed final validation throws InternalError.
SimulationResult run_simulation(const std::vector<TaskGraph>& graphs, const Network& net,
                                const PreemptionPolicy& policy, const SchedulerFn& scheduler,
                                std::uint64_t rng_seed, bool validate_result = true);

// Rebuilds the final schedule from an event log (place/revert replay).
Schedule replay_events(const std::vector<Event>& events);

// Throws InternalError if per-task states disagree with the clock.
void check_state_invariants(const SimulationState& state);

}  // namespace presched
