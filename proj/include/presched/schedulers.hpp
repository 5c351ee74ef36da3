#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "presched/core.hpp"
#include "presched/timeline.hpp"

namespace presched {

using ScheduleFragment = std::map<TaskId, Assignment>;

// Upward-rank list scheduling with insertion-based earliest finish time.
ScheduleFragment heft(const TaskGraph& graph, const SchedulingContext& ctx);

// Critical-path-on-a-processor: critical-path tasks pinned to the node that
// executes the path fastest, everything else by earliest finish.
ScheduleFragment cpop(const TaskGraph& graph, const SchedulingContext& ctx);

// Ready-set heuristics: repeatedly commit the ready task with the smallest
// (minmin) or largest (maxmin) best finish time over all nodes.
ScheduleFragment minmin(const TaskGraph& graph, const SchedulingContext& ctx);
ScheduleFragment maxmin(const TaskGraph& graph, const SchedulingContext& ctx);

// Topological order onto uniformly random nodes; deterministic per seed.
ScheduleFragment random_schedule(const TaskGraph& graph, const SchedulingContext& ctx,
                                 std::uint64_t seed);

// All schedulers behind one signature; the seed is ignored by the
// deterministic ones.
using SchedulerFn = std::function<ScheduleFragment(const TaskGraph&, const SchedulingContext&,
                                                   std::uint64_t)>;

SchedulerFn make_scheduler(std::string_view name);  // Error on unknown name
const std::vector<std::string>& scheduler_names();

}  // namespace presched
