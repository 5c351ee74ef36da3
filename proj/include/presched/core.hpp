#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace presched {

// Absolute slack applied to all interval/precedence comparisons on times.
inline constexpr double kTimeSlack = 1e-9;

// ---------------------------------------------------------------------------
// Identifiers and errors
// ---------------------------------------------------------------------------

// Globally unique task identity: (arrival-order index of the owning graph,
// ordinal within that graph).
struct TaskId {
    int graph_index = 0;
    int local_id = 0;
    auto operator<=>(const TaskId&) const = default;
};

std::string to_string(TaskId id);

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Failed id/name resolution (unknown task, node, or edge).
class LookupError : public Error {
public:
    using Error::Error;
};

// Input data is structurally broken (malformed JSON, missing fields).
class ParseError : public Error {
public:
    using Error::Error;
};

// Input data is well-formed but violates a domain constraint.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A self-check inside the simulator failed; always a bug, never user error.
class InternalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class CycleError : public Error {
public:
    CycleError(const std::string& message, std::vector<TaskId> cycle)
        : Error(message), cycle_(std::move(cycle)) {}
    const std::vector<TaskId>& cycle() const noexcept { return cycle_; }

private:
    std::vector<TaskId> cycle_;
};

// ---------------------------------------------------------------------------
// Task graphs
// ---------------------------------------------------------------------------

struct Task {
    TaskId id;
    double cost = 0.0;     // abstract work units, > 0
    double release = 0.0;  // earliest allowed start; origin graph's arrival
};

struct Dependency {
    TaskId src;
    TaskId dst;
    double data_size = 0.0;  // abstract data units, > 0
};

// One task graph. Fresh graphs carry release == arrival_time on every task;
// merged graphs keep each task's origin release.
struct TaskGraph {
    std::vector<Task> tasks;
    std::vector<Dependency> dependencies;
    double arrival_time = 0.0;

    const Task* find_task(TaskId id) const;
};

// Convenience builder: tasks get ids (graph_index, 0..n-1) and
// release = arrival; edges are (src local id, dst local id, data size).
TaskGraph make_graph(int graph_index, const std::vector<double>& costs,
                     const std::vector<std::tuple<int, int, double>>& edges,
                     double arrival);

// Throws Error/CycleError if the graph breaks any structural invariant.
void check_task_graph(const TaskGraph& graph);

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

struct NetworkNode {
    std::string name;
    double speed = 0.0;  // work units per time, > 0
};

// Complete undirected network of compute nodes. Self-communication is free
// (infinite self-strength).
class Network {
public:
    Network() = default;
    // links: (node index a, node index b, strength) for every unordered pair.
    Network(std::vector<NetworkNode> nodes,
            const std::vector<std::tuple<int, int, double>>& links);

    static Network homogeneous(int node_count, double speed, double strength);

    int node_count() const { return static_cast<int>(nodes_.size()); }
    const NetworkNode& node(int v) const;
    const std::vector<NetworkNode>& nodes() const { return nodes_; }
    int index_of(std::string_view name) const;  // LookupError if unknown

    double speed(int v) const;
    double strength(int a, int b) const;  // +inf when a == b

    // Mean of 1/speed over nodes; mean of 1/strength over distinct ordered
    // pairs (0 for a single-node network). Used by rank and CCR computations.
    double mean_inverse_speed() const;
    double mean_inverse_strength() const;

private:
    std::vector<NetworkNode> nodes_;
    std::vector<double> strength_;  // row-major node_count x node_count
};

// ---------------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------------

struct Assignment {
    TaskId task;
    int node = -1;
    double start = 0.0;
    double finish = 0.0;
    bool operator==(const Assignment&) const = default;
};

struct Schedule {
    std::map<TaskId, Assignment> assignments;
    bool operator==(const Schedule&) const = default;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

double exec_time(double cost, double speed);
double exec_time(TaskId task, int node, const std::vector<TaskGraph>& graphs,
                 const Network& net);

// Zero when src_node == dst_node.
double comm_time(double data_size, int src_node, int dst_node, const Network& net);
double comm_time(TaskId src, TaskId dst, int src_node, int dst_node,
                 const std::vector<TaskGraph>& graphs, const Network& net);

struct Violation {
    int constraint = 0;  // 1: coverage, 2: duration, 3: overlap, 4: arrival, 5: precedence
    std::vector<TaskId> tasks;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary(std::size_t max_items = 8) const;
};

// Checks the five validity conditions; never throws on an invalid schedule.
ValidationReport validate_schedule(const Schedule& schedule,
                                   const std::vector<TaskGraph>& graphs,
                                   const Network& net);

// Deterministic topological order, ties by (graph_index, local_id) ascending.
// Throws CycleError naming one cycle.
std::vector<TaskId> topological_order(const TaskGraph& graph);

// Disjoint union of fragments; per-task releases are preserved. Throws Error
// on duplicate task ids.
TaskGraph merge_graphs(const std::vector<TaskGraph>& fragments);

}  // namespace presched
