#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "presched/core.hpp"

namespace presched {

// ---------------------------------------------------------------------------
// Weight distributions
// ---------------------------------------------------------------------------

struct MixtureComponent {
    double weight = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
};

// Weighted Gaussian mixture truncated to [lower, upper] by rejection.
struct TruncatedGaussianMixture {
    std::vector<MixtureComponent> components;
    double lower = 0.0;
    double upper = 0.0;

    static TruncatedGaussianMixture single(double mean, double stddev, double lower,
                                           double upper);
};

void check_mixture(const TruncatedGaussianMixture& mixture);  // Error on invalid

// Throws Error after 10^6 consecutive rejections (bounds exclude essentially
// all of the mixture's mass).
double sample_mixture(const TruncatedGaussianMixture& mixture, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Topologies
// ---------------------------------------------------------------------------

enum class TopologyKind { OutTree, InTree, ForkJoin, Chain };

TopologyKind parse_topology(std::string_view name);
std::string_view topology_name(TopologyKind kind);

// Unweighted DAG skeleton: tasks 0..task_count-1 plus directed edges.
struct DagSkeleton {
    int task_count = 0;
    std::vector<std::pair<int, int>> edges;
};

DagSkeleton gen_out_tree(int levels, int branching);
DagSkeleton gen_in_tree(int levels, int branching);
DagSkeleton gen_fork_join(int width, int stages);
DagSkeleton gen_chain(int length);

// ---------------------------------------------------------------------------
// Networks, arrivals, adversarial instances
// ---------------------------------------------------------------------------

Network gen_network(int node_count, const TruncatedGaussianMixture& speed,
                    const TruncatedGaussianMixture& strength, std::mt19937_64& rng);

struct ArrivalProcess {
    enum class Kind { Poisson, FixedInterval };
    Kind kind = Kind::Poisson;
    double value = 1.0;  // rate (Poisson) or interval (FixedInterval)

    static ArrivalProcess poisson(double rate);
    static ArrivalProcess fixed_interval(double interval);
};

// Nondecreasing times, first at 0.
std::vector<double> gen_arrivals(int graph_count, const ArrivalProcess& process,
                                 std::mt19937_64& rng);

// Mean edge communication time divided by mean task computation time on the
// given network.
double measured_ccr(const TaskGraph& graph, const Network& net);

// Depth-1 out-tree: heavy root, `successor_count` light children, edge sizes
// scaled so measured_ccr(instance, reference) == ccr.
TaskGraph gen_adversarial(int graph_index, double arrival, int successor_count, double ccr,
                          double root_cost, const Network& reference, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Workload specs
// ---------------------------------------------------------------------------

struct IntRange {
    int lo = 1;
    int hi = 1;
};

struct SyntheticSpec {
    int graph_count = 100;
    // out_tree, in_tree, fork_join, chain
    std::array<double, 4> topology_mix = {0.25, 0.25, 0.25, 0.25};
    IntRange levels{2, 4};
    IntRange branching{2, 3};
    IntRange fork_width{2, 4};
    IntRange fork_stages{1, 2};
    IntRange chain_length{3, 8};
    TruncatedGaussianMixture task_cost;
    TruncatedGaussianMixture edge_size;
    int node_count = 4;
    TruncatedGaussianMixture node_speed;
    TruncatedGaussianMixture link_strength;
    ArrivalProcess arrivals = ArrivalProcess::poisson(0.05);
};

struct AdversarialSpec {
    int graph_count = 20;
    int successor_count = 16;
    double root_cost = 100.0;
    double ccr = 0.2;
    int node_count = 2;
    TruncatedGaussianMixture node_speed;
    TruncatedGaussianMixture link_strength;
    ArrivalProcess arrivals = ArrivalProcess::fixed_interval(30.0);
};

struct WorkloadSpec {
    std::variant<SyntheticSpec, AdversarialSpec> shape;
    std::uint64_t seed = 0;

    static WorkloadSpec default_synthetic();
    static WorkloadSpec default_adversarial();
};

struct Workload {
    Network network;
    std::vector<TaskGraph> graphs;
};

Workload generate_workload(const WorkloadSpec& spec);
Workload generate_workload(WorkloadSpec spec, std::uint64_t seed_override);

// ---------------------------------------------------------------------------
// Workflow JSON (network + graphs trace files)
// ---------------------------------------------------------------------------

Workload load_workflow_json(const std::filesystem::path& path);
void save_workflow_json(const Workload& workload, const std::filesystem::path& path);

// Config-file form of WorkloadSpec (JSON object).
WorkloadSpec workload_spec_from_json(const nlohmann::json& root);
WorkloadSpec workload_spec_from_json_file(const std::filesystem::path& path);

}  // namespace presched
