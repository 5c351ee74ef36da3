#include "presched/workloads.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "presched/rng.hpp"

namespace presched {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Mixtures
// ---------------------------------------------------------------------------

TruncatedGaussianMixture TruncatedGaussianMixture::single(double mean, double stddev,
                                                          double lower, double upper) {
    TruncatedGaussianMixture m;
    m.components = {MixtureComponent{1.0, mean, stddev}};
    m.lower = lower;
    m.upper = upper;
    return m;
}

void check_mixture(const TruncatedGaussianMixture& mixture) {
    if (mixture.components.empty()) throw Error("mixture has no components");
    double total = 0.0;
    for (const MixtureComponent& c : mixture.components) {
        if (c.weight < 0.0) throw Error("mixture component weight must be nonnegative");
        if (c.stddev < 0.0) throw Error("mixture component stddev must be nonnegative");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "mixture weights sum to " << total << ", expected 1";
        throw Error(msg.str());
    }
    if (!(mixture.lower > 0.0)) throw Error("mixture lower bound must be positive");
    if (!(mixture.lower < mixture.upper)) throw Error("mixture bounds must satisfy lower < upper");
}

double sample_mixture(const TruncatedGaussianMixture& mixture, std::mt19937_64& rng) {
    constexpr int kMaxRejections = 1'000'000;
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        const double pick = uniform01(rng);
        double cumulative = 0.0;
        const MixtureComponent* component = &mixture.components.back();
        for (const MixtureComponent& c : mixture.components) {
            cumulative += c.weight;
            if (pick < cumulative) {
                component = &c;
                break;
            }
        }
        const double value = component->mean + component->stddev * standard_normal(rng);
        if (value >= mixture.lower && value <= mixture.upper) return value;
    }
    throw Error("mixture sampling starved: bounds exclude essentially all mass");
}

// ---------------------------------------------------------------------------
// Topologies
// ---------------------------------------------------------------------------

TopologyKind parse_topology(std::string_view name) {
    if (name == "out_tree") return TopologyKind::OutTree;
    if (name == "in_tree") return TopologyKind::InTree;
    if (name == "fork_join") return TopologyKind::ForkJoin;
    if (name == "chain") return TopologyKind::Chain;
    throw Error("unknown topology '" + std::string(name) + "'");
}

std::string_view topology_name(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::OutTree: return "out_tree";
        case TopologyKind::InTree: return "in_tree";
        case TopologyKind::ForkJoin: return "fork_join";
        case TopologyKind::Chain: return "chain";
    }
    return "?";
}

DagSkeleton gen_out_tree(int levels, int branching) {
    if (levels < 1 || branching < 1) throw Error("out_tree needs levels >= 1, branching >= 1");
    DagSkeleton dag;
    dag.task_count = 1;
    int level_begin = 0;
    int level_size = 1;
    for (int level = 1; level < levels; ++level) {
        const int next_begin = dag.task_count;
        for (int p = 0; p < level_size; ++p) {
            for (int c = 0; c < branching; ++c) {
                dag.edges.emplace_back(level_begin + p, dag.task_count);
                ++dag.task_count;
            }
        }
        level_begin = next_begin;
        level_size *= branching;
    }
    return dag;
}

DagSkeleton gen_in_tree(int levels, int branching) {
    DagSkeleton dag = gen_out_tree(levels, branching);
    for (auto& [src, dst] : dag.edges) std::swap(src, dst);
    return dag;
}

DagSkeleton gen_fork_join(int width, int stages) {
    if (width < 1 || stages < 1) throw Error("fork_join needs width >= 1, stages >= 1");
    DagSkeleton dag;
    dag.task_count = 1;  // source
    int join = 0;
    for (int stage = 0; stage < stages; ++stage) {
        const int first_parallel = dag.task_count;
        dag.task_count += width + 1;  // parallel tasks plus the stage's sink
        const int sink = dag.task_count - 1;
        for (int w = 0; w < width; ++w) {
            dag.edges.emplace_back(join, first_parallel + w);
            dag.edges.emplace_back(first_parallel + w, sink);
        }
        join = sink;
    }
    return dag;
}

DagSkeleton gen_chain(int length) {
    if (length < 1) throw Error("chain needs length >= 1");
    DagSkeleton dag;
    dag.task_count = length;
    for (int i = 0; i + 1 < length; ++i) dag.edges.emplace_back(i, i + 1);
    return dag;
}

// ---------------------------------------------------------------------------
// Networks and arrivals
// ---------------------------------------------------------------------------

Network gen_network(int node_count, const TruncatedGaussianMixture& speed,
                    const TruncatedGaussianMixture& strength, std::mt19937_64& rng) {
    if (node_count < 1) throw Error("network needs at least one node");
    check_mixture(speed);
    check_mixture(strength);
    std::vector<NetworkNode> nodes;
    nodes.reserve(node_count);
    for (int v = 0; v < node_count; ++v) {
        nodes.push_back(NetworkNode{"n" + std::to_string(v), sample_mixture(speed, rng)});
    }
    std::vector<std::tuple<int, int, double>> links;
    for (int a = 0; a < node_count; ++a) {
        for (int b = a + 1; b < node_count; ++b) {
            links.emplace_back(a, b, sample_mixture(strength, rng));
        }
    }
    return Network(std::move(nodes), links);
}

ArrivalProcess ArrivalProcess::poisson(double rate) {
    if (!(rate > 0.0)) throw Error("Poisson arrival rate must be positive");
    return {Kind::Poisson, rate};
}

ArrivalProcess ArrivalProcess::fixed_interval(double interval) {
    if (!(interval > 0.0)) throw Error("arrival interval must be positive");
    return {Kind::FixedInterval, interval};
}

std::vector<double> gen_arrivals(int graph_count, const ArrivalProcess& process,
                                 std::mt19937_64& rng) {
    if (graph_count < 0) throw Error("graph count must be nonnegative");
    std::vector<double> times;
    times.reserve(graph_count);
    if (process.kind == ArrivalProcess::Kind::FixedInterval) {
        for (int i = 0; i < graph_count; ++i) times.push_back(i * process.value);
        return times;
    }
    double t = 0.0;
    for (int i = 0; i < graph_count; ++i) {
        times.push_back(t);
        t += -std::log(1.0 - uniform01(rng)) / process.value;
    }
    return times;
}

// ---------------------------------------------------------------------------
// Adversarial instances
// ---------------------------------------------------------------------------

double measured_ccr(const TaskGraph& graph, const Network& net) {
    if (graph.tasks.empty()) throw Error("CCR is undefined for an empty graph");
    double total_cost = 0.0;
    for (const Task& t : graph.tasks) total_cost += t.cost;
    const double mean_comp = net.mean_inverse_speed() * total_cost / graph.tasks.size();
    if (graph.dependencies.empty()) return 0.0;
    double total_size = 0.0;
    for (const Dependency& d : graph.dependencies) total_size += d.data_size;
    const double mean_comm =
        net.mean_inverse_strength() * total_size / graph.dependencies.size();
    return mean_comm / mean_comp;
}

TaskGraph gen_adversarial(int graph_index, double arrival, int successor_count, double ccr,
                          double root_cost, const Network& reference, std::mt19937_64& rng) {
    if (successor_count < 1) throw Error("adversarial instance needs at least one successor");
    if (!(ccr > 0.0)) throw Error("CCR must be positive");
    if (!(root_cost > 0.0)) throw Error("root cost must be positive");
    if (reference.node_count() < 2) {
        throw Error("CCR calibration needs a reference network with at least two nodes");
    }

    std::vector<double> costs;
    costs.reserve(successor_count + 1);
    costs.push_back(root_cost);
    const double child_cost = root_cost / successor_count;
    for (int c = 0; c < successor_count; ++c) {
        costs.push_back(child_cost * (0.9 + 0.2 * uniform01(rng)));
    }

    std::vector<std::tuple<int, int, double>> edges;
    edges.reserve(successor_count);
    double total_size = 0.0;
    for (int c = 0; c < successor_count; ++c) {
        const double base = 0.5 + uniform01(rng);
        edges.emplace_back(0, c + 1, base);
        total_size += base;
    }

    // Scale all edge sizes so the measured CCR on the reference network is
    // exactly the target (the ratio is linear in the common scale factor).
    double total_cost = 0.0;
    for (double c : costs) total_cost += c;
    const double mean_comp = reference.mean_inverse_speed() * total_cost / costs.size();
    const double mean_comm_base =
        reference.mean_inverse_strength() * total_size / successor_count;
    const double scale = ccr * mean_comp / mean_comm_base;
    for (auto& [src, dst, size] : edges) {
        (void)src;
        (void)dst;
        size *= scale;
    }

    return make_graph(graph_index, costs, edges, arrival);
}

// ---------------------------------------------------------------------------
// Workload specs
// ---------------------------------------------------------------------------

WorkloadSpec WorkloadSpec::default_synthetic() {
    SyntheticSpec s;
    s.task_cost.components = {{0.2, 10, 3}, {0.2, 20, 5}, {0.2, 30, 6}, {0.2, 40, 6}, {0.2, 50, 8}};
    s.task_cost.lower = 1.0;
    s.task_cost.upper = 100.0;
    s.edge_size.components = {{0.2, 4, 1}, {0.2, 8, 2}, {0.2, 12, 3}, {0.2, 16, 3}, {0.2, 20, 4}};
    s.edge_size.lower = 0.5;
    s.edge_size.upper = 60.0;
    s.node_speed = TruncatedGaussianMixture::single(1.0, 0.25, 0.4, 2.0);
    s.link_strength = TruncatedGaussianMixture::single(1.0, 0.25, 0.4, 2.0);
    WorkloadSpec spec;
    spec.shape = s;
    spec.seed = 1;
    return spec;
}

WorkloadSpec WorkloadSpec::default_adversarial() {
    AdversarialSpec a;
    a.node_speed = TruncatedGaussianMixture::single(1.0, 0.1, 0.7, 1.4);
    a.link_strength = TruncatedGaussianMixture::single(1.0, 0.1, 0.7, 1.4);
    WorkloadSpec spec;
    spec.shape = a;
    spec.seed = 1;
    return spec;
}

namespace {

void check_range(const IntRange& r, const char* what) {
    if (r.lo < 1 || r.hi < r.lo) {
        throw Error(std::string(what) + " range must satisfy 1 <= lo <= hi");
    }
}

int sample_range(const IntRange& r, std::mt19937_64& rng) {
    return uniform_int(rng, r.lo, r.hi);
}

TaskGraph graph_from_skeleton(const DagSkeleton& skeleton, int graph_index, double arrival,
                              const TruncatedGaussianMixture& task_cost,
                              const TruncatedGaussianMixture& edge_size,
                              std::mt19937_64& rng) {
    std::vector<double> costs;
    costs.reserve(skeleton.task_count);
    for (int i = 0; i < skeleton.task_count; ++i) costs.push_back(sample_mixture(task_cost, rng));
    std::vector<std::tuple<int, int, double>> edges;
    edges.reserve(skeleton.edges.size());
    for (const auto& [src, dst] : skeleton.edges) {
        edges.emplace_back(src, dst, sample_mixture(edge_size, rng));
    }
    return make_graph(graph_index, costs, edges, arrival);
}

Workload generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    if (spec.graph_count < 1) throw Error("graph count must be positive");
    if (spec.node_count < 1) throw Error("node count must be positive");
    check_range(spec.levels, "levels");
    check_range(spec.branching, "branching");
    check_range(spec.fork_width, "fork_width");
    check_range(spec.fork_stages, "fork_stages");
    check_range(spec.chain_length, "chain_length");
    check_mixture(spec.task_cost);
    check_mixture(spec.edge_size);
    double mix_total = 0.0;
    for (double p : spec.topology_mix) {
        if (p < 0.0) throw Error("topology proportions must be nonnegative");
        mix_total += p;
    }
    if (std::abs(mix_total - 1.0) > 1e-9) throw Error("topology proportions must sum to 1");

    Workload workload;
    std::mt19937_64 net_rng(derive_seed(seed, 1));
    workload.network = gen_network(spec.node_count, spec.node_speed, spec.link_strength, net_rng);
    std::mt19937_64 arrival_rng(derive_seed(seed, 2));
    const std::vector<double> arrivals =
        gen_arrivals(spec.graph_count, spec.arrivals, arrival_rng);

    workload.graphs.reserve(spec.graph_count);
    for (int i = 0; i < spec.graph_count; ++i) {
        std::mt19937_64 rng(derive_seed(seed, 1000 + static_cast<std::uint64_t>(i)));
        const double pick = uniform01(rng);
        DagSkeleton skeleton;
        if (pick < spec.topology_mix[0]) {
            skeleton = gen_out_tree(sample_range(spec.levels, rng),
                                    sample_range(spec.branching, rng));
        } else if (pick < spec.topology_mix[0] + spec.topology_mix[1]) {
            skeleton = gen_in_tree(sample_range(spec.levels, rng),
                                   sample_range(spec.branching, rng));
        } else if (pick < spec.topology_mix[0] + spec.topology_mix[1] + spec.topology_mix[2]) {
            skeleton = gen_fork_join(sample_range(spec.fork_width, rng),
                                     sample_range(spec.fork_stages, rng));
        } else {
            skeleton = gen_chain(sample_range(spec.chain_length, rng));
        }
        workload.graphs.push_back(graph_from_skeleton(skeleton, i, arrivals[i], spec.task_cost,
                                                      spec.edge_size, rng));
    }
    return workload;
}

Workload generate_adversarial(const AdversarialSpec& spec, std::uint64_t seed) {
    if (spec.graph_count < 1) throw Error("graph count must be positive");
    if (spec.node_count < 2) throw Error("adversarial workloads need at least two nodes");

    Workload workload;
    std::mt19937_64 net_rng(derive_seed(seed, 1));
    workload.network = gen_network(spec.node_count, spec.node_speed, spec.link_strength, net_rng);
    std::mt19937_64 arrival_rng(derive_seed(seed, 2));
    const std::vector<double> arrivals =
        gen_arrivals(spec.graph_count, spec.arrivals, arrival_rng);

    workload.graphs.reserve(spec.graph_count);
    for (int i = 0; i < spec.graph_count; ++i) {
        std::mt19937_64 rng(derive_seed(seed, 1000 + static_cast<std::uint64_t>(i)));
        workload.graphs.push_back(gen_adversarial(i, arrivals[i], spec.successor_count,
                                                  spec.ccr, spec.root_cost, workload.network,
                                                  rng));
    }
    return workload;
}

}  // namespace

Workload generate_workload(const WorkloadSpec& spec) {
    if (const auto* s = std::get_if<SyntheticSpec>(&spec.shape)) {
        return generate_synthetic(*s, spec.seed);
    }
    return generate_adversarial(std::get<AdversarialSpec>(spec.shape), spec.seed);
}

Workload generate_workload(WorkloadSpec spec, std::uint64_t seed_override) {
    spec.seed = seed_override;
    return generate_workload(spec);
}

// ---------------------------------------------------------------------------
// Workflow JSON
// ---------------------------------------------------------------------------

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError("missing '" + std::string(key) + "' at " + path);
    }
    return obj.at(key);
}

double require_number(const json& obj, const char* key, const std::string& path) {
    const json& value = require(obj, key, path);
    if (!value.is_number()) {
        throw ParseError("expected a number at " + path + "/" + key);
    }
    return value.get<double>();
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
    const json& value = require(obj, key, path);
    if (!value.is_string()) {
        throw ParseError("expected a string at " + path + "/" + key);
    }
    return value.get<std::string>();
}

const json& require_array(const json& obj, const char* key, const std::string& path) {
    const json& value = require(obj, key, path);
    if (!value.is_array()) {
        throw ParseError("expected an array at " + path + "/" + key);
    }
    return value;
}

Workload workload_from_json(const json& root) {
    const json& net_obj = require(root, "network", "");
    const json& nodes_arr = require_array(net_obj, "nodes", "/network");

    std::vector<NetworkNode> nodes;
    std::map<std::string, int> node_index;
    for (std::size_t i = 0; i < nodes_arr.size(); ++i) {
        const std::string path = "/network/nodes/" + std::to_string(i);
        const std::string id = require_string(nodes_arr[i], "id", path);
        const double speed = require_number(nodes_arr[i], "speed", path);
        if (!node_index.emplace(id, static_cast<int>(i)).second) {
            throw ParseError("duplicate node id '" + id + "' at " + path);
        }
        if (!(speed > 0.0)) {
            throw ValidationError("node '" + id + "' has nonpositive speed");
        }
        nodes.push_back(NetworkNode{id, speed});
    }

    std::vector<std::tuple<int, int, double>> links;
    const json& links_arr = require_array(net_obj, "links", "/network");
    for (std::size_t i = 0; i < links_arr.size(); ++i) {
        const std::string path = "/network/links/" + std::to_string(i);
        const std::string a = require_string(links_arr[i], "a", path);
        const std::string b = require_string(links_arr[i], "b", path);
        const double strength = require_number(links_arr[i], "strength", path);
        if (!node_index.count(a) || !node_index.count(b)) {
            throw ParseError("link references unknown node at " + path);
        }
        if (!(strength > 0.0)) {
            throw ValidationError("link " + a + " -- " + b + " has nonpositive strength");
        }
        links.emplace_back(node_index.at(a), node_index.at(b), strength);
    }

    Workload workload;
    try {
        workload.network = Network(std::move(nodes), links);
    } catch (const Error& e) {
        throw ParseError("invalid network: " + std::string(e.what()));
    }

    const json& graphs_arr = require_array(root, "graphs", "");
    if (graphs_arr.empty()) throw ValidationError("workflow has no graphs");
    for (std::size_t gi = 0; gi < graphs_arr.size(); ++gi) {
        const std::string gpath = "/graphs/" + std::to_string(gi);
        const json& graph_obj = graphs_arr[gi];
        const double arrival = require_number(graph_obj, "arrival", gpath);
        if (arrival < 0.0) {
            throw ValidationError("graph " + std::to_string(gi) + " has negative arrival time");
        }

        const json& tasks_arr = require_array(graph_obj, "tasks", gpath);
        if (tasks_arr.empty()) {
            throw ValidationError("graph " + std::to_string(gi) + " has no tasks");
        }
        std::map<std::string, int> task_index;
        std::vector<double> costs;
        for (std::size_t ti = 0; ti < tasks_arr.size(); ++ti) {
            const std::string tpath = gpath + "/tasks/" + std::to_string(ti);
            const std::string id = require_string(tasks_arr[ti], "id", tpath);
            const double cost = require_number(tasks_arr[ti], "cost", tpath);
            if (!task_index.emplace(id, static_cast<int>(ti)).second) {
                throw ParseError("duplicate task id '" + id + "' at " + tpath);
            }
            if (!(cost > 0.0)) {
                throw ValidationError("task '" + id + "' in graph " + std::to_string(gi) +
                                      " has nonpositive cost");
            }
            costs.push_back(cost);
        }

        std::vector<std::tuple<int, int, double>> edges;
        if (graph_obj.contains("edges")) {
            const json& edges_arr = require_array(graph_obj, "edges", gpath);
            for (std::size_t ei = 0; ei < edges_arr.size(); ++ei) {
                const std::string epath = gpath + "/edges/" + std::to_string(ei);
                const std::string src = require_string(edges_arr[ei], "src", epath);
                const std::string dst = require_string(edges_arr[ei], "dst", epath);
                const double size = require_number(edges_arr[ei], "size", epath);
                if (!task_index.count(src) || !task_index.count(dst)) {
                    throw ParseError("edge references unknown task at " + epath);
                }
                if (!(size > 0.0)) {
                    throw ValidationError("edge " + src + " -> " + dst + " in graph " +
                                          std::to_string(gi) + " has nonpositive size");
                }
                edges.emplace_back(task_index.at(src), task_index.at(dst), size);
            }
        }

        if (!workload.graphs.empty() && arrival < workload.graphs.back().arrival_time) {
            throw ValidationError("graphs must be ordered by nondecreasing arrival time");
        }
        workload.graphs.push_back(
            make_graph(static_cast<int>(gi), costs, edges, arrival));  // may throw CycleError
    }
    return workload;
}

}  // namespace

Workload load_workflow_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return workload_from_json(root);
}

void save_workflow_json(const Workload& workload, const std::filesystem::path& path) {
    json net_obj;
    for (const NetworkNode& n : workload.network.nodes()) {
        net_obj["nodes"].push_back({{"id", n.name}, {"speed", n.speed}});
    }
    net_obj["links"] = json::array();
    for (int a = 0; a < workload.network.node_count(); ++a) {
        for (int b = a + 1; b < workload.network.node_count(); ++b) {
            net_obj["links"].push_back({{"a", workload.network.node(a).name},
                                        {"b", workload.network.node(b).name},
                                        {"strength", workload.network.strength(a, b)}});
        }
    }

    json graphs_arr = json::array();
    for (const TaskGraph& g : workload.graphs) {
        json graph_obj;
        graph_obj["arrival"] = g.arrival_time;
        graph_obj["tasks"] = json::array();
        for (const Task& t : g.tasks) {
            graph_obj["tasks"].push_back({{"id", "t" + std::to_string(t.id.local_id)},
                                          {"cost", t.cost}});
        }
        graph_obj["edges"] = json::array();
        for (const Dependency& d : g.dependencies) {
            graph_obj["edges"].push_back({{"src", "t" + std::to_string(d.src.local_id)},
                                          {"dst", "t" + std::to_string(d.dst.local_id)},
                                          {"size", d.data_size}});
        }
        graphs_arr.push_back(std::move(graph_obj));
    }

    json root;
    root["network"] = std::move(net_obj);
    root["graphs"] = std::move(graphs_arr);

    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << root.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Workload spec config
// ---------------------------------------------------------------------------

namespace {

TruncatedGaussianMixture mixture_from_json(const json& obj, const std::string& path) {
    TruncatedGaussianMixture m;
    const json& comps = require_array(obj, "components", path);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string cpath = path + "/components/" + std::to_string(i);
        m.components.push_back(MixtureComponent{require_number(comps[i], "weight", cpath),
                                                require_number(comps[i], "mean", cpath),
                                                require_number(comps[i], "stddev", cpath)});
    }
    m.lower = require_number(obj, "lower", path);
    m.upper = require_number(obj, "upper", path);
    check_mixture(m);
    return m;
}

IntRange range_from_json(const json& value, const std::string& path) {
    if (value.is_number_integer()) {
        const int v = value.get<int>();
        return IntRange{v, v};
    }
    if (value.is_array() && value.size() == 2 && value[0].is_number_integer() &&
        value[1].is_number_integer()) {
        return IntRange{value[0].get<int>(), value[1].get<int>()};
    }
    throw ParseError("expected an integer or [lo, hi] at " + path);
}

ArrivalProcess arrivals_from_json(const json& obj, const std::string& path) {
    const std::string process = require_string(obj, "process", path);
    if (process == "poisson") {
        return ArrivalProcess::poisson(require_number(obj, "rate", path));
    }
    if (process == "fixed" || process == "fixed_interval") {
        return ArrivalProcess::fixed_interval(require_number(obj, "interval", path));
    }
    throw ParseError("unknown arrival process '" + process + "' at " + path);
}

}  // namespace

WorkloadSpec workload_spec_from_json(const json& root) {
    if (!root.is_object()) throw ParseError("workload spec must be a JSON object");
    const std::string type = root.value("type", "synthetic");
    WorkloadSpec spec;
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer()) {
            throw ParseError("expected an integer at /seed");
        }
        spec.seed = root["seed"].get<std::uint64_t>();
    }

    if (type == "synthetic") {
        SyntheticSpec s = std::get<SyntheticSpec>(WorkloadSpec::default_synthetic().shape);
        s.graph_count = root.value("graph_count", s.graph_count);
        s.node_count = root.value("node_count", s.node_count);
        if (root.contains("topology_mix")) {
            const json& mix = root["topology_mix"];
            s.topology_mix = {mix.value("out_tree", 0.0), mix.value("in_tree", 0.0),
                              mix.value("fork_join", 0.0), mix.value("chain", 0.0)};
        }
        if (root.contains("levels")) s.levels = range_from_json(root["levels"], "/levels");
        if (root.contains("branching")) {
            s.branching = range_from_json(root["branching"], "/branching");
        }
        if (root.contains("fork_width")) {
            s.fork_width = range_from_json(root["fork_width"], "/fork_width");
        }
        if (root.contains("fork_stages")) {
            s.fork_stages = range_from_json(root["fork_stages"], "/fork_stages");
        }
        if (root.contains("chain_length")) {
            s.chain_length = range_from_json(root["chain_length"], "/chain_length");
        }
        if (root.contains("task_cost")) {
            s.task_cost = mixture_from_json(root["task_cost"], "/task_cost");
        }
        if (root.contains("edge_size")) {
            s.edge_size = mixture_from_json(root["edge_size"], "/edge_size");
        }
        if (root.contains("node_speed")) {
            s.node_speed = mixture_from_json(root["node_speed"], "/node_speed");
        }
        if (root.contains("link_strength")) {
            s.link_strength = mixture_from_json(root["link_strength"], "/link_strength");
        }
        if (root.contains("arrivals")) {
            s.arrivals = arrivals_from_json(root["arrivals"], "/arrivals");
        }
        spec.shape = std::move(s);
        return spec;
    }
    if (type == "adversarial") {
        AdversarialSpec a = std::get<AdversarialSpec>(WorkloadSpec::default_adversarial().shape);
        a.graph_count = root.value("graph_count", a.graph_count);
        a.successor_count = root.value("successor_count", a.successor_count);
        a.root_cost = root.value("root_cost", a.root_cost);
        a.ccr = root.value("ccr", a.ccr);
        a.node_count = root.value("node_count", a.node_count);
        if (root.contains("node_speed")) {
            a.node_speed = mixture_from_json(root["node_speed"], "/node_speed");
        }
        if (root.contains("link_strength")) {
            a.link_strength = mixture_from_json(root["link_strength"], "/link_strength");
        }
        if (root.contains("arrivals")) {
            a.arrivals = arrivals_from_json(root["arrivals"], "/arrivals");
        }
        spec.shape = std::move(a);
        return spec;
    }
    throw ParseError("unknown workload type '" + type + "'");
}

WorkloadSpec workload_spec_from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return workload_spec_from_json(root);
}

}  // namespace presched
