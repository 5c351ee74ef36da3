#include "presched/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace presched {

std::string to_string(TaskId id) {
    std::ostringstream out;
    out << 'g' << id.graph_index << ".t" << id.local_id;
    return out.str();
}

const Task* TaskGraph::find_task(TaskId id) const {
    // Fresh graphs index tasks by local_id; merged graphs may not.
    if (id.local_id >= 0 && id.local_id < static_cast<int>(tasks.size()) &&
        tasks[id.local_id].id == id) {
        return &tasks[id.local_id];
    }
    for (const Task& t : tasks) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

TaskGraph make_graph(int graph_index, const std::vector<double>& costs,
                     const std::vector<std::tuple<int, int, double>>& edges,
                     double arrival) {
    TaskGraph g;
    g.arrival_time = arrival;
    g.tasks.reserve(costs.size());
    for (std::size_t i = 0; i < costs.size(); ++i) {
        g.tasks.push_back(Task{TaskId{graph_index, static_cast<int>(i)}, costs[i], arrival});
    }
    for (const auto& [src, dst, size] : edges) {
        g.dependencies.push_back(Dependency{TaskId{graph_index, src},
                                            TaskId{graph_index, dst}, size});
    }
    check_task_graph(g);
    return g;
}

void check_task_graph(const TaskGraph& graph) {
    if (graph.arrival_time < 0.0) {
        throw Error("task graph arrival time must be nonnegative");
    }
    std::set<TaskId> ids;
    for (const Task& t : graph.tasks) {
        if (!(t.cost > 0.0)) {
            throw ValidationError("task " + to_string(t.id) + " has nonpositive cost");
        }
        if (t.release < 0.0) {
            throw ValidationError("task " + to_string(t.id) + " has negative release time");
        }
        if (!ids.insert(t.id).second) {
            throw Error("duplicate task id " + to_string(t.id));
        }
    }
    for (const Dependency& d : graph.dependencies) {
        if (!(d.data_size > 0.0)) {
            throw ValidationError("edge " + to_string(d.src) + " -> " + to_string(d.dst) +
                                  " has nonpositive data size");
        }
        if (!ids.count(d.src) || !ids.count(d.dst)) {
            throw Error("edge " + to_string(d.src) + " -> " + to_string(d.dst) +
                        " references a task outside the graph");
        }
    }
    topological_order(graph);  // throws CycleError on cycles
}

Network::Network(std::vector<NetworkNode> nodes,
                 const std::vector<std::tuple<int, int, double>>& links)
    : nodes_(std::move(nodes)) {
    const int n = node_count();
    if (n < 1) throw Error("network needs at least one node");
    std::set<std::string_view> names;
    for (const NetworkNode& node : nodes_) {
        if (!(node.speed > 0.0)) {
            throw ValidationError("node " + node.name + " has nonpositive speed");
        }
        if (!names.insert(node.name).second) {
            throw Error("duplicate node name " + node.name);
        }
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    strength_.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int v = 0; v < n; ++v) strength_[static_cast<std::size_t>(v) * n + v] = inf;
    for (const auto& [a, b, s] : links) {
        if (a < 0 || a >= n || b < 0 || b >= n) throw Error("link endpoint out of range");
        if (a == b) throw Error("self-links are implicit and must not be given");
        if (!(s > 0.0)) {
            throw ValidationError("link " + nodes_[a].name + " -- " + nodes_[b].name +
                                  " has nonpositive strength");
        }
        strength_[static_cast<std::size_t>(a) * n + b] = s;
        strength_[static_cast<std::size_t>(b) * n + a] = s;
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (strength_[static_cast<std::size_t>(a) * n + b] == 0.0) {
                throw Error("network is not complete: missing link " + nodes_[a].name +
                            " -- " + nodes_[b].name);
            }
        }
    }
}

Network Network::homogeneous(int node_count, double speed, double strength) {
    std::vector<NetworkNode> nodes;
    nodes.reserve(node_count);
    for (int v = 0; v < node_count; ++v) {
        nodes.push_back(NetworkNode{"n" + std::to_string(v), speed});
    }
    std::vector<std::tuple<int, int, double>> links;
    for (int a = 0; a < node_count; ++a) {
        for (int b = a + 1; b < node_count; ++b) links.emplace_back(a, b, strength);
    }
    return Network(std::move(nodes), links);
}

const NetworkNode& Network::node(int v) const {
    if (v < 0 || v >= node_count()) {
        throw LookupError("unknown node index " + std::to_string(v));
    }
    return nodes_[v];
}

int Network::index_of(std::string_view name) const {
    for (int v = 0; v < node_count(); ++v) {
        if (nodes_[v].name == name) return v;
    }
    throw LookupError("unknown node " + std::string(name));
}

double Network::speed(int v) const { return node(v).speed; }

double Network::strength(int a, int b) const {
    node(a);
    node(b);
    return strength_[static_cast<std::size_t>(a) * node_count() + b];
}

double Network::mean_inverse_speed() const {
    double sum = 0.0;
    for (const NetworkNode& n : nodes_) sum += 1.0 / n.speed;
    return sum / node_count();
}

double Network::mean_inverse_strength() const {
    const int n = node_count();
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a != b) sum += 1.0 / strength(a, b);
        }
    }
    return sum / (static_cast<double>(n) * (n - 1));
}

double exec_time(double cost, double speed) { return cost / speed; }

double exec_time(TaskId task, int node, const std::vector<TaskGraph>& graphs,
                 const Network& net) {
    if (task.graph_index < 0 || task.graph_index >= static_cast<int>(graphs.size())) {
        throw LookupError("unknown task " + to_string(task));
    }
    const Task* t = graphs[task.graph_index].find_task(task);
    if (!t) throw LookupError("unknown task " + to_string(task));
    return exec_time(t->cost, net.speed(node));
}

double comm_time(double data_size, int src_node, int dst_node, const Network& net) {
    if (src_node == dst_node) {
        net.node(src_node);
        return 0.0;
    }
    return data_size / net.strength(src_node, dst_node);
}

double comm_time(TaskId src, TaskId dst, int src_node, int dst_node,
                 const std::vector<TaskGraph>& graphs, const Network& net) {
    if (src.graph_index < 0 || src.graph_index >= static_cast<int>(graphs.size())) {
        throw LookupError("unknown edge " + to_string(src) + " -> " + to_string(dst));
    }
    for (const Dependency& d : graphs[src.graph_index].dependencies) {
        if (d.src == src && d.dst == dst) {
            return comm_time(d.data_size, src_node, dst_node, net);
        }
    }
    throw LookupError("unknown edge " + to_string(src) + " -> " + to_string(dst));
}

std::string ValidationReport::summary(std::size_t max_items) const {
    if (ok()) return "ok";
    std::ostringstream out;
    out << violations.size() << " violation(s)";
    for (std::size_t i = 0; i < violations.size() && i < max_items; ++i) {
        out << "\n  [" << violations[i].constraint << "] " << violations[i].detail;
    }
    if (violations.size() > max_items) out << "\n  ...";
    return out.str();
}

ValidationReport validate_schedule(const Schedule& schedule,
                                   const std::vector<TaskGraph>& graphs,
                                   const Network& net) {
    ValidationReport report;
    auto add = [&report](int constraint, std::vector<TaskId> tasks, std::string detail) {
        report.violations.push_back(Violation{constraint, std::move(tasks), std::move(detail)});
    };

    // 1: every task of every graph has exactly one well-formed assignment
    std::set<TaskId> known;
    for (const TaskGraph& g : graphs) {
        for (const Task& t : g.tasks) {
            known.insert(t.id);
            auto it = schedule.assignments.find(t.id);
            if (it == schedule.assignments.end()) {
                add(1, {t.id}, "task " + to_string(t.id) + " is not scheduled");
                continue;
            }
            const Assignment& a = it->second;
            if (a.node < 0 || a.node >= net.node_count()) {
                add(1, {t.id}, "task " + to_string(t.id) + " is assigned to an unknown node");
            }
            if (a.start < 0.0 || a.start > a.finish) {
                add(1, {t.id}, "task " + to_string(t.id) + " has an invalid interval");
            }
        }
    }
    for (const auto& [id, a] : schedule.assignments) {
        (void)a;
        if (!known.count(id)) {
            add(1, {id}, "assignment for unknown task " + to_string(id));
        }
    }

    // Ill-formed assignments are reported under constraint 1 and excluded
    // from the remaining checks.
    auto assignment_of = [&](TaskId id) -> const Assignment* {
        auto it = schedule.assignments.find(id);
        if (it == schedule.assignments.end()) return nullptr;
        const Assignment& a = it->second;
        if (a.node < 0 || a.node >= net.node_count()) return nullptr;
        if (a.start < 0.0 || a.start > a.finish) return nullptr;
        return &a;
    };

    // 2: finish - start == c(t)/s(v), relative tolerance
    for (const TaskGraph& g : graphs) {
        for (const Task& t : g.tasks) {
            const Assignment* a = assignment_of(t.id);
            if (!a) continue;
            const double expected = exec_time(t.cost, net.speed(a->node));
            const double actual = a->finish - a->start;
            if (std::abs(actual - expected) > kTimeSlack * std::max(1.0, expected)) {
                std::ostringstream msg;
                msg << "task " << to_string(t.id) << " duration " << actual
                    << " != " << expected;
                add(2, {t.id}, msg.str());
            }
        }
    }

    // 3: per node, intervals do not overlap
    std::vector<std::vector<const Assignment*>> per_node(net.node_count());
    for (const auto& [id, a] : schedule.assignments) {
        (void)a;
        if (!known.count(id)) continue;
        if (const Assignment* valid = assignment_of(id)) per_node[valid->node].push_back(valid);
    }
    for (auto& assignments : per_node) {
        std::sort(assignments.begin(), assignments.end(),
                  [](const Assignment* x, const Assignment* y) {
                      return std::tie(x->start, x->finish, x->task) <
                             std::tie(y->start, y->finish, y->task);
                  });
        const Assignment* running = nullptr;
        for (const Assignment* a : assignments) {
            if (running && a->start < running->finish - kTimeSlack) {
                add(3, {running->task, a->task},
                    "tasks " + to_string(running->task) + " and " + to_string(a->task) +
                        " overlap on node " + net.node(a->node).name);
            }
            if (!running || a->finish > running->finish) running = a;
        }
    }

    // 4: no start before the owning graph's arrival
    for (const TaskGraph& g : graphs) {
        for (const Task& t : g.tasks) {
            const Assignment* a = assignment_of(t.id);
            if (!a) continue;
            if (a->start < g.arrival_time - kTimeSlack) {
                std::ostringstream msg;
                msg << "task " << to_string(t.id) << " starts at " << a->start
                    << " before arrival " << g.arrival_time;
                add(4, {t.id}, msg.str());
            }
        }
    }

    // 5: dependency output must be communicated before the successor starts
    for (const TaskGraph& g : graphs) {
        for (const Dependency& d : g.dependencies) {
            const Assignment* src = assignment_of(d.src);
            const Assignment* dst = assignment_of(d.dst);
            if (!src || !dst) continue;
            const double ready = src->finish + comm_time(d.data_size, src->node, dst->node, net);
            if (ready > dst->start + kTimeSlack) {
                std::ostringstream msg;
                msg << "dependency " << to_string(d.src) << " -> " << to_string(d.dst)
                    << " data ready at " << ready << " after start " << dst->start;
                add(5, {d.src, d.dst}, msg.str());
            }
        }
    }

    return report;
}

std::vector<TaskId> topological_order(const TaskGraph& graph) {
    const std::size_t n = graph.tasks.size();
    std::map<TaskId, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[graph.tasks[i].id] = i;

    std::vector<int> indegree(n, 0);
    std::vector<std::vector<std::size_t>> succs(n);
    for (const Dependency& d : graph.dependencies) {
        succs[index.at(d.src)].push_back(index.at(d.dst));
        ++indegree[index.at(d.dst)];
    }

    std::priority_queue<TaskId, std::vector<TaskId>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push(graph.tasks[i].id);
    }

    std::vector<TaskId> order;
    order.reserve(n);
    while (!ready.empty()) {
        const TaskId id = ready.top();
        ready.pop();
        order.push_back(id);
        for (std::size_t s : succs[index.at(id)]) {
            if (--indegree[s] == 0) ready.push(graph.tasks[s].id);
        }
    }

    if (order.size() != n) {
        // Walk predecessors among the leftover tasks until one repeats.
        std::vector<std::vector<std::size_t>> preds(n);
        for (const Dependency& d : graph.dependencies) {
            preds[index.at(d.dst)].push_back(index.at(d.src));
        }
        std::size_t cur = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (indegree[i] > 0) cur = i;
        }
        std::vector<std::size_t> path;
        std::vector<int> seen_at(n, -1);
        while (seen_at[cur] < 0) {
            seen_at[cur] = static_cast<int>(path.size());
            path.push_back(cur);
            for (std::size_t p : preds[cur]) {
                if (indegree[p] > 0) {
                    cur = p;
                    break;
                }
            }
        }
        std::vector<TaskId> cycle;
        for (std::size_t i = path.size(); i-- > static_cast<std::size_t>(seen_at[cur]);) {
            cycle.push_back(graph.tasks[path[i]].id);  // reversed = edge direction
        }
        std::ostringstream msg;
        msg << "dependency cycle:";
        for (const TaskId& id : cycle) msg << ' ' << to_string(id) << " ->";
        msg << ' ' << to_string(cycle.front());
        throw CycleError(msg.str(), std::move(cycle));
    }
    return order;
}

TaskGraph merge_graphs(const std::vector<TaskGraph>& fragments) {
    TaskGraph merged;
    merged.arrival_time = fragments.empty() ? 0.0 : fragments.front().arrival_time;
    std::set<TaskId> ids;
    for (const TaskGraph& g : fragments) {
        merged.arrival_time = std::min(merged.arrival_time, g.arrival_time);
        for (const Task& t : g.tasks) {
            if (!ids.insert(t.id).second) {
                throw Error("merge: duplicate task id " + to_string(t.id));
            }
            merged.tasks.push_back(t);
        }
        merged.dependencies.insert(merged.dependencies.end(), g.dependencies.begin(),
                                   g.dependencies.end());
    }
    return merged;
}

}  // namespace presched
