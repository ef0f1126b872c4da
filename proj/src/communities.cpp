#include "fieldlens/communities.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <unordered_map>

#include "fieldlens/errors.hpp"

namespace fieldlens {

int Partition::community_count() const {
    std::set<int> ids;
    for (const auto& [doi, c] : assignment) ids.insert(c);
    return static_cast<int>(ids.size());
}

namespace {

// Undirected weighted projection; self-loops appear at aggregation levels.
struct WeightedGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // no self entries
    std::vector<double> self_weight;  // each loop counted once
    std::vector<double> degree;       // k_i = sum_j w_ij + 2 * self_weight[i]
    double total_weight = 0;          // sum of edge + self weights, each once

    void finish_degrees() {
        degree.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [j, w] : adj[i]) degree[i] += w;
            degree[i] += 2.0 * self_weight[i];
        }
    }
};

WeightedGraph project(const CitationGraph& g) {
    WeightedGraph w;
    w.n = g.node_count();
    w.adj.resize(w.n);
    w.self_weight.assign(w.n, 0);
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> acc;
    for (const auto& [u, v] : g.edges()) {
        auto lo = std::min(u, v), hi = std::max(u, v);
        acc[{lo, hi}] += 1.0;  // multiplicity of directed edges becomes the weight
    }
    for (const auto& [e, wt] : acc) {
        w.adj[e.first].emplace_back(e.second, wt);
        w.adj[e.second].emplace_back(e.first, wt);
        w.total_weight += wt;
    }
    w.finish_degrees();
    return w;
}

// Deterministic Fisher-Yates; std::shuffle is implementation-defined.
void seeded_shuffle(std::vector<std::uint32_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng() % i]);
}

// One local-moving phase. Gain of adding node v (removed from its community)
// to community c is proportional to w(v,c) - resolution * sum_tot(c) * k_v / 2W.
// Ties break toward the lowest community id. Returns whether any node moved.
bool local_move(const WeightedGraph& g, std::vector<int>& comm, std::mt19937_64& rng,
                double resolution) {
    const double two_w = 2.0 * g.total_weight;
    if (two_w <= 0) return false;

    std::vector<double> sum_tot(g.n, 0);
    for (std::size_t i = 0; i < g.n; ++i) sum_tot[comm[i]] += g.degree[i];

    std::vector<std::uint32_t> order(g.n);
    std::iota(order.begin(), order.end(), 0u);
    seeded_shuffle(order, rng);

    bool any_move = false;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t v : order) {
            const int cv = comm[v];
            std::map<int, double> w_to;  // ordered: ascending community id
            w_to[cv];                    // current community is always a candidate
            for (const auto& [u, wt] : g.adj[v]) w_to[comm[u]] += wt;

            sum_tot[cv] -= g.degree[v];
            int best_c = cv;
            double best_gain = -std::numeric_limits<double>::infinity();
            for (const auto& [c, wt] : w_to) {
                const double gain = wt - resolution * sum_tot[c] * g.degree[v] / two_w;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_c = c;
                }
            }
            sum_tot[best_c] += g.degree[v];
            if (best_c != cv) {
                comm[v] = best_c;
                changed = true;
                any_move = true;
            }
        }
    }
    return any_move;
}

// Dense community ids in order of first appearance over node index.
std::vector<int> dense_renumber(const std::vector<int>& comm, int& count) {
    std::unordered_map<int, int> remap;
    std::vector<int> dense(comm.size());
    int next = 0;
    for (std::size_t i = 0; i < comm.size(); ++i) {
        auto [it, inserted] = remap.try_emplace(comm[i], next);
        if (inserted) ++next;
        dense[i] = it->second;
    }
    count = next;
    return dense;
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<int>& dense, int count) {
    WeightedGraph out;
    out.n = static_cast<std::size_t>(count);
    out.adj.resize(out.n);
    out.self_weight.assign(out.n, 0);
    for (std::size_t i = 0; i < g.n; ++i) out.self_weight[dense[i]] += g.self_weight[i];
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> acc;
    for (std::size_t i = 0; i < g.n; ++i) {
        for (const auto& [j, wt] : g.adj[i]) {
            if (j < i) continue;  // each undirected edge once
            auto cu = static_cast<std::uint32_t>(dense[i]);
            auto cv = static_cast<std::uint32_t>(dense[j]);
            if (cu == cv) {
                out.self_weight[cu] += wt;
            } else {
                auto lo = std::min(cu, cv), hi = std::max(cu, cv);
                acc[{lo, hi}] += wt;
            }
        }
    }
    for (const auto& [e, wt] : acc) {
        out.adj[e.first].emplace_back(e.second, wt);
        out.adj[e.second].emplace_back(e.first, wt);
    }
    out.total_weight = g.total_weight;
    out.finish_degrees();
    return out;
}

double modularity_of(const WeightedGraph& g, const std::vector<int>& comm, double resolution) {
    const double two_w = 2.0 * g.total_weight;
    if (two_w <= 0) return 0;
    std::unordered_map<int, double> s_in, s_tot;
    for (std::size_t i = 0; i < g.n; ++i) {
        s_tot[comm[i]] += g.degree[i];
        s_in[comm[i]] += 2.0 * g.self_weight[i];
        for (const auto& [j, wt] : g.adj[i])
            if (comm[j] == comm[i]) s_in[comm[i]] += wt;  // ordered pairs: counted from both ends
    }
    double q = 0;
    for (const auto& [c, tot] : s_tot) {
        const double in = s_in.count(c) ? s_in.at(c) : 0.0;
        q += in / two_w - resolution * (tot / two_w) * (tot / two_w);
    }
    return q;
}

}  // namespace

double partition_modularity(const CitationGraph& g, const std::map<std::string, int>& assignment,
                            double resolution) {
    WeightedGraph w = project(g);
    std::vector<int> comm(g.node_count(), 0);
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
        auto it = assignment.find(g.node(i).doi);
        if (it == assignment.end())
            throw Error("partition does not cover node " + g.node(i).doi);
        comm[i] = it->second;
    }
    return modularity_of(w, comm, resolution);
}

Partition louvain(const CitationGraph& g, double resolution, std::uint64_t seed) {
    if (g.empty()) throw EmptyGraph("louvain needs a non-empty graph");

    const WeightedGraph level0 = project(g);
    WeightedGraph level = level0;
    std::mt19937_64 rng(seed);

    std::vector<int> full(g.node_count());
    std::iota(full.begin(), full.end(), 0);

    Partition part;
    part.seed = seed;
    part.resolution = resolution;

    while (true) {
        std::vector<int> comm(level.n);
        std::iota(comm.begin(), comm.end(), 0);
        const bool improved = local_move(level, comm, rng, resolution);

        int count = 0;
        std::vector<int> dense = dense_renumber(comm, count);
        for (auto& f : full) f = dense[f];
        part.level_modularity.push_back(modularity_of(level0, full, resolution));

        if (!improved || static_cast<std::size_t>(count) == level.n) break;
        level = aggregate(level, dense, count);
    }

    // contiguous ids in DOI order of the original nodes
    int final_count = 0;
    std::vector<int> final_ids = dense_renumber(full, final_count);
    for (std::uint32_t i = 0; i < g.node_count(); ++i)
        part.assignment[g.node(i).doi] = final_ids[i];
    part.modularity = modularity_of(level0, final_ids, resolution);
    return part;
}

ComponentReport components(const CitationGraph& g) {
    ComponentReport report;
    const auto n = g.node_count();
    std::vector<int> comp(n, -1);
    int next = 0;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (comp[s] != -1) continue;
        comp[s] = next;
        std::queue<std::uint32_t> q;
        q.push(s);
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            auto visit = [&](std::uint32_t v) {
                if (comp[v] == -1) {
                    comp[v] = next;
                    q.push(v);
                }
            };
            for (auto v : g.out_neighbors(u)) visit(v);
            for (auto v : g.in_neighbors(u)) visit(v);
        }
        ++next;
    }
    std::vector<std::pair<std::size_t, std::size_t>> sizes(next, {0, 0});
    for (std::uint32_t i = 0; i < n; ++i) ++sizes[comp[i]].first;
    for (const auto& [u, v] : g.edges()) ++sizes[comp[u]].second;
    std::sort(sizes.begin(), sizes.end(), [](const auto& l, const auto& r) {
        return l.first != r.first ? l.first > r.first : l.second > r.second;
    });
    report.component_count = static_cast<std::size_t>(next);
    report.sizes = std::move(sizes);
    return report;
}

}  // namespace fieldlens
