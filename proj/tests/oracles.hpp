#pragma once

// Brute-force reference implementations, deliberately independent of the
// library's algorithmic paths. Everything here is O(ugly) and only meant for
// small inputs.

#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "fieldlens/citegraph.hpp"
#include "fieldlens/motifs.hpp"
#include "fieldlens/socionet.hpp"

namespace oracles {

using namespace fieldlens;

/// Merged edges absent from the union of the two field graphs' edge sets.
inline std::size_t cross_edge_count(const CitationGraph& a, const CitationGraph& b,
                                    const CitationGraph& merged) {
    std::set<std::pair<std::string, std::string>> union_edges;
    for (const auto& [u, v] : a.edges()) union_edges.emplace(a.node(u).doi, a.node(v).doi);
    for (const auto& [u, v] : b.edges()) union_edges.emplace(b.node(u).doi, b.node(v).doi);
    std::size_t count = 0;
    for (const auto& [u, v] : merged.edges())
        if (!union_edges.count({merged.node(u).doi, merged.node(v).doi})) ++count;
    return count;
}

/// Triple-loop motif counting: for every boundary node, every (in-edge,
/// out-edge) pair and every same-direction cross-field pair, classified from
/// scratch.
inline std::map<MotifKind, std::size_t> motif_counts(const CitationGraph& g) {
    std::map<MotifKind, std::size_t> counts;
    for (MotifKind k : all_motif_kinds()) counts[k] = 0;

    auto is_a = [&](std::uint32_t i) {
        return g.node(i).in_field_a && !g.node(i).in_field_b;
    };
    auto is_b = [&](std::uint32_t i) {
        return g.node(i).in_field_b && !g.node(i).in_field_a;
    };
    auto is_bd = [&](std::uint32_t i) { return g.node(i).is_boundary(); };

    const auto& edges = g.edges();
    for (std::uint32_t p = 0; p < g.node_count(); ++p) {
        if (!is_bd(p)) continue;
        for (const auto& [x, p1] : edges) {
            if (p1 != p) continue;
            for (const auto& [p2, y] : edges) {
                if (p2 != p) continue;
                if (is_bd(x) || is_bd(y)) continue;
                if (!is_a(x) && !is_b(x)) continue;
                if (!is_a(y) && !is_b(y)) continue;
                if (is_a(x) && is_b(y)) ++counts[MotifKind::InterDiffusionA2B];
                else if (is_b(x) && is_a(y)) ++counts[MotifKind::InterDiffusionB2A];
                else if (is_a(x) && is_a(y)) ++counts[MotifKind::CircularA];
                else ++counts[MotifKind::CircularB];
            }
        }
        for (const auto& [p1, x] : edges) {
            if (p1 != p || !is_a(x)) continue;
            for (const auto& [p2, y] : edges)
                if (p2 == p && is_b(y)) ++counts[MotifKind::CrossFertilization];
        }
        for (const auto& [x, p1] : edges) {
            if (p1 != p || !is_a(x)) continue;
            for (const auto& [y, p2] : edges)
                if (p2 == p && is_b(y)) ++counts[MotifKind::BoundaryTriggered];
        }
        for (const auto& [p1, q] : edges)
            if (p1 == p && is_bd(q)) ++counts[MotifKind::InterdisciplinaryEmergence];
    }
    return counts;
}

/// Modularity of an assignment, computed straight from the definition over
/// ordered node pairs of the undirected projection.
inline double modularity(const CitationGraph& g, const std::vector<int>& comm,
                         double resolution = 1.0) {
    const auto n = g.node_count();
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (const auto& [u, v] : g.edges()) {
        w[u][v] += 1.0;
        w[v][u] += 1.0;
    }
    double two_w = 0;
    std::vector<double> k(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            two_w += w[i][j];
            k[i] += w[i][j];
        }
    if (two_w <= 0) return 0;
    double q = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (comm[i] == comm[j]) q += w[i][j] / two_w - resolution * k[i] * k[j] / (two_w * two_w);
    return q;
}

/// Exhaustive maximum modularity over all set partitions (restricted growth
/// strings); only sane for n <= 10.
inline double best_partition_modularity(const CitationGraph& g, double resolution = 1.0) {
    const auto n = g.node_count();
    std::vector<int> comm(n, 0);
    double best = -2.0;
    auto recurse = [&](auto&& self, std::size_t i, int max_used) -> void {
        if (i == n) {
            best = std::max(best, modularity(g, comm, resolution));
            return;
        }
        for (int c = 0; c <= max_used + 1; ++c) {
            comm[i] = c;
            self(self, i + 1, std::max(max_used, c));
        }
    };
    if (n == 0) return 0;
    comm[0] = 0;
    recurse(recurse, 1, 0);
    return best;
}

struct SimpleNet {
    std::vector<std::string> ids;
    std::vector<std::vector<int>> adj;
};

inline SimpleNet to_simple(const SocioNetwork& net) {
    SimpleNet out;
    std::map<std::string, int> index;
    for (const auto& [id, name] : net.nodes()) {
        index[id] = static_cast<int>(out.ids.size());
        out.ids.push_back(id);
    }
    out.adj.resize(out.ids.size());
    for (const auto& [key, data] : net.edges()) {
        out.adj[index.at(key.first)].push_back(index.at(key.second));
        out.adj[index.at(key.second)].push_back(index.at(key.first));
    }
    return out;
}

struct BfsResult {
    std::vector<int> dist;
    std::vector<double> sigma;  // number of shortest paths from the source
};

inline BfsResult bfs_paths(const SimpleNet& net, int s) {
    BfsResult r;
    r.dist.assign(net.ids.size(), -1);
    r.sigma.assign(net.ids.size(), 0.0);
    r.dist[s] = 0;
    r.sigma[s] = 1.0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : net.adj[u]) {
            if (r.dist[v] < 0) {
                r.dist[v] = r.dist[u] + 1;
                q.push(v);
            }
            if (r.dist[v] == r.dist[u] + 1) r.sigma[v] += r.sigma[u];
        }
    }
    return r;
}

/// Pair-dependency betweenness: for every unordered pair {s,t} and candidate
/// v, add sigma_sv * sigma_vt / sigma_st when v lies on a shortest path.
inline std::map<std::string, double> betweenness(const SocioNetwork& net) {
    SimpleNet simple = to_simple(net);
    const int n = static_cast<int>(simple.ids.size());
    std::vector<BfsResult> from(n);
    for (int s = 0; s < n; ++s) from[s] = bfs_paths(simple, s);

    std::map<std::string, double> out;
    for (int v = 0; v < n; ++v) {
        double score = 0;
        for (int s = 0; s < n; ++s) {
            if (s == v) continue;
            for (int t = s + 1; t < n; ++t) {
                if (t == v) continue;
                if (from[s].dist[t] < 0) continue;
                if (from[s].dist[v] < 0 || from[v].dist[t] < 0) continue;
                if (from[s].dist[v] + from[v].dist[t] != from[s].dist[t]) continue;
                score += from[s].sigma[v] * from[v].sigma[t] / from[s].sigma[t];
            }
        }
        out[simple.ids[v]] = score;
    }
    return out;
}

inline std::map<std::string, double> closeness(const SocioNetwork& net) {
    SimpleNet simple = to_simple(net);
    const int n = static_cast<int>(simple.ids.size());
    std::map<std::string, double> out;
    for (int s = 0; s < n; ++s) {
        auto r = bfs_paths(simple, s);
        long long sum = 0;
        for (int t = 0; t < n; ++t)
            if (t != s && r.dist[t] > 0) sum += r.dist[t];
        out[simple.ids[s]] = sum > 0 ? 1.0 / static_cast<double>(sum) : 0.0;
    }
    return out;
}

/// Venue-pair weight: authors whose venue sets contain both endpoints.
inline std::size_t venue_pair_weight(const Corpus& corpus, const std::string& v1,
                                     const std::string& v2) {
    std::map<std::string, std::set<std::string>> author_venues;
    for (const auto& [doi, rec] : corpus.papers()) {
        if (!rec.venue) continue;
        for (const auto& a : rec.authors) author_venues[a.author_id].insert(rec.venue->venue_id);
    }
    std::size_t count = 0;
    for (const auto& [author, venues] : author_venues)
        if (venues.count(v1) && venues.count(v2)) ++count;
    return count;
}

}  // namespace oracles
