#include "fieldlens/citegraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "fieldlens/errors.hpp"

namespace fieldlens {

std::string to_string(Scope scope) {
    switch (scope) {
        case Scope::FieldA: return "FIELD_A";
        case Scope::FieldB: return "FIELD_B";
        case Scope::Merged: return "MERGED";
    }
    return "MERGED";
}

Scope parse_scope(std::string_view s) {
    if (s == "FIELD_A") return Scope::FieldA;
    if (s == "FIELD_B") return Scope::FieldB;
    if (s == "MERGED") return Scope::Merged;
    throw ScopeError("unknown scope label: " + std::string(s));
}

std::string to_string(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::IntraA: return "intra_a";
        case EdgeKind::IntraB: return "intra_b";
        case EdgeKind::Cross: return "cross";
        case EdgeKind::BoundaryIncident: return "boundary_incident";
    }
    return "cross";
}

PruneMode parse_prune_mode(std::string_view s) {
    if (s == "fixpoint") return PruneMode::Fixpoint;
    if (s == "single_pass") return PruneMode::SinglePass;
    throw ConfigError("unknown prune mode: " + std::string(s));
}

std::string to_string(PruneMode m) {
    return m == PruneMode::Fixpoint ? "fixpoint" : "single_pass";
}

CitationGraph::Builder& CitationGraph::Builder::add_node(NodeRecord rec) {
    auto [it, inserted] = nodes_.try_emplace(rec.doi, rec);
    if (!inserted) {
        it->second.in_field_a |= rec.in_field_a;
        it->second.in_field_b |= rec.in_field_b;
        it->second.seeded |= rec.seeded;
    }
    return *this;
}

CitationGraph::Builder& CitationGraph::Builder::add_edge(const std::string& citing,
                                                         const std::string& cited) {
    if (citing == cited) return *this;  // self-loops dropped
    if (!nodes_.count(citing) || !nodes_.count(cited))
        throw Error("edge endpoint not added as node: " + citing + " -> " + cited);
    edges_.emplace(citing, cited);
    return *this;
}

CitationGraph CitationGraph::Builder::build() {
    CitationGraph g;
    g.scope_ = scope_;
    g.nodes_.reserve(nodes_.size());
    std::unordered_map<std::string_view, std::uint32_t> index;
    for (auto& [doi, rec] : nodes_) {
        index.emplace(doi, static_cast<std::uint32_t>(g.nodes_.size()));
        g.nodes_.push_back(rec);
    }
    g.edges_.reserve(edges_.size());
    for (const auto& [citing, cited] : edges_)
        g.edges_.emplace_back(index.at(citing), index.at(cited));
    std::sort(g.edges_.begin(), g.edges_.end());

    const auto n = g.nodes_.size();
    std::vector<std::uint32_t> out_count(n, 0), in_count(n, 0);
    for (const auto& [u, v] : g.edges_) {
        ++out_count[u];
        ++in_count[v];
    }
    g.out_offsets_.assign(n + 1, 0);
    g.in_offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        g.out_offsets_[i + 1] = g.out_offsets_[i] + out_count[i];
        g.in_offsets_[i + 1] = g.in_offsets_[i] + in_count[i];
    }
    g.out_targets_.resize(g.edges_.size());
    g.in_sources_.resize(g.edges_.size());
    std::vector<std::uint32_t> out_fill(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
    std::vector<std::uint32_t> in_fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    for (const auto& [u, v] : g.edges_) {
        g.out_targets_[out_fill[u]++] = v;
        g.in_sources_[in_fill[v]++] = u;
    }
    for (std::size_t i = 0; i < n; ++i) {  // sorted neighbor lists
        std::sort(g.in_sources_.begin() + g.in_offsets_[i], g.in_sources_.begin() + g.in_offsets_[i + 1]);
    }
    return g;
}

std::optional<std::uint32_t> CitationGraph::index_of(std::string_view doi) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), doi,
                               [](const NodeRecord& n, std::string_view d) { return n.doi < d; });
    if (it == nodes_.end() || it->doi != doi) return std::nullopt;
    return static_cast<std::uint32_t>(it - nodes_.begin());
}

bool CitationGraph::has_edge(std::string_view citing, std::string_view cited) const {
    auto u = index_of(citing);
    auto v = index_of(cited);
    if (!u || !v) return false;
    auto nb = out_neighbors(*u);
    return std::binary_search(nb.begin(), nb.end(), *v);
}

std::span<const std::uint32_t> CitationGraph::out_neighbors(std::uint32_t i) const {
    return {out_targets_.data() + out_offsets_[i], out_targets_.data() + out_offsets_[i + 1]};
}

std::span<const std::uint32_t> CitationGraph::in_neighbors(std::uint32_t i) const {
    return {in_sources_.data() + in_offsets_[i], in_sources_.data() + in_offsets_[i + 1]};
}

EdgeKind CitationGraph::edge_kind(const Edge& e) const {
    const auto& u = nodes_[e.first];
    const auto& v = nodes_[e.second];
    if (u.is_boundary() || v.is_boundary()) return EdgeKind::BoundaryIncident;
    if (u.in_field_a && v.in_field_a) return EdgeKind::IntraA;
    if (u.in_field_b && v.in_field_b) return EdgeKind::IntraB;
    return EdgeKind::Cross;
}

CitationGraph build_graph(const Corpus& c, Scope scope) {
    if (c.empty()) throw EmptyGraph("corpus is empty");
    if (scope == Scope::Merged)
        return merge_graphs(build_graph(c, Scope::FieldA), build_graph(c, Scope::FieldB), c);

    const std::string& label =
        scope == Scope::FieldA ? c.field_a_label() : c.field_b_label();
    const bool is_a = scope == Scope::FieldA;
    CitationGraph::Builder builder(scope);
    std::size_t seeded = 0;
    for (const auto& [doi, rec] : c.papers()) {
        if (!rec.fields.count(label)) continue;
        ++seeded;
        builder.add_node({doi, is_a, !is_a, true});
        for (const auto& ref : rec.references) {
            builder.add_node({ref, is_a, !is_a, false});
            builder.add_edge(doi, ref);
        }
    }
    if (seeded == 0) throw EmptyGraph("no papers carry field label '" + label + "'");
    return builder.build();
}

CitationGraph prune_leaves(const CitationGraph& g, PruneMode mode) {
    const auto n = g.node_count();
    std::vector<bool> kept(n, true);
    std::vector<std::size_t> degree(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) degree[i] = g.total_degree(i);

    bool removed_any = true;
    while (removed_any) {
        removed_any = false;
        // one removal round: degree-0 nodes, then degree-1 nodes; isolated
        // removals cannot change other degrees, so one degree snapshot serves both
        std::vector<std::uint32_t> gone;
        for (std::uint32_t i = 0; i < n; ++i)
            if (kept[i] && degree[i] < 2) {
                kept[i] = false;
                gone.push_back(i);
                removed_any = true;
            }
        for (std::uint32_t i : gone) {
            for (auto v : g.out_neighbors(i))
                if (kept[v] && degree[v] > 0) --degree[v];
            for (auto u : g.in_neighbors(i))
                if (kept[u] && degree[u] > 0) --degree[u];
        }
        if (mode == PruneMode::SinglePass) break;
    }

    CitationGraph::Builder builder(g.scope());
    for (std::uint32_t i = 0; i < n; ++i)
        if (kept[i]) builder.add_node(g.node(i));
    for (const auto& [u, v] : g.edges())
        if (kept[u] && kept[v]) builder.add_edge(g.node(u).doi, g.node(v).doi);
    return builder.build();
}

CitationGraph merge_graphs(const CitationGraph& a, const CitationGraph& b,
                           const Corpus& full_corpus) {
    if (a.scope() == Scope::Merged || b.scope() == Scope::Merged)
        throw ScopeError("merge_graphs inputs must be field-scoped graphs");

    CitationGraph::Builder builder(Scope::Merged);
    for (const auto& rec : a.nodes()) builder.add_node(rec);
    for (const auto& rec : b.nodes()) builder.add_node(rec);
    for (const auto& [u, v] : a.edges()) builder.add_edge(a.node(u).doi, a.node(v).doi);
    for (const auto& [u, v] : b.edges()) builder.add_edge(b.node(u).doi, b.node(v).doi);

    // cross citations between a-nodes and b-nodes recoverable from the corpus
    for (const auto& [doi, rec] : full_corpus.papers()) {
        const bool p_in_a = a.has_node(doi);
        const bool p_in_b = b.has_node(doi);
        if (!p_in_a && !p_in_b) continue;
        for (const auto& ref : rec.references) {
            if (ref == doi) continue;
            const bool r_in_a = a.has_node(ref);
            const bool r_in_b = b.has_node(ref);
            if ((p_in_a && r_in_b) || (p_in_b && r_in_a)) builder.add_edge(doi, ref);
        }
    }
    return builder.build();
}

CitationGraph induced_subgraph(const CitationGraph& g, const std::set<std::string>& keep) {
    CitationGraph::Builder builder(g.scope());
    for (const auto& rec : g.nodes())
        if (keep.count(rec.doi)) builder.add_node(rec);
    for (const auto& [u, v] : g.edges()) {
        const auto& cu = g.node(u).doi;
        const auto& cv = g.node(v).doi;
        if (keep.count(cu) && keep.count(cv)) builder.add_edge(cu, cv);
    }
    return builder.build();
}

namespace {

DirectionStats stats_of(std::vector<std::size_t> values) {
    DirectionStats s;
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    s.min = static_cast<double>(values.front());
    s.max = static_cast<double>(values.back());
    double sum = std::accumulate(values.begin(), values.end(), 0.0);
    s.mean = sum / n;
    const std::size_t mid = values.size() / 2;
    s.median = values.size() % 2 == 1
                   ? static_cast<double>(values[mid])
                   : (static_cast<double>(values[mid - 1]) + static_cast<double>(values[mid])) / 2.0;
    // mode: most frequent value, smallest wins ties
    std::size_t best_val = values[0], best_count = 0, run_val = values[0], run_count = 0;
    for (std::size_t v : values) {
        if (v == run_val) {
            ++run_count;
        } else {
            run_val = v;
            run_count = 1;
        }
        if (run_count > best_count) {
            best_count = run_count;
            best_val = run_val;
        }
    }
    s.mode = static_cast<double>(best_val);
    double sq = 0;
    for (std::size_t v : values) sq += (static_cast<double>(v) - s.mean) * (static_cast<double>(v) - s.mean);
    s.stddev = std::sqrt(sq / n);
    return s;
}

}  // namespace

DegreeStats degree_stats(const CitationGraph& g, bool nonzero_only) {
    if (g.empty()) throw EmptyGraph("degree statistics need a non-empty graph");
    std::vector<std::size_t> out, in;
    out.reserve(g.node_count());
    in.reserve(g.node_count());
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
        std::size_t od = g.outdegree(i), id = g.indegree(i);
        if (!nonzero_only || od > 0) out.push_back(od);
        if (!nonzero_only || id > 0) in.push_back(id);
    }
    DegreeStats stats;
    stats.outdegree = stats_of(std::move(out));
    stats.indegree = stats_of(std::move(in));
    return stats;
}

}  // namespace fieldlens
