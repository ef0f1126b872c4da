#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fieldlens/corpus.hpp"

namespace fieldlens {

enum class Scope { FieldA, FieldB, Merged };

std::string to_string(Scope scope);
Scope parse_scope(std::string_view s);

struct NodeRecord {
    std::string doi;
    bool in_field_a = false;
    bool in_field_b = false;
    bool seeded = false;  // retrieved by the field search vs. appeared only as a reference

    bool is_boundary() const noexcept { return in_field_a && in_field_b; }
};

enum class EdgeKind { IntraA, IntraB, Cross, BoundaryIncident };

std::string to_string(EdgeKind kind);

/// Directed citation graph. Nodes are stored sorted by DOI and edges sorted by
/// (citing, cited) index, so two graphs built from the same node/edge sets are
/// identical regardless of insertion order. Immutable once built.
class CitationGraph {
public:
    using Edge = std::pair<std::uint32_t, std::uint32_t>;  // citing -> cited

    class Builder {
    public:
        explicit Builder(Scope scope) : scope_(scope) {}

        /// Repeated DOIs OR-merge their flags.
        Builder& add_node(NodeRecord rec);
        /// Endpoints must have been added. Self-loops and duplicates are dropped.
        Builder& add_edge(const std::string& citing, const std::string& cited);
        CitationGraph build();

    private:
        Scope scope_;
        std::map<std::string, NodeRecord> nodes_;
        std::set<std::pair<std::string, std::string>> edges_;
    };

    Scope scope() const noexcept { return scope_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    const std::vector<NodeRecord>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    const NodeRecord& node(std::uint32_t i) const { return nodes_[i]; }
    std::optional<std::uint32_t> index_of(std::string_view doi) const;
    bool has_node(std::string_view doi) const { return index_of(doi).has_value(); }
    bool has_edge(std::string_view citing, std::string_view cited) const;

    std::span<const std::uint32_t> out_neighbors(std::uint32_t i) const;
    std::span<const std::uint32_t> in_neighbors(std::uint32_t i) const;
    std::size_t outdegree(std::uint32_t i) const { return out_neighbors(i).size(); }
    std::size_t indegree(std::uint32_t i) const { return in_neighbors(i).size(); }
    std::size_t total_degree(std::uint32_t i) const { return outdegree(i) + indegree(i); }

    EdgeKind edge_kind(const Edge& e) const;

private:
    friend class Builder;
    CitationGraph() = default;

    Scope scope_ = Scope::Merged;
    std::vector<NodeRecord> nodes_;  // sorted by doi
    std::vector<Edge> edges_;        // sorted
    // CSR-style adjacency over node indices
    std::vector<std::uint32_t> out_offsets_, out_targets_;
    std::vector<std::uint32_t> in_offsets_, in_sources_;
};

/// Nodes: papers carrying the scope's field label plus every DOI they
/// reference; edges: seeded paper -> reference. All nodes carry the scope's
/// field flag. Scope::Merged builds both field graphs unpruned and merges them.
/// Throws EmptyGraph when no paper qualifies.
CitationGraph build_graph(const Corpus& c, Scope scope);

enum class PruneMode { SinglePass, Fixpoint };

PruneMode parse_prune_mode(std::string_view s);
std::string to_string(PruneMode m);

/// Removes total-degree-0 nodes, then total-degree-1 nodes. Fixpoint repeats
/// until every remaining node has total degree >= 2 (may return an empty
/// graph); SinglePass does exactly one removal round.
CitationGraph prune_leaves(const CitationGraph& g, PruneMode mode = PruneMode::Fixpoint);

/// Union of the two field graphs plus citations between a-nodes and b-nodes
/// found in full_corpus reference lists. Node flags are unioned per graph
/// membership; throws ScopeError if either input is already merged.
CitationGraph merge_graphs(const CitationGraph& a, const CitationGraph& b,
                           const Corpus& full_corpus);

/// Subgraph on the given DOIs with the edges among them; scope preserved.
CitationGraph induced_subgraph(const CitationGraph& g, const std::set<std::string>& keep);

struct DirectionStats {
    double mean = 0, median = 0, mode = 0, min = 0, max = 0, stddev = 0;
};

struct DegreeStats {
    DirectionStats outdegree;
    DirectionStats indegree;
};

/// Six statistics per direction. With nonzero_only (the default) each
/// direction is computed over nodes with a positive value in that direction;
/// an empty population yields all zeros. Mode ties break toward the smallest
/// value; stddev is the population deviation. Throws EmptyGraph.
DegreeStats degree_stats(const CitationGraph& g, bool nonzero_only = true);

}  // namespace fieldlens
