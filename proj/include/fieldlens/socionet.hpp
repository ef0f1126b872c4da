#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fieldlens/corpus.hpp"

namespace fieldlens {

enum class SocioKind { Venue, Author };

std::string to_string(SocioKind kind);

/// Weighted undirected co-publication network. Edge weight is the number of
/// distinct witnesses (authors for the venue network, venues for the author
/// network); the witness sets are kept as provenance.
class SocioNetwork {
public:
    using EdgeKey = std::pair<std::string, std::string>;  // ordered: first < second

    struct EdgeData {
        std::set<std::string> witnesses;
        std::size_t weight() const noexcept { return witnesses.size(); }
    };

    explicit SocioNetwork(SocioKind kind) : kind_(kind) {}

    SocioKind kind() const noexcept { return kind_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    const std::map<std::string, std::string>& nodes() const noexcept { return nodes_; }
    const std::map<EdgeKey, EdgeData>& edges() const noexcept { return edges_; }

    void add_node(const std::string& id, const std::string& display_name);
    /// Self-edges are rejected; the witness joins the edge's set.
    void add_witness(const std::string& u, const std::string& v, const std::string& witness);

    std::vector<std::pair<std::string, std::size_t>> weighted_degrees() const;

private:
    SocioKind kind_;
    std::map<std::string, std::string> nodes_;  // id -> display name
    std::map<EdgeKey, EdgeData> edges_;
};

struct VenueAggregationRule {
    /// Case-insensitive regex -> canonical venue id, applied first, any kind.
    std::vector<std::pair<std::string, std::string>> same_series_patterns;
    /// Conference venues with at most this many papers are group-aggregated.
    int group_threshold = 2;
    /// Group key (matched as substring of the venue name) -> aggregate label.
    std::vector<std::pair<std::string, std::string>> group_labels;
};

/// JSON rule file: {"group_threshold": 2, "series": {pattern: canonical},
/// "groups": {key: label}}.
VenueAggregationRule load_venue_rules(const std::string& path);

/// Rewrites venue identities: user series patterns, then year-stripped
/// same-series merging for conferences, then publisher-group aggregation of
/// low-frequency conferences. Journals never enter proceedings groups.
Corpus aggregate_venues(const Corpus& corpus, const VenueAggregationRule& rule);

/// Venue network: venues linked when one author published in both (weight =
/// number of such authors). Author network: authors linked when they share a
/// venue (weight = number of shared venues). Throws MissingMetadata when no
/// record carries the needed fields.
SocioNetwork build_socionet(const Corpus& corpus, SocioKind kind);

enum class CentralityMeasure { WeightedDegree, Betweenness, Closeness };

std::string to_string(CentralityMeasure m);

struct CentralityTable {
    CentralityMeasure measure = CentralityMeasure::WeightedDegree;
    std::map<std::string, double> scores;
    /// Full descending order; ties by node id.
    std::vector<std::pair<std::string, double>> top;
};

/// Weighted degree sums incident edge weights. Betweenness is Brandes over
/// unweighted hop-count paths, unnormalized, with even split over equal-length
/// shortest paths. Closeness is 1 / sum of distances to the node's component
/// (0 for isolated nodes). Throws EmptyNetwork.
CentralityTable centrality(const SocioNetwork& net, CentralityMeasure measure);

/// Largest component by node count; ties by edge count, then by smallest
/// lexicographic node id. Throws EmptyNetwork.
SocioNetwork main_component(const SocioNetwork& net);

struct SocioComponentReport {
    std::size_t component_count = 0;
    std::vector<std::pair<std::size_t, std::size_t>> sizes;  // (nodes, edges) descending
};

SocioComponentReport socio_components(const SocioNetwork& net);

}  // namespace fieldlens
