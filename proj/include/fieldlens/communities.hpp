#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fieldlens/citegraph.hpp"

namespace fieldlens {

struct Partition {
    std::map<std::string, int> assignment;  // node doi -> community id, dense from 0
    double modularity = 0;
    std::uint64_t seed = 0;
    double resolution = 1.0;
    /// Modularity of the composed assignment after each level's local moving;
    /// non-decreasing by construction.
    std::vector<double> level_modularity;

    int community_count() const;
};

/// Two-phase Louvain over the undirected projection of the graph (weight =
/// number of directed edges between a pair). Node visit order is shuffled by
/// the seed; gain ties break toward the lowest community id; the returned
/// modularity is evaluated on the original-level projection. Deterministic for
/// a fixed seed. Throws EmptyGraph.
Partition louvain(const CitationGraph& g, double resolution, std::uint64_t seed);

/// Modularity of an arbitrary assignment on the graph's undirected projection
/// (resolution-scaled null model). Exposed for tests and reporting.
double partition_modularity(const CitationGraph& g, const std::map<std::string, int>& assignment,
                            double resolution = 1.0);

struct ComponentReport {
    std::size_t component_count = 0;
    std::vector<std::pair<std::size_t, std::size_t>> sizes;  // (nodes, edges) descending
};

/// Weakly connected components, sizes descending (nodes, then edges).
ComponentReport components(const CitationGraph& g);

}  // namespace fieldlens
