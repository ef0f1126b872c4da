#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fieldlens/citegraph.hpp"

namespace fieldlens {

/// The boundary-pivot interaction patterns. Diffusion tags name the citation
/// pattern direction (A -> boundary -> B), circular tags the enclosing field.
enum class MotifKind {
    InterDiffusionA2B,
    InterDiffusionB2A,
    CircularA,
    CircularB,
    CrossFertilization,
    BoundaryTriggered,
    InterdisciplinaryEmergence,
};

/// The five reporting groups: both diffusion directions form one group, both
/// circular variants another.
enum class MotifGroup {
    Diffusion,
    Circular,
    CrossFertilization,
    BoundaryTriggered,
    InterdisciplinaryEmergence,
};

std::string to_string(MotifKind k);
std::string to_string(MotifGroup g);
MotifKind parse_motif_kind(std::string_view s);      // throws UnknownKind
MotifGroup parse_motif_group(std::string_view s);    // throws UnknownKind
MotifGroup group_of(MotifKind k);
const std::vector<MotifKind>& all_motif_kinds();
const std::vector<MotifGroup>& all_motif_groups();

struct DoiEdge {
    std::string src;
    std::string dst;

    friend auto operator<=>(const DoiEdge&, const DoiEdge&) = default;
};

/// One interaction instance. Edge slots by kind:
///   diffusion / circular: edge_in = x -> pivot, edge_out = pivot -> y
///   cross-fertilization:  edge_in = pivot -> (A side), edge_out = pivot -> (B side)
///   boundary-triggered:   edge_in = (A side) -> pivot, edge_out = (B side) -> pivot
///   interdisciplinary emergence: edge_out = pivot -> boundary (edge_in empty)
struct MotifInstance {
    MotifKind kind = MotifKind::InterdisciplinaryEmergence;
    std::string pivot;
    std::optional<DoiEdge> edge_in;
    std::optional<DoiEdge> edge_out;
};

struct MotifCensus {
    std::vector<MotifInstance> instances;  // sorted by pivot, then edges
    std::map<MotifKind, std::size_t> counts;
    std::map<MotifKind, double> shares;    // fractions of total instances; zero map when empty
    std::map<std::string, std::set<MotifKind>> participation;  // pivot -> kinds

    std::size_t total() const;
};

/// Classifies every qualifying edge pair / boundary edge around boundary
/// pivots. Pairs touching a second boundary node are claimed exclusively by
/// the boundary -> boundary rule. Throws ScopeError unless merged-scope.
MotifCensus census(const CitationGraph& merged);

/// Subgraph induced by the union of edges participating in the group's
/// instances; isolated nodes excluded.
CitationGraph motif_subnetwork(const MotifCensus& census, MotifGroup group,
                               const CitationGraph& merged);

/// Distinct boundary pivots per group.
std::map<MotifGroup, std::size_t> participation_summary(const MotifCensus& census);

}  // namespace fieldlens
