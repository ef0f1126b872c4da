#pragma once

#include <optional>
#include <set>
#include <string>

#include "fieldlens/citegraph.hpp"

namespace fieldlens {

/// The interdisciplinarity scalars with their raw counts.
///   IDp = n_k1 / nc_k1
///   IDl = 1 - (m1 + m2 - mb) / mc
///   m_cross = mc - (m1 + m2 - mb)
///   D = IDp / IDl (+infinity when IDl = 0 and IDp > 0, NaN when both are 0)
///   overall_strength = IDp + IDl
struct IdMetricsReport {
    std::size_t n_k1 = 0;   // boundary nodes with >= 1 citation in the merged graph
    std::size_t nc_k1 = 0;  // merged nodes with >= 1 citation
    double idp = 0;
    std::size_t m1 = 0, m2 = 0, mb = 0, mc = 0;
    std::size_t m_cross = 0;
    double idl = 0;
    double dominance = 0;
    double overall_strength = 0;
    std::optional<double> linkage_a_to_b;  // nullopt = undefined (zero denominator)
    std::optional<double> linkage_b_to_a;
};

/// DOIs with both field flags set. Throws ScopeError unless the graph is merged.
std::set<std::string> boundary_set(const CitationGraph& merged);

struct LinkageOptions {
    /// When true, boundary nodes count on both field sides instead of being
    /// excluded from the cross-edge tally.
    bool include_boundary = false;
};

/// Directional knowledge-flow ratios over cross edges. Knowledge flows from
/// the cited to the citing paper: outflow(A->B) counts edges whose citing node
/// is B-exclusive and cited node is A-exclusive. Returns
/// (outflow(A->B)/outflow(B->A), outflow(B->A)/outflow(A->B)); a zero
/// denominator yields nullopt for that ratio.
std::pair<std::optional<double>, std::optional<double>> linkage_factors(
    const CitationGraph& a, const CitationGraph& b, const CitationGraph& merged,
    const LinkageOptions& opts = {});

/// Fills every report field. ">= 1 citation" means total degree >= 1 in the
/// merged graph. Throws ScopeError on mis-scoped inputs and DegenerateMerged
/// when the merged graph has no edges.
IdMetricsReport compute_metrics(const CitationGraph& a, const CitationGraph& b,
                                const CitationGraph& merged, const LinkageOptions& opts = {});

}  // namespace fieldlens
