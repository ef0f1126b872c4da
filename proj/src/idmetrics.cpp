#include "fieldlens/idmetrics.hpp"

#include <cmath>
#include <limits>

#include "fieldlens/errors.hpp"

namespace fieldlens {

namespace {

void check_scopes(const CitationGraph& a, const CitationGraph& b, const CitationGraph& merged) {
    if (a.scope() == Scope::Merged || b.scope() == Scope::Merged)
        throw ScopeError("field graphs must not carry the MERGED label");
    if (merged.scope() != Scope::Merged)
        throw ScopeError("metrics need a merged-scope graph");
}

std::set<std::pair<std::string, std::string>> edge_doi_set(const CitationGraph& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [u, v] : g.edges()) out.emplace(g.node(u).doi, g.node(v).doi);
    return out;
}

}  // namespace

std::set<std::string> boundary_set(const CitationGraph& merged) {
    if (merged.scope() != Scope::Merged)
        throw ScopeError("boundary_set needs a merged-scope graph");
    std::set<std::string> out;
    for (const auto& rec : merged.nodes())
        if (rec.is_boundary()) out.insert(rec.doi);
    return out;
}

std::pair<std::optional<double>, std::optional<double>> linkage_factors(
    const CitationGraph& a, const CitationGraph& b, const CitationGraph& merged,
    const LinkageOptions& opts) {
    check_scopes(a, b, merged);
    std::size_t outflow_a_to_b = 0;  // citing in B, cited in A
    std::size_t outflow_b_to_a = 0;  // citing in A, cited in B
    for (const auto& [u, v] : merged.edges()) {
        const auto& citing = merged.node(u);
        const auto& cited = merged.node(v);
        if (!opts.include_boundary && (citing.is_boundary() || cited.is_boundary())) continue;
        if (citing.in_field_b && cited.in_field_a) ++outflow_a_to_b;
        if (citing.in_field_a && cited.in_field_b) ++outflow_b_to_a;
    }
    std::optional<double> a_to_b, b_to_a;
    if (outflow_b_to_a > 0)
        a_to_b = static_cast<double>(outflow_a_to_b) / static_cast<double>(outflow_b_to_a);
    if (outflow_a_to_b > 0)
        b_to_a = static_cast<double>(outflow_b_to_a) / static_cast<double>(outflow_a_to_b);
    return {a_to_b, b_to_a};
}

IdMetricsReport compute_metrics(const CitationGraph& a, const CitationGraph& b,
                                const CitationGraph& merged, const LinkageOptions& opts) {
    check_scopes(a, b, merged);
    IdMetricsReport r;
    r.mc = merged.edge_count();
    if (r.mc == 0) throw DegenerateMerged("merged graph has no edges");

    for (std::uint32_t i = 0; i < merged.node_count(); ++i) {
        if (merged.total_degree(i) == 0) continue;
        ++r.nc_k1;
        if (merged.node(i).is_boundary()) ++r.n_k1;
    }
    r.idp = static_cast<double>(r.n_k1) / static_cast<double>(r.nc_k1);

    r.m1 = a.edge_count();
    r.m2 = b.edge_count();
    auto ea = edge_doi_set(a);
    auto eb = edge_doi_set(b);
    for (const auto& e : ea)
        if (eb.count(e)) ++r.mb;

    const auto union_edges = r.m1 + r.m2 - r.mb;
    if (union_edges > r.mc)
        throw DegenerateMerged("merged graph is missing field-graph edges");
    r.m_cross = r.mc - union_edges;
    r.idl = 1.0 - static_cast<double>(union_edges) / static_cast<double>(r.mc);

    if (r.idl > 0)
        r.dominance = r.idp / r.idl;
    else if (r.idp > 0)
        r.dominance = std::numeric_limits<double>::infinity();
    else
        r.dominance = std::numeric_limits<double>::quiet_NaN();
    r.overall_strength = r.idp + r.idl;

    std::tie(r.linkage_a_to_b, r.linkage_b_to_a) = linkage_factors(a, b, merged, opts);
    return r;
}

}  // namespace fieldlens
