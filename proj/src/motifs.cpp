#include "fieldlens/motifs.hpp"

#include <algorithm>

#include "fieldlens/errors.hpp"

namespace fieldlens {

std::string to_string(MotifKind k) {
    switch (k) {
        case MotifKind::InterDiffusionA2B: return "INTER_DIFFUSION_A2B";
        case MotifKind::InterDiffusionB2A: return "INTER_DIFFUSION_B2A";
        case MotifKind::CircularA: return "CIRCULAR_A";
        case MotifKind::CircularB: return "CIRCULAR_B";
        case MotifKind::CrossFertilization: return "CROSS_FERTILIZATION";
        case MotifKind::BoundaryTriggered: return "BOUNDARY_TRIGGERED";
        case MotifKind::InterdisciplinaryEmergence: return "INTERDISCIPLINARY_EMERGENCE";
    }
    return "INTERDISCIPLINARY_EMERGENCE";
}

std::string to_string(MotifGroup g) {
    switch (g) {
        case MotifGroup::Diffusion: return "diffusion";
        case MotifGroup::Circular: return "circular";
        case MotifGroup::CrossFertilization: return "cross_fertilization";
        case MotifGroup::BoundaryTriggered: return "boundary_triggered";
        case MotifGroup::InterdisciplinaryEmergence: return "interdisciplinary_emergence";
    }
    return "diffusion";
}

MotifKind parse_motif_kind(std::string_view s) {
    for (MotifKind k : all_motif_kinds())
        if (to_string(k) == s) return k;
    throw UnknownKind("unknown motif kind: " + std::string(s));
}

MotifGroup parse_motif_group(std::string_view s) {
    for (MotifGroup g : all_motif_groups())
        if (to_string(g) == s) return g;
    throw UnknownKind("unknown motif group: " + std::string(s));
}

MotifGroup group_of(MotifKind k) {
    switch (k) {
        case MotifKind::InterDiffusionA2B:
        case MotifKind::InterDiffusionB2A: return MotifGroup::Diffusion;
        case MotifKind::CircularA:
        case MotifKind::CircularB: return MotifGroup::Circular;
        case MotifKind::CrossFertilization: return MotifGroup::CrossFertilization;
        case MotifKind::BoundaryTriggered: return MotifGroup::BoundaryTriggered;
        case MotifKind::InterdisciplinaryEmergence: return MotifGroup::InterdisciplinaryEmergence;
    }
    return MotifGroup::Diffusion;
}

const std::vector<MotifKind>& all_motif_kinds() {
    static const std::vector<MotifKind> kinds = {
        MotifKind::InterDiffusionA2B,   MotifKind::InterDiffusionB2A,
        MotifKind::CircularA,           MotifKind::CircularB,
        MotifKind::CrossFertilization,  MotifKind::BoundaryTriggered,
        MotifKind::InterdisciplinaryEmergence};
    return kinds;
}

const std::vector<MotifGroup>& all_motif_groups() {
    static const std::vector<MotifGroup> groups = {
        MotifGroup::Diffusion, MotifGroup::Circular, MotifGroup::CrossFertilization,
        MotifGroup::BoundaryTriggered, MotifGroup::InterdisciplinaryEmergence};
    return groups;
}

std::size_t MotifCensus::total() const { return instances.size(); }

namespace {

enum class Side { AExclusive, BExclusive, Boundary };

Side side_of(const NodeRecord& n) {
    if (n.is_boundary()) return Side::Boundary;
    return n.in_field_a ? Side::AExclusive : Side::BExclusive;
}

}  // namespace

MotifCensus census(const CitationGraph& merged) {
    if (merged.scope() != Scope::Merged)
        throw ScopeError("motif census needs a merged-scope graph");

    MotifCensus out;
    for (MotifKind k : all_motif_kinds()) {
        out.counts[k] = 0;
        out.shares[k] = 0;
    }

    for (std::uint32_t p = 0; p < merged.node_count(); ++p) {
        const auto& pivot = merged.node(p);
        if (!pivot.is_boundary()) continue;

        std::vector<std::uint32_t> in_a, in_b, out_a, out_b, out_bd;
        for (auto u : merged.in_neighbors(p)) {
            const auto& n = merged.node(u);
            if (!n.in_field_a && !n.in_field_b) continue;  // unlabeled nodes take no side
            switch (side_of(n)) {
                case Side::AExclusive: in_a.push_back(u); break;
                case Side::BExclusive: in_b.push_back(u); break;
                case Side::Boundary: break;  // claimed by boundary -> boundary below
            }
        }
        for (auto v : merged.out_neighbors(p)) {
            const auto& n = merged.node(v);
            if (!n.in_field_a && !n.in_field_b) continue;
            switch (side_of(n)) {
                case Side::AExclusive: out_a.push_back(v); break;
                case Side::BExclusive: out_b.push_back(v); break;
                case Side::Boundary: out_bd.push_back(v); break;
            }
        }

        auto emit_pair = [&](std::uint32_t x, Side sx, std::uint32_t y, Side sy) {
            MotifKind kind;
            if (sx == Side::AExclusive && sy == Side::BExclusive)
                kind = MotifKind::InterDiffusionA2B;
            else if (sx == Side::BExclusive && sy == Side::AExclusive)
                kind = MotifKind::InterDiffusionB2A;
            else if (sx == Side::AExclusive)
                kind = MotifKind::CircularA;
            else
                kind = MotifKind::CircularB;
            out.instances.push_back({kind,
                                     pivot.doi,
                                     DoiEdge{merged.node(x).doi, pivot.doi},
                                     DoiEdge{pivot.doi, merged.node(y).doi}});
        };
        for (auto x : in_a)
            for (auto y : out_a) emit_pair(x, Side::AExclusive, y, Side::AExclusive);
        for (auto x : in_a)
            for (auto y : out_b) emit_pair(x, Side::AExclusive, y, Side::BExclusive);
        for (auto x : in_b)
            for (auto y : out_a) emit_pair(x, Side::BExclusive, y, Side::AExclusive);
        for (auto x : in_b)
            for (auto y : out_b) emit_pair(x, Side::BExclusive, y, Side::BExclusive);

        for (auto a : out_a)
            for (auto b : out_b)
                out.instances.push_back({MotifKind::CrossFertilization,
                                         pivot.doi,
                                         DoiEdge{pivot.doi, merged.node(a).doi},
                                         DoiEdge{pivot.doi, merged.node(b).doi}});
        for (auto a : in_a)
            for (auto b : in_b)
                out.instances.push_back({MotifKind::BoundaryTriggered,
                                         pivot.doi,
                                         DoiEdge{merged.node(a).doi, pivot.doi},
                                         DoiEdge{merged.node(b).doi, pivot.doi}});
        for (auto q : out_bd)
            out.instances.push_back({MotifKind::InterdisciplinaryEmergence,
                                     pivot.doi,
                                     std::nullopt,
                                     DoiEdge{pivot.doi, merged.node(q).doi}});
    }

    std::sort(out.instances.begin(), out.instances.end(),
              [](const MotifInstance& l, const MotifInstance& r) {
                  auto key = [](const MotifInstance& m) {
                      static const DoiEdge none{};
                      return std::tie(m.pivot, m.edge_in ? *m.edge_in : none,
                                      m.edge_out ? *m.edge_out : none, m.kind);
                  };
                  return key(l) < key(r);
              });

    for (const auto& inst : out.instances) {
        ++out.counts[inst.kind];
        out.participation[inst.pivot].insert(inst.kind);
    }
    if (!out.instances.empty()) {
        const double total = static_cast<double>(out.instances.size());
        for (auto& [kind, count] : out.counts)
            out.shares[kind] = static_cast<double>(count) / total;
    }
    return out;
}

CitationGraph motif_subnetwork(const MotifCensus& census, MotifGroup group,
                               const CitationGraph& merged) {
    std::set<DoiEdge> edges;
    for (const auto& inst : census.instances) {
        if (group_of(inst.kind) != group) continue;
        if (inst.edge_in) edges.insert(*inst.edge_in);
        if (inst.edge_out) edges.insert(*inst.edge_out);
    }
    CitationGraph::Builder builder(Scope::Merged);
    for (const auto& e : edges) {
        auto u = merged.index_of(e.src);
        auto v = merged.index_of(e.dst);
        if (!u || !v) throw Error("census edge not present in merged graph: " + e.src + " -> " + e.dst);
        builder.add_node(merged.node(*u));
        builder.add_node(merged.node(*v));
        builder.add_edge(e.src, e.dst);
    }
    return builder.build();
}

std::map<MotifGroup, std::size_t> participation_summary(const MotifCensus& census) {
    std::map<MotifGroup, std::set<std::string>> pivots;
    for (MotifGroup g : all_motif_groups()) pivots[g];
    for (const auto& [pivot, kinds] : census.participation)
        for (MotifKind k : kinds) pivots[group_of(k)].insert(pivot);
    std::map<MotifGroup, std::size_t> out;
    for (const auto& [g, s] : pivots) out[g] = s.size();
    return out;
}

}  // namespace fieldlens
