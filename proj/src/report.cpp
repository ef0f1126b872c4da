#include "fieldlens/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fieldlens/errors.hpp"
#include "fieldlens/graphml.hpp"
#include "fieldlens/hash.hpp"
#include "fieldlens/util.hpp"

namespace fieldlens {

namespace {

std::string fixed(double v, int decimals) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::string format_ratio(double v) { return fixed(v, 2); }

std::string format_ratio(const std::optional<double>& v) {
    return v ? format_ratio(*v) : std::string("undefined");
}

std::string format_stat(double v) { return fixed(v, 1); }

ReportWriter::ReportWriter(std::filesystem::path out_dir) : out_dir_(std::move(out_dir)) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir_ / "tables", ec);
    std::filesystem::create_directories(out_dir_ / "graphs", ec);
    if (ec) throw IoError("cannot create output directory " + out_dir_.string());
}

void ReportWriter::write_text(const std::string& relative_path, const std::string& content) {
    auto path = out_dir_ / relative_path;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
}

void ReportWriter::write_degree_stats(
    const std::vector<std::pair<std::string, DegreeStats>>& rows) {
    std::ostringstream csv, md;
    csv << "network,direction,mean,median,mode,min,max,stddev\n";
    md << "| Network | Measure | Mean | Median | Mode | Min | Max | Standard deviation |\n"
       << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& [name, stats] : rows) {
        const std::pair<const char*, const DirectionStats*> dirs[] = {
            {"outdegree", &stats.outdegree}, {"indegree", &stats.indegree}};
        for (const auto& [dir, s] : dirs) {
            csv << csv_escape(name) << ',' << dir << ',' << format_stat(s->mean) << ','
                << format_stat(s->median) << ',' << format_stat(s->mode) << ','
                << format_stat(s->min) << ',' << format_stat(s->max) << ','
                << format_stat(s->stddev) << '\n';
            md << "| " << name << " | " << dir << " | " << format_stat(s->mean) << " | "
               << format_stat(s->median) << " | " << format_stat(s->mode) << " | "
               << format_stat(s->min) << " | " << format_stat(s->max) << " | "
               << format_stat(s->stddev) << " |\n";
        }
    }
    write_text("tables/degree_stats.csv", csv.str());
    write_text("tables/degree_stats.md", md.str());
}

void ReportWriter::write_id_metrics(const IdMetricsReport& r) {
    std::ostringstream csv;
    csv << "measure,value\n";
    csv << "n_k1," << r.n_k1 << '\n';
    csv << "nc_k1," << r.nc_k1 << '\n';
    csv << "m1," << r.m1 << '\n';
    csv << "m2," << r.m2 << '\n';
    csv << "mb," << r.mb << '\n';
    csv << "mc," << r.mc << '\n';
    csv << "m_cross," << r.m_cross << '\n';
    csv << "IDp," << format_ratio(r.idp) << '\n';
    csv << "IDl," << format_ratio(r.idl) << '\n';
    csv << "D," << format_ratio(r.dominance) << '\n';
    csv << "overall_strength," << format_ratio(r.overall_strength) << '\n';
    csv << "linkage_a_to_b," << format_ratio(r.linkage_a_to_b) << '\n';
    csv << "linkage_b_to_a," << format_ratio(r.linkage_b_to_a) << '\n';
    write_text("tables/id_metrics.csv", csv.str());

    std::ostringstream md;
    md << "| Measure | Value |\n|---|---|\n"
       << "| Strength through boundary papers (IDp) | " << format_ratio(r.idp) << " |\n"
       << "| Strength through cross-disciplinary arcs (IDl) | " << format_ratio(r.idl) << " |\n"
       << "| Dominant mode of interaction (D) | " << format_ratio(r.dominance) << " |\n"
       << "| Overall strength of interaction | " << format_ratio(r.overall_strength) << " |\n"
       << "| Mutual contribution A to B | " << format_ratio(r.linkage_a_to_b) << " |\n"
       << "| Mutual contribution B to A | " << format_ratio(r.linkage_b_to_a) << " |\n"
       << "\nCounts: n_k1=" << r.n_k1 << ", nc_k1=" << r.nc_k1 << ", m1=" << r.m1
       << ", m2=" << r.m2 << ", mb=" << r.mb << ", mc=" << r.mc << ", m_cross=" << r.m_cross
       << "\n";
    write_text("tables/id_metrics.md", md.str());

    nlohmann::ordered_json j;
    j["n_k1"] = r.n_k1;
    j["nc_k1"] = r.nc_k1;
    j["m1"] = r.m1;
    j["m2"] = r.m2;
    j["mb"] = r.mb;
    j["mc"] = r.mc;
    j["m_cross"] = r.m_cross;
    j["idp"] = r.idp;
    j["idl"] = r.idl;
    if (std::isfinite(r.dominance)) j["dominance"] = r.dominance;
    else j["dominance"] = std::isnan(r.dominance) ? "nan" : "inf";
    j["overall_strength"] = r.overall_strength;
    if (r.linkage_a_to_b) j["linkage_a_to_b"] = *r.linkage_a_to_b;
    else j["linkage_a_to_b"] = nullptr;
    if (r.linkage_b_to_a) j["linkage_b_to_a"] = *r.linkage_b_to_a;
    else j["linkage_b_to_a"] = nullptr;
    write_text("tables/id_metrics.json", j.dump(2) + "\n");
}

namespace {

std::string motif_structure(MotifKind k) {
    switch (k) {
        case MotifKind::InterDiffusionA2B: return "A -> boundary -> B";
        case MotifKind::InterDiffusionB2A: return "B -> boundary -> A";
        case MotifKind::CircularA: return "A -> boundary -> A";
        case MotifKind::CircularB: return "B -> boundary -> B";
        case MotifKind::CrossFertilization: return "A <- boundary -> B";
        case MotifKind::BoundaryTriggered: return "A -> boundary <- B";
        case MotifKind::InterdisciplinaryEmergence: return "boundary -> boundary";
    }
    return "";
}

std::string percent(double share) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f%%", share * 100.0);
    return buf;
}

}  // namespace

void ReportWriter::write_motif_shares(const MotifCensus& c) {
    std::ostringstream csv, md;
    csv << "kind,count,share\n";
    md << "| Mode of interaction | Interactions | Share | Structure |\n|---|---|---|---|\n";
    if (c.total() > 0) {
        for (MotifKind k : all_motif_kinds()) {
            csv << to_string(k) << ',' << c.counts.at(k) << ',' << format_ratio(c.shares.at(k))
                << '\n';
            md << "| " << to_string(k) << " | " << c.counts.at(k) << " | "
               << percent(c.shares.at(k)) << " | " << motif_structure(k) << " |\n";
        }
    }
    write_text("tables/motif_shares.csv", csv.str());
    write_text("tables/motif_shares.md", md.str());
}

void ReportWriter::write_participation(const MotifCensus& c) {
    auto summary = participation_summary(c);
    std::ostringstream csv, md;
    csv << "group,boundary_papers\n";
    md << "| Kind of interaction | Boundary papers involved |\n|---|---|\n";
    for (MotifGroup g : all_motif_groups()) {
        csv << to_string(g) << ',' << summary.at(g) << '\n';
        md << "| " << to_string(g) << " | " << summary.at(g) << " |\n";
    }
    write_text("tables/participation.csv", csv.str());
    write_text("tables/participation.md", md.str());
}

void ReportWriter::write_census(const MotifCensus& c) {
    std::ostringstream csv;
    csv << "pivot,kind,in_src,in_dst,out_src,out_dst\n";
    for (const auto& inst : c.instances) {
        csv << csv_escape(inst.pivot) << ',' << to_string(inst.kind) << ','
            << csv_escape(inst.edge_in ? inst.edge_in->src : "") << ','
            << csv_escape(inst.edge_in ? inst.edge_in->dst : "") << ','
            << csv_escape(inst.edge_out ? inst.edge_out->src : "") << ','
            << csv_escape(inst.edge_out ? inst.edge_out->dst : "") << '\n';
    }
    write_text("census.csv", csv.str());
}

void ReportWriter::write_partition(const std::string& network, const Partition& p) {
    std::ostringstream csv;
    csv << "doi,community\n";
    for (const auto& [doi, c] : p.assignment) csv << csv_escape(doi) << ',' << c << '\n';
    write_text("communities/" + network + ".csv", csv.str());

    nlohmann::ordered_json j;
    j["network"] = network;
    j["modularity"] = p.modularity;
    j["seed"] = p.seed;
    j["resolution"] = p.resolution;
    j["communities"] = p.community_count();
    write_text("communities/" + network + ".json", j.dump(2) + "\n");
}

void ReportWriter::write_components(
    const std::vector<std::pair<std::string, ComponentReport>>& rows) {
    std::ostringstream csv;
    csv << "network,component,nodes,edges\n";
    for (const auto& [name, report] : rows)
        for (std::size_t i = 0; i < report.sizes.size(); ++i)
            csv << csv_escape(name) << ',' << i << ',' << report.sizes[i].first << ','
                << report.sizes[i].second << '\n';
    write_text("tables/components.csv", csv.str());
}

void ReportWriter::write_labels(const std::string& network,
                                const std::vector<TopicLabel>& labels) {
    std::ostringstream csv;
    csv << "community,description,normalized\n";
    for (const auto& l : labels)
        csv << l.community_id << ',' << csv_escape(l.description) << ','
            << csv_escape(l.normalized.value_or(l.description)) << '\n';
    write_text("tables/labels_" + network + ".csv", csv.str());
}

void ReportWriter::write_bundle_text(const std::string& network, const std::string& rendered) {
    write_text("bundles/" + network + ".txt", rendered);
}

void ReportWriter::write_citation_graph(const std::string& name, const CitationGraph& g) {
    std::ostringstream out;
    write_graphml(g, out);
    write_text("graphs/" + name + ".graphml", out.str());
}

void ReportWriter::write_merged_edge_csv(const CitationGraph& g) {
    std::ostringstream out;
    write_edge_csv(g, out);
    write_text("graphs/merged_edges.csv", out.str());
}

void ReportWriter::write_socio_graph(const std::string& name, const SocioNetwork& net) {
    std::ostringstream out;
    write_graphml(net, out);
    write_text("graphs/" + name + ".graphml", out.str());
}

void ReportWriter::write_centrality(const std::string& network,
                                    const std::vector<CentralityTable>& tables) {
    for (const auto& table : tables) {
        std::ostringstream csv;
        csv << "node,score\n";
        for (const auto& [node, score] : table.top)
            csv << csv_escape(node) << ',' << format_ratio(score) << '\n';
        write_text("tables/centrality_" + network + "_" + to_string(table.measure) + ".csv",
                   csv.str());
    }
}

void ReportWriter::write_centrality_top5(
    const std::vector<std::pair<std::string, std::vector<CentralityTable>>>& networks) {
    std::ostringstream md;
    for (const auto& [network, tables] : networks) {
        md << "## " << network << "\n\n"
           << "| Measure | Node 1 | Node 2 | Node 3 | Node 4 | Node 5 |\n"
           << "|---|---|---|---|---|---|\n";
        for (const auto& table : tables) {
            md << "| " << to_string(table.measure) << " |";
            for (std::size_t i = 0; i < 5; ++i) {
                if (i < table.top.size())
                    md << ' ' << table.top[i].first << " |";
                else
                    md << " - |";
            }
            md << '\n';
        }
        md << '\n';
    }
    write_text("tables/centrality_top5.md", md.str());
}

void ReportWriter::write_socio_components(
    const std::vector<std::pair<std::string, SocioComponentReport>>& rows) {
    std::ostringstream csv;
    csv << "network,component,nodes,edges\n";
    for (const auto& [name, report] : rows)
        for (std::size_t i = 0; i < report.sizes.size(); ++i)
            csv << csv_escape(name) << ',' << i << ',' << report.sizes[i].first << ','
                << report.sizes[i].second << '\n';
    write_text("tables/socio_components.csv", csv.str());
}

ReportBundle ReportWriter::finalize_manifest() {
    ReportBundle bundle;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(out_dir_)) {
        if (!entry.is_regular_file()) continue;
        auto rel = std::filesystem::relative(entry.path(), out_dir_).generic_string();
        if (rel == "manifest.json" || rel.starts_with(".") || rel.find("/.") != std::string::npos)
            continue;
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    nlohmann::ordered_json artifacts;
    for (const auto& path : files) {
        auto rel = std::filesystem::relative(path, out_dir_).generic_string();
        ManifestEntry me{rel, sha256_file(path)};
        artifacts[rel] = {{"path", me.path}, {"sha256", me.sha256}};
        bundle.artifacts.emplace(rel, std::move(me));
    }
    nlohmann::ordered_json manifest;
    manifest["artifacts"] = std::move(artifacts);
    write_text("manifest.json", manifest.dump(2) + "\n");
    return bundle;
}

ReportBundle render(const ReportProducts& products, const std::filesystem::path& out_dir) {
    ReportWriter writer(out_dir);
    if (!products.degree_rows.empty()) writer.write_degree_stats(products.degree_rows);
    if (products.metrics) writer.write_id_metrics(*products.metrics);
    if (products.census) {
        writer.write_motif_shares(*products.census);
        writer.write_participation(*products.census);
        writer.write_census(*products.census);
    }
    for (const auto& [name, graph] : products.graphs)
        if (graph) writer.write_citation_graph(name, *graph);
    for (const auto& [name, partition] : products.partitions) writer.write_partition(name, partition);
    if (!products.components.empty()) writer.write_components(products.components);
    if (!products.centralities.empty()) {
        for (const auto& [name, tables] : products.centralities)
            writer.write_centrality(name, tables);
        writer.write_centrality_top5(products.centralities);
    }
    return writer.finalize_manifest();
}

}  // namespace fieldlens
