#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fieldlens/citegraph.hpp"
#include "fieldlens/communities.hpp"
#include "fieldlens/idmetrics.hpp"
#include "fieldlens/motifs.hpp"
#include "fieldlens/socionet.hpp"
#include "fieldlens/topics.hpp"

namespace fieldlens {

/// Fixed-precision formatting keeps the tables diff-stable: ratios get two
/// decimals, degree statistics one.
std::string format_ratio(double v);
std::string format_ratio(const std::optional<double>& v);  // nullopt -> "undefined"
std::string format_stat(double v);

struct ManifestEntry {
    std::string path;  // relative to the output directory
    std::string sha256;
};

struct ReportBundle {
    std::map<std::string, ManifestEntry> artifacts;  // keyed by relative path
};

/// Writes tables (Markdown + CSV), graph exports, and the manifest under one
/// output directory. Each writer is deterministic: identical inputs produce
/// byte-identical files. Throws IoError when a file cannot be written.
class ReportWriter {
public:
    explicit ReportWriter(std::filesystem::path out_dir);

    const std::filesystem::path& out_dir() const noexcept { return out_dir_; }

    void write_degree_stats(const std::vector<std::pair<std::string, DegreeStats>>& rows);
    void write_id_metrics(const IdMetricsReport& r);
    void write_motif_shares(const MotifCensus& c);
    void write_participation(const MotifCensus& c);
    void write_census(const MotifCensus& c);
    void write_partition(const std::string& network, const Partition& p);
    void write_components(const std::vector<std::pair<std::string, ComponentReport>>& rows);
    void write_labels(const std::string& network, const std::vector<TopicLabel>& labels);
    void write_bundle_text(const std::string& network, const std::string& rendered);
    void write_citation_graph(const std::string& name, const CitationGraph& g);
    void write_merged_edge_csv(const CitationGraph& g);
    void write_socio_graph(const std::string& name, const SocioNetwork& net);
    void write_centrality(const std::string& network, const std::vector<CentralityTable>& tables);
    void write_centrality_top5(
        const std::vector<std::pair<std::string, std::vector<CentralityTable>>>& networks);
    void write_socio_components(
        const std::vector<std::pair<std::string, SocioComponentReport>>& rows);
    void write_text(const std::string& relative_path, const std::string& content);

    /// Hashes every regular file under the output directory (except the
    /// manifest itself and dotfiles), writes manifest.json, and returns the
    /// bundle.
    ReportBundle finalize_manifest();

private:
    std::filesystem::path out_dir_;
};

/// One-shot rendering of whatever products are supplied; missing pointers skip
/// their tables. Returns the finalized bundle.
struct ReportProducts {
    std::vector<std::pair<std::string, DegreeStats>> degree_rows;
    const IdMetricsReport* metrics = nullptr;
    const MotifCensus* census = nullptr;
    std::vector<std::pair<std::string, const CitationGraph*>> graphs;
    std::vector<std::pair<std::string, Partition>> partitions;
    std::vector<std::pair<std::string, ComponentReport>> components;
    std::vector<std::pair<std::string, std::vector<CentralityTable>>> centralities;
};

ReportBundle render(const ReportProducts& products, const std::filesystem::path& out_dir);

}  // namespace fieldlens
