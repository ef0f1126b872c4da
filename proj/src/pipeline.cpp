#include "fieldlens/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fieldlens/errors.hpp"
#include "fieldlens/graphml.hpp"
#include "fieldlens/harvest.hpp"
#include "fieldlens/idmetrics.hpp"
#include "fieldlens/motifs.hpp"
#include "fieldlens/report.hpp"
#include "fieldlens/socionet.hpp"
#include "fieldlens/topics.hpp"
#include "fieldlens/util.hpp"

namespace fieldlens {

namespace {

bool parse_bool_value(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "' expects a boolean, got '" + v + "'");
}

RecordFormat parse_format(const std::string& v, const std::string& key) {
    if (v == "jsonl") return RecordFormat::Jsonl;
    if (v == "csv") return RecordFormat::Csv;
    throw ConfigError("config key '" + key + "' expects jsonl or csv, got '" + v + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path.string());
    const auto base = path.parent_path();

    PipelineConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + " is not key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (value.empty())
            throw ConfigError("config key '" + key + "' has an empty value");

        if (key == "field_a") cfg.field_a = value;
        else if (key == "field_b") cfg.field_b = value;
        else if (key == "input") cfg.input = resolve(base, value);
        else if (key == "input_format") cfg.input_format = parse_format(value, key);
        else if (key == "input_secondary") cfg.input_secondary = resolve(base, value);
        else if (key == "secondary_format") cfg.secondary_format = parse_format(value, key);
        else if (key == "filters") cfg.filters = resolve(base, value);
        else if (key == "prune") cfg.prune = parse_prune_mode(value);
        else if (key == "prune_before_merge") cfg.prune_before_merge = parse_bool_value(value, key);
        else if (key == "nonzero_only") cfg.nonzero_only = parse_bool_value(value, key);
        else if (key == "linkage_include_boundary")
            cfg.linkage_include_boundary = parse_bool_value(value, key);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "resolution") cfg.resolution = std::stod(value);
        else if (key == "venue_rules") cfg.venue_rules = resolve(base, value);
        else if (key == "bundle_template") cfg.bundle_template = resolve(base, value);
        else if (key == "labels_dir") cfg.labels_dir = resolve(base, value);
        else if (key == "label_map") cfg.label_map = resolve(base, value);
        else if (key == "out") cfg.out = resolve(base, value);
        else if (key == "harvest_source") cfg.harvest_source = value;
        else if (key == "harvest_base_url") cfg.harvest_base_url = value;
        else if (key == "harvest_keywords") {
            std::stringstream ss(value);
            std::string kw;
            while (std::getline(ss, kw, '|')) {
                kw = trim(kw);
                if (!kw.empty()) cfg.harvest_keywords.push_back(kw);
            }
        } else if (key == "harvest_field_scope") cfg.harvest_field_scope = value;
        else if (key == "harvest_target_field") cfg.harvest_target_field = value;
        else if (key == "harvest_cache") cfg.harvest_cache = resolve(base, value);
        else if (key == "harvest_page_size") cfg.harvest_page_size = std::stoi(value);
        else if (key == "harvest_with_references")
            cfg.harvest_with_references = parse_bool_value(value, key);
        else if (key == "harvest_out") cfg.harvest_out = resolve(base, value);
        else throw ConfigError("unknown config key '" + key + "'");
    }
    return cfg;
}

void validate_config(const PipelineConfig& cfg) {
    auto require_exists = [](const std::filesystem::path& p, const char* what) {
        if (!std::filesystem::exists(p))
            throw ConfigError(std::string(what) + " path does not exist: " + p.string());
    };
    if (!cfg.input.empty()) require_exists(cfg.input, "input");
    if (cfg.input_secondary) require_exists(*cfg.input_secondary, "input_secondary");
    if (cfg.filters) require_exists(*cfg.filters, "filters");
    if (cfg.venue_rules) require_exists(*cfg.venue_rules, "venue_rules");
    if (cfg.bundle_template) require_exists(*cfg.bundle_template, "bundle_template");
    if (cfg.labels_dir) require_exists(*cfg.labels_dir, "labels_dir");
    if (cfg.label_map) require_exists(*cfg.label_map, "label_map");
}

PipelineLock::PipelineLock(const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    path_ = out_dir / ".fieldlens.lock";
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0)
        throw Error("another pipeline run holds " + path_.string() +
                    " (remove it if that run crashed)");
    ::close(fd);
}

PipelineLock::~PipelineLock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
}

namespace {

Corpus load_pipeline_corpus(const PipelineConfig& cfg) {
    auto path = cfg.out / "corpus.jsonl";
    if (!std::filesystem::exists(path))
        throw ConfigError("missing artifact " + path.string() + "; run 'fieldlens ingest' first");
    std::ifstream in(path);
    return ingest_records(in, RecordFormat::Jsonl, cfg.field_a, cfg.field_b);
}

CitationGraph load_graph_artifact(const PipelineConfig& cfg, const std::string& name,
                                  const char* producer) {
    auto path = cfg.out / "graphs" / (name + ".graphml");
    if (!std::filesystem::exists(path))
        throw ConfigError("missing artifact " + path.string() + "; run 'fieldlens " +
                          producer + "' first");
    std::ifstream in(path);
    return read_citation_graphml(in);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::uint64_t require_seed(const PipelineConfig& cfg) {
    if (!cfg.seed)
        throw ConfigError("no seed configured; set 'seed = N' or pass --seed");
    return *cfg.seed;
}

}  // namespace

void stage_harvest(const PipelineConfig& cfg) {
    if (!cfg.harvest_source)
        throw ConfigError("harvest needs 'harvest_source' (source1 or source2) in the config");
    if (cfg.harvest_base_url.empty())
        throw ConfigError("harvest needs 'harvest_base_url' in the config");
    if (cfg.harvest_keywords.empty())
        throw ConfigError("harvest needs 'harvest_keywords' ('|'-separated) in the config");
    if (cfg.harvest_target_field.empty())
        throw ConfigError("harvest needs 'harvest_target_field' in the config");

    QuerySpec query{cfg.harvest_keywords, cfg.harvest_field_scope, cfg.harvest_target_field};
    HarvestSession session;
    session.source_id = *cfg.harvest_source;
    session.base_url = cfg.harvest_base_url;
    session.page_size = cfg.harvest_page_size;
    session.cache_dir = cfg.harvest_cache;

    auto records = run_query(query, session);
    if (cfg.harvest_with_references) {
        std::set<std::string> dois;
        for (const auto& r : records)
            if (r.contains("doi") && r["doi"].is_string() && !r["doi"].get<std::string>().empty())
                dois.insert(canonical_doi(r["doi"].get<std::string>()));
        if (!dois.empty()) {
            std::vector<std::string> unresolved;
            auto refs = fetch_references(dois, session, &unresolved);
            for (auto& r : records) {
                if (!r.contains("doi") || !r["doi"].is_string()) continue;
                auto it = refs.find(canonical_doi(r["doi"].get<std::string>()));
                if (it != refs.end()) r["references"] = it->second;
            }
            for (const auto& doi : unresolved)
                std::cerr << "unresolved references for " << doi << "\n";
        }
    }

    std::ostringstream lines;
    for (const auto& r : records) lines << r.dump() << '\n';
    if (cfg.harvest_out) {
        std::ofstream out(*cfg.harvest_out, std::ios::binary);
        if (!out) throw IoError("cannot write " + cfg.harvest_out->string());
        out << lines.str();
    } else {
        std::cout << lines.str();
    }
    std::cerr << "harvested " << records.size() << " records from " << session.source_id
              << " (" << session.network_calls << " network calls)\n";
}

void stage_ingest(const PipelineConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("no 'input' configured");
    std::ifstream in(cfg.input);
    if (!in) throw ConfigError("input path does not exist: " + cfg.input.string());
    IngestStats stats;
    Corpus corpus = ingest_records(in, cfg.input_format, cfg.field_a, cfg.field_b, &stats);

    if (cfg.input_secondary) {
        std::ifstream sec(*cfg.input_secondary);
        if (!sec)
            throw ConfigError("input_secondary path does not exist: " +
                              cfg.input_secondary->string());
        IngestStats sec_stats;
        Corpus secondary =
            ingest_records(sec, cfg.secondary_format, cfg.field_a, cfg.field_b, &sec_stats);
        std::size_t before = corpus.size();
        corpus = merge_corpora(corpus, secondary);
        std::cerr << "merged secondary source: " << corpus.size() - before << " new of "
                  << secondary.size() << " records\n";
    }

    ReportWriter writer(cfg.out);
    if (cfg.filters) {
        auto specs = load_filter_specs(cfg.filters->string());
        auto [kept, log] = apply_filters(corpus, specs);
        std::ostringstream csv;
        csv << "doi,filter\n";
        for (const auto& [doi, filter] : log.rejected)
            csv << csv_escape(doi) << ',' << csv_escape(filter) << '\n';
        writer.write_text("filter_log.csv", csv.str());
        std::cerr << "filters rejected " << log.rejected.size() << " of " << corpus.size()
                  << " records\n";
        corpus = std::move(kept);
        if (corpus.empty()) throw EmptyCorpus("filters rejected every record");
    }

    std::ostringstream jsonl;
    write_jsonl(corpus, jsonl);
    writer.write_text("corpus.jsonl", jsonl.str());
    std::cerr << "ingested " << corpus.size() << " records (dropped "
              << stats.dropped_missing_doi << " without DOI, deduplicated "
              << stats.deduplicated << ")\n";
}

void stage_graph(const PipelineConfig& cfg) {
    Corpus corpus = load_pipeline_corpus(cfg);
    CitationGraph ga = build_graph(corpus, Scope::FieldA);
    CitationGraph gb = build_graph(corpus, Scope::FieldB);
    if (cfg.prune_before_merge) {
        ga = prune_leaves(ga, cfg.prune);
        gb = prune_leaves(gb, cfg.prune);
    }
    CitationGraph merged = merge_graphs(ga, gb, corpus);
    if (!cfg.prune_before_merge) merged = prune_leaves(merged, cfg.prune);

    ReportWriter writer(cfg.out);
    writer.write_citation_graph("field_a", ga);
    writer.write_citation_graph("field_b", gb);
    writer.write_citation_graph("merged", merged);
    writer.write_merged_edge_csv(merged);

    std::vector<std::pair<std::string, DegreeStats>> rows;
    if (!ga.empty()) rows.emplace_back(cfg.field_a, degree_stats(ga, cfg.nonzero_only));
    if (!gb.empty()) rows.emplace_back(cfg.field_b, degree_stats(gb, cfg.nonzero_only));
    auto boundary = boundary_set(merged);
    if (!boundary.empty()) {
        CitationGraph bgraph = induced_subgraph(merged, boundary);
        if (!bgraph.empty())
            rows.emplace_back("boundary", degree_stats(bgraph, cfg.nonzero_only));
    }
    if (!merged.empty()) rows.emplace_back("merged", degree_stats(merged, cfg.nonzero_only));
    writer.write_degree_stats(rows);
    std::cerr << "graphs: " << cfg.field_a << " " << ga.node_count() << "/" << ga.edge_count()
              << ", " << cfg.field_b << " " << gb.node_count() << "/" << gb.edge_count()
              << ", merged " << merged.node_count() << "/" << merged.edge_count() << "\n";
}

void stage_metrics(const PipelineConfig& cfg) {
    CitationGraph ga = load_graph_artifact(cfg, "field_a", "graph");
    CitationGraph gb = load_graph_artifact(cfg, "field_b", "graph");
    CitationGraph merged = load_graph_artifact(cfg, "merged", "graph");
    LinkageOptions opts{cfg.linkage_include_boundary};
    IdMetricsReport report = compute_metrics(ga, gb, merged, opts);
    ReportWriter writer(cfg.out);
    writer.write_id_metrics(report);
    std::cerr << "IDp=" << format_ratio(report.idp) << " IDl=" << format_ratio(report.idl)
              << " D=" << format_ratio(report.dominance) << " m=" << report.m_cross << "\n";
}

void stage_motifs(const PipelineConfig& cfg) {
    CitationGraph merged = load_graph_artifact(cfg, "merged", "graph");
    MotifCensus c = census(merged);
    ReportWriter writer(cfg.out);
    writer.write_census(c);
    writer.write_motif_shares(c);
    writer.write_participation(c);
    for (MotifGroup g : all_motif_groups()) {
        CitationGraph sub = motif_subnetwork(c, g, merged);
        if (!sub.empty()) writer.write_citation_graph("motif_" + to_string(g), sub);
    }
    std::cerr << "census: " << c.total() << " interaction instances, "
              << c.participation.size() << " boundary papers involved\n";
}

void stage_communities(const PipelineConfig& cfg) {
    const auto seed = require_seed(cfg);
    ReportWriter writer(cfg.out);
    std::vector<std::pair<std::string, ComponentReport>> component_rows;
    std::size_t analyzed = 0;
    for (MotifGroup g : all_motif_groups()) {
        const std::string name = "motif_" + to_string(g);
        auto path = cfg.out / "graphs" / (name + ".graphml");
        if (!std::filesystem::exists(path)) continue;  // group absent from this corpus
        std::ifstream in(path);
        CitationGraph sub = read_citation_graphml(in);
        Partition part = louvain(sub, cfg.resolution, seed);
        writer.write_partition(name, part);
        component_rows.emplace_back(name, components(sub));
        ++analyzed;
    }
    if (analyzed == 0)
        throw ConfigError("no motif subnetwork artifacts under " +
                          (cfg.out / "graphs").string() + "; run 'fieldlens motifs' first");
    writer.write_components(component_rows);
    std::cerr << "louvain over " << analyzed << " motif networks (seed " << seed << ")\n";
}

namespace {

Partition load_partition_artifact(const PipelineConfig& cfg, const std::string& network) {
    auto path = cfg.out / "communities" / (network + ".csv");
    if (!std::filesystem::exists(path))
        throw ConfigError("missing artifact " + path.string() +
                          "; run 'fieldlens communities' first");
    std::ifstream in(path);
    Partition part;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (trim(line).empty()) continue;
        auto cols = split_csv_line(line);
        if (cols.size() < 2) throw IoError("bad partition row in " + path.string());
        part.assignment[cols[0]] = std::stoi(cols[1]);
    }
    return part;
}

}  // namespace

void stage_topics_bundle(const PipelineConfig& cfg) {
    Corpus corpus = load_pipeline_corpus(cfg);
    std::string header;
    if (cfg.bundle_template) header = read_text_file(*cfg.bundle_template);
    ReportWriter writer(cfg.out);
    std::size_t emitted = 0;
    for (MotifGroup g : all_motif_groups()) {
        const std::string name = "motif_" + to_string(g);
        if (!std::filesystem::exists(cfg.out / "communities" / (name + ".csv"))) continue;
        Partition part = load_partition_artifact(cfg, name);
        auto bundles = build_bundles(part, corpus);
        writer.write_bundle_text(name, render_bundles(bundles, header));
        ++emitted;
    }
    if (emitted == 0)
        throw ConfigError("no community artifacts under " +
                          (cfg.out / "communities").string() +
                          "; run 'fieldlens communities' first");
    std::cerr << "wrote " << emitted << " topic bundles\n";
}

void stage_topics_apply(const PipelineConfig& cfg) {
    if (!cfg.labels_dir)
        throw ConfigError("topics apply needs 'labels_dir' in the config");
    ReportWriter writer(cfg.out);
    std::size_t applied = 0;
    for (MotifGroup g : all_motif_groups()) {
        const std::string name = "motif_" + to_string(g);
        auto path = *cfg.labels_dir / (name + ".txt");
        if (!std::filesystem::exists(path)) continue;
        std::vector<std::string> warnings;
        auto labels = parse_labels(read_text_file(path), &warnings);
        for (const auto& w : warnings) std::cerr << name << ": " << w << "\n";
        if (cfg.label_map) labels = normalize_labels(std::move(labels), cfg.label_map->string());
        writer.write_labels(name, labels);
        ++applied;
    }
    if (applied == 0)
        throw ConfigError("no label files named motif_<group>.txt under " +
                          cfg.labels_dir->string());
    std::cerr << "applied labels for " << applied << " networks\n";
}

void stage_socionet(const PipelineConfig& cfg) {
    Corpus corpus = load_pipeline_corpus(cfg);
    CitationGraph merged = load_graph_artifact(cfg, "merged", "graph");

    // the venue/author networks are built from boundary papers
    auto boundary = boundary_set(merged);
    Corpus subset(corpus.field_a_label(), corpus.field_b_label());
    for (const auto& doi : boundary)
        if (const PaperRecord* rec = corpus.find(doi)) subset.insert(*rec);
    if (subset.empty())
        throw MissingMetadata("no boundary papers with corpus records; socionet has no input");

    VenueAggregationRule rule;
    if (cfg.venue_rules) rule = load_venue_rules(cfg.venue_rules->string());
    Corpus aggregated = aggregate_venues(subset, rule);

    ReportWriter writer(cfg.out);
    std::vector<std::pair<std::string, std::vector<CentralityTable>>> top5;
    std::vector<std::pair<std::string, SocioComponentReport>> component_rows;
    for (SocioKind kind : {SocioKind::Venue, SocioKind::Author}) {
        const std::string name = kind == SocioKind::Venue ? "venues" : "authors";
        SocioNetwork net = build_socionet(aggregated, kind);
        writer.write_socio_graph(name, net);
        component_rows.emplace_back(name, socio_components(net));
        SocioNetwork main = main_component(net);
        std::vector<CentralityTable> tables;
        for (CentralityMeasure m : {CentralityMeasure::WeightedDegree,
                                    CentralityMeasure::Betweenness,
                                    CentralityMeasure::Closeness})
            tables.push_back(centrality(main, m));
        writer.write_centrality(name, tables);
        top5.emplace_back(name, std::move(tables));
        std::cerr << name << ": " << net.node_count() << " nodes, " << net.edge_count()
                  << " edges; main component " << main.node_count() << " nodes\n";
    }
    writer.write_centrality_top5(top5);
    writer.write_socio_components(component_rows);
}

void stage_report(const PipelineConfig& cfg) {
    ReportWriter writer(cfg.out);
    auto bundle = writer.finalize_manifest();
    std::cerr << "manifest lists " << bundle.artifacts.size() << " artifacts\n";
}

void run_all(const PipelineConfig& cfg) {
    stage_ingest(cfg);
    stage_graph(cfg);
    stage_metrics(cfg);
    stage_motifs(cfg);
    stage_communities(cfg);
    stage_topics_bundle(cfg);
    if (cfg.labels_dir) stage_topics_apply(cfg);
    stage_socionet(cfg);
    stage_report(cfg);
}

}  // namespace fieldlens
