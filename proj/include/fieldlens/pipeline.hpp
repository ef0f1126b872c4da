#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fieldlens/citegraph.hpp"
#include "fieldlens/corpus.hpp"

namespace fieldlens {

/// Flat key-value configuration driving the CLI pipeline. Relative paths are
/// resolved against the config file's directory.
struct PipelineConfig {
    std::string field_a = "A";
    std::string field_b = "B";

    std::filesystem::path input;
    RecordFormat input_format = RecordFormat::Jsonl;
    std::optional<std::filesystem::path> input_secondary;
    RecordFormat secondary_format = RecordFormat::Jsonl;
    std::optional<std::filesystem::path> filters;

    PruneMode prune = PruneMode::Fixpoint;
    bool prune_before_merge = true;
    bool nonzero_only = true;
    bool linkage_include_boundary = false;

    std::optional<std::uint64_t> seed;  // explicit; no wall-clock default
    double resolution = 1.0;

    std::optional<std::filesystem::path> venue_rules;
    std::optional<std::filesystem::path> bundle_template;
    std::optional<std::filesystem::path> labels_dir;
    std::optional<std::filesystem::path> label_map;

    std::filesystem::path out = "out";

    // harvest stage (optional)
    std::optional<std::string> harvest_source;
    std::string harvest_base_url;
    std::vector<std::string> harvest_keywords;
    std::string harvest_field_scope;
    std::string harvest_target_field;
    std::filesystem::path harvest_cache = "cache";
    int harvest_page_size = 25;
    bool harvest_with_references = false;
    std::optional<std::filesystem::path> harvest_out;  // default: stdout
};

/// Throws ConfigError naming the path when the file is missing, and on
/// unknown keys or malformed values.
PipelineConfig load_config(const std::filesystem::path& path);

/// Checks that every configured input path exists. Throws ConfigError.
void validate_config(const PipelineConfig& cfg);

/// Holds <out>/.fieldlens.lock exclusively for the process lifetime.
class PipelineLock {
public:
    explicit PipelineLock(const std::filesystem::path& out_dir);
    ~PipelineLock();
    PipelineLock(const PipelineLock&) = delete;
    PipelineLock& operator=(const PipelineLock&) = delete;

private:
    std::filesystem::path path_;
};

void stage_harvest(const PipelineConfig& cfg);
void stage_ingest(const PipelineConfig& cfg);
void stage_graph(const PipelineConfig& cfg);
void stage_metrics(const PipelineConfig& cfg);
void stage_motifs(const PipelineConfig& cfg);
void stage_communities(const PipelineConfig& cfg);
void stage_topics_bundle(const PipelineConfig& cfg);
void stage_topics_apply(const PipelineConfig& cfg);
void stage_socionet(const PipelineConfig& cfg);
void stage_report(const PipelineConfig& cfg);

/// ingest -> graph -> metrics -> motifs -> communities -> topics bundle
/// (-> topics apply when labels are configured) -> socionet -> report.
/// Identical to running the subcommands individually in that order.
void run_all(const PipelineConfig& cfg);

}  // namespace fieldlens
