// fieldlens: interdisciplinarity analysis of two-field citation corpora.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fieldlens/errors.hpp"
#include "fieldlens/pipeline.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> prune;
};

fieldlens::PipelineConfig resolve_config(const CliOverrides& cli) {
    if (cli.config_path.empty()) throw fieldlens::ConfigError("--config is required");
    auto cfg = fieldlens::load_config(cli.config_path);
    if (cli.out) cfg.out = *cli.out;
    if (cli.seed) cfg.seed = *cli.seed;
    if (cli.prune) cfg.prune = fieldlens::parse_prune_mode(*cli.prune);
    fieldlens::validate_config(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fieldlens: map interdisciplinary knowledge flow between two research fields"};
    app.require_subcommand(1);

    CliOverrides cli;
    app.add_option("--config", cli.config_path, "pipeline configuration file")
        ->envname("FIELDLENS_CONFIG");
    app.add_option("--out", cli.out, "output directory (overrides config)");
    app.add_option("--seed", cli.seed, "Louvain seed (overrides config)");
    app.add_option("--prune", cli.prune, "prune mode: fixpoint or single_pass")
        ->check(CLI::IsMember({"fixpoint", "single_pass"}));

    auto* harvest = app.add_subcommand("harvest", "fetch records from a literature source");
    auto* ingest = app.add_subcommand("ingest", "normalize raw records into the corpus");
    auto* graph = app.add_subcommand("graph", "build, prune, and merge citation graphs");
    auto* metrics = app.add_subcommand("metrics", "compute interdisciplinarity metrics");
    auto* motifs = app.add_subcommand("motifs", "classify boundary-paper interaction motifs");
    auto* communities = app.add_subcommand("communities", "Louvain communities per motif network");
    auto* topics = app.add_subcommand("topics", "community text bundles and labels");
    topics->require_subcommand(1);
    auto* topics_bundle = topics->add_subcommand("bundle", "write per-community text bundles");
    auto* topics_apply = topics->add_subcommand("apply", "parse and normalize label responses");
    auto* socionet = app.add_subcommand("socionet", "venue and author networks with centralities");
    auto* report = app.add_subcommand("report", "finalize the artifact manifest");
    auto* all = app.add_subcommand("all", "run the whole pipeline in order");

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = resolve_config(cli);
        if (harvest->parsed()) {
            fieldlens::stage_harvest(cfg);
        } else {
            fieldlens::PipelineLock lock(cfg.out);
            if (ingest->parsed()) fieldlens::stage_ingest(cfg);
            else if (graph->parsed()) fieldlens::stage_graph(cfg);
            else if (metrics->parsed()) fieldlens::stage_metrics(cfg);
            else if (motifs->parsed()) fieldlens::stage_motifs(cfg);
            else if (communities->parsed()) fieldlens::stage_communities(cfg);
            else if (topics->parsed() && topics_bundle->parsed()) fieldlens::stage_topics_bundle(cfg);
            else if (topics->parsed() && topics_apply->parsed()) fieldlens::stage_topics_apply(cfg);
            else if (socionet->parsed()) fieldlens::stage_socionet(cfg);
            else if (report->parsed()) fieldlens::stage_report(cfg);
            else if (all->parsed()) fieldlens::run_all(cfg);
        }
    } catch (const fieldlens::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
