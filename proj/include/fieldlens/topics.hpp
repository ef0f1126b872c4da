#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fieldlens/communities.hpp"
#include "fieldlens/corpus.hpp"

namespace fieldlens {

struct BundleEntry {
    std::string doi;  // ordering key
    std::string title;
    std::string abstract_text;  // "Not found" when the paper has none
    int community_id = 0;
};

struct TopicBundle {
    int community_id = 0;
    std::vector<BundleEntry> entries;  // DOI-sorted
};

/// One bundle per community id (0..max), entries DOI-sorted. Papers missing
/// from the corpus contribute their DOI as title; missing or empty abstracts
/// render as "Not found".
std::vector<TopicBundle> build_bundles(const Partition& partition, const Corpus& corpus);

/// Entry line format: `<title> --- <abstract> --- <community_id>`; one blank
/// line between communities; the header is prepended verbatim (a trailing
/// newline is added if it lacks one), followed by one blank line.
std::string render_bundles(const std::vector<TopicBundle>& bundles, const std::string& header);

struct TopicLabel {
    int community_id = 0;
    std::string description;
    std::optional<std::string> normalized;
};

/// Extracts `Community number: N --- Description: ...` lines, tolerating
/// surrounding whitespace and trailing commas. Duplicate ids keep the last
/// description (a warning is recorded). Throws NoLabelsFound if nothing
/// matches.
std::vector<TopicLabel> parse_labels(const std::string& response,
                                     std::vector<std::string>* warnings = nullptr);

/// Rewrites `normalized` through a two-column CSV map (pattern,canonical);
/// case-insensitive exact match first, then regex full-match. Unmatched labels
/// keep normalized = description. Throws BadMapFile.
std::vector<TopicLabel> normalize_labels(std::vector<TopicLabel> labels,
                                         const std::string& map_file);

}  // namespace fieldlens
