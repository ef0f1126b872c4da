#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fieldlens {

struct QuerySpec {
    std::vector<std::string> keywords;  // boolean keyword expressions, OR-joined
    std::string field_scope;            // optional per-source subject-area restriction
    std::string target_field_label;     // annotated onto every harvested record
};

/// One logical harvesting run against one source. At most one request is in
/// flight per session; distinct sources use distinct sessions. Pages are
/// cached under cache_dir/<source>/<query-hash>/<page>.json before being
/// yielded, so a warm rerun touches the network zero times.
struct HarvestSession {
    std::string source_id;  // "source1" (Scopus-shaped) or "source2" (WoS-shaped)
    std::string base_url;   // e.g. http://127.0.0.1:8089
    int page_size = 25;
    std::filesystem::path cache_dir = "cache";
    std::string api_key;    // falls back to FIELDLENS_SOURCE{1,2}_KEY
    double backoff_base_s = 1.0;
    double backoff_cap_s = 60.0;
    int max_retries = 8;

    // counters, updated as the session runs
    std::size_t retrieved = 0;
    std::size_t network_calls = 0;
};

/// Fetches every page until the source reports exhaustion. Records come back
/// normalized to the corpus JSONL schema, annotated with the target field
/// label and source id. Throws AuthError, RateLimited, SourceSchemaError.
std::vector<nlohmann::ordered_json> run_query(const QuerySpec& q, HarvestSession& session);

/// Reference lists per DOI; unresolvable DOIs map to the empty set and are
/// appended to unresolved_log. Negative results are cached too.
std::map<std::string, std::set<std::string>> fetch_references(
    const std::set<std::string>& dois, HarvestSession& session,
    std::vector<std::string>* unresolved_log = nullptr);

}  // namespace fieldlens
