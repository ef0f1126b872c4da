#include "fieldlens/harvest.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <thread>

#include <httplib.h>

#include "fieldlens/corpus.hpp"
#include "fieldlens/errors.hpp"
#include "fieldlens/hash.hpp"
#include "fieldlens/util.hpp"

namespace fieldlens {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string percent_encode(std::string_view s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xf]);
        }
    }
    return out;
}

std::string slugify(std::string_view name) {
    std::string out;
    for (unsigned char c : name) {
        if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
        else if (!out.empty() && out.back() != '-') out.push_back('-');
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}

ordered_json normalized_record(const std::string& doi, const std::string& title,
                               const json& abstract, int year, const json& authors,
                               const json& venue, const QuerySpec& q,
                               const std::string& source_id) {
    ordered_json rec;
    rec["doi"] = doi;
    rec["title"] = title;
    rec["abstract"] = abstract;
    rec["year"] = year;
    rec["fields"] = json::array({q.target_field_label});
    rec["authors"] = authors;
    rec["venue"] = venue;
    rec["references"] = json::array();
    rec["source"] = source_id;
    return rec;
}

struct PageResult {
    std::vector<ordered_json> records;
    std::size_t total = 0;
};

/// Response-shape adapter; one per supported source family.
class SourceAdapter {
public:
    virtual ~SourceAdapter() = default;
    virtual std::string canonical_query(const QuerySpec& q) const = 0;
    virtual std::string search_path(const QuerySpec& q, int page, int page_size) const = 0;
    virtual PageResult parse_search_page(const json& body, const QuerySpec& q,
                                         const std::string& source_id) const = 0;
    virtual std::string references_path(const std::string& doi) const = 0;
    virtual std::set<std::string> parse_references(const json& body) const = 0;
};

// Scopus-shaped responses: search-results / opensearch:totalResults / entry.
class ScopusLikeAdapter final : public SourceAdapter {
public:
    std::string canonical_query(const QuerySpec& q) const override {
        std::string expr;
        for (const auto& kw : q.keywords) {
            if (!expr.empty()) expr += " OR ";
            expr += "TITLE-ABS-KEY(" + kw + ")";
        }
        if (!q.field_scope.empty()) expr = "(" + expr + ") AND " + q.field_scope;
        return expr;
    }

    std::string search_path(const QuerySpec& q, int page, int page_size) const override {
        return "/content/search/scopus?query=" + percent_encode(canonical_query(q)) +
               "&start=" + std::to_string(page * page_size) +
               "&count=" + std::to_string(page_size);
    }

    PageResult parse_search_page(const json& body, const QuerySpec& q,
                                 const std::string& source_id) const override {
        if (!body.contains("search-results"))
            throw SourceSchemaError("response lacks search-results");
        const auto& sr = body["search-results"];
        if (!sr.contains("opensearch:totalResults"))
            throw SourceSchemaError("response lacks opensearch:totalResults");
        PageResult out;
        const auto& total = sr["opensearch:totalResults"];
        out.total = total.is_string() ? std::stoul(total.get<std::string>())
                                      : total.get<std::size_t>();
        if (!sr.contains("entry")) return out;
        for (const auto& e : sr["entry"]) {
            std::string doi = e.value("prism:doi", "");
            std::string title = e.value("dc:title", "");
            json abstract = e.contains("dc:description") ? e["dc:description"] : json();
            int year = 0;
            if (e.contains("prism:coverDate")) {
                std::string date = e["prism:coverDate"].get<std::string>();
                if (date.size() >= 4) year = std::atoi(date.substr(0, 4).c_str());
            }
            json authors = json::array();
            if (e.contains("author"))
                for (const auto& a : e["author"])
                    authors.push_back({{"id", a.value("authid", "")},
                                       {"name", a.value("authname", "")}});
            json venue;
            if (e.contains("prism:publicationName")) {
                std::string name = e["prism:publicationName"].get<std::string>();
                std::string agg = e.value("prism:aggregationType", "Journal");
                venue = {{"id", slugify(name)},
                         {"name", name},
                         {"kind", to_lower(agg).find("journal") != std::string::npos
                                      ? "journal"
                                      : "conference"}};
            }
            out.records.push_back(
                normalized_record(doi, title, abstract, year, authors, venue, q, source_id));
        }
        return out;
    }

    std::string references_path(const std::string& doi) const override {
        return "/content/abstract/doi/" + percent_encode(doi) + "?view=REF";
    }

    std::set<std::string> parse_references(const json& body) const override {
        if (!body.contains("abstracts-retrieval-response"))
            throw SourceSchemaError("reference response lacks abstracts-retrieval-response");
        std::set<std::string> refs;
        const auto& arr = body["abstracts-retrieval-response"];
        if (arr.contains("references") && arr["references"].contains("reference"))
            for (const auto& r : arr["references"]["reference"]) {
                std::string doi = r.value("ce:doi", "");
                if (!doi.empty()) refs.insert(canonical_doi(doi));
            }
        return refs;
    }
};

// WoS-shaped responses: QueryResult / RecordsFound / Data records.
class WosLikeAdapter final : public SourceAdapter {
public:
    std::string canonical_query(const QuerySpec& q) const override {
        std::string expr;
        for (const auto& kw : q.keywords) {
            if (!expr.empty()) expr += " OR ";
            expr += "TS=(" + kw + ")";
        }
        if (!q.field_scope.empty()) expr = "(" + expr + ") AND " + q.field_scope;
        return expr;
    }

    std::string search_path(const QuerySpec& q, int page, int page_size) const override {
        return "/api/wos?usrQuery=" + percent_encode(canonical_query(q)) +
               "&firstRecord=" + std::to_string(page * page_size + 1) +
               "&count=" + std::to_string(page_size);
    }

    PageResult parse_search_page(const json& body, const QuerySpec& q,
                                 const std::string& source_id) const override {
        if (!body.contains("QueryResult") || !body["QueryResult"].contains("RecordsFound"))
            throw SourceSchemaError("response lacks QueryResult.RecordsFound");
        PageResult out;
        out.total = body["QueryResult"]["RecordsFound"].get<std::size_t>();
        if (!body.contains("Data")) return out;
        for (const auto& e : body["Data"]) {
            std::string doi = e.value("DOI", "");
            std::string title = e.value("Title", "");
            json abstract = e.contains("Abstract") ? e["Abstract"] : json();
            int year = e.value("Year", 0);
            json authors = json::array();
            if (e.contains("Authors"))
                for (const auto& a : e["Authors"])
                    authors.push_back({{"id", a.value("Id", "")}, {"name", a.value("Name", "")}});
            json venue;
            if (e.contains("SourceTitle")) {
                std::string name = e["SourceTitle"].get<std::string>();
                std::string doc_type = to_lower(e.value("DocType", "article"));
                venue = {{"id", slugify(name)},
                         {"name", name},
                         {"kind", doc_type.find("proceeding") != std::string::npos ||
                                          doc_type.find("conference") != std::string::npos
                                      ? "conference"
                                      : "journal"}};
            }
            out.records.push_back(
                normalized_record(doi, title, abstract, year, authors, venue, q, source_id));
        }
        return out;
    }

    std::string references_path(const std::string& doi) const override {
        return "/api/wos/references?doi=" + percent_encode(doi);
    }

    std::set<std::string> parse_references(const json& body) const override {
        if (!body.contains("References"))
            throw SourceSchemaError("reference response lacks References");
        std::set<std::string> refs;
        for (const auto& r : body["References"])
            if (r.is_string()) {
                std::string doi = canonical_doi(r.get<std::string>());
                if (!doi.empty()) refs.insert(doi);
            }
        return refs;
    }
};

std::unique_ptr<SourceAdapter> make_adapter(const std::string& source_id) {
    if (source_id == "source1") return std::make_unique<ScopusLikeAdapter>();
    if (source_id == "source2") return std::make_unique<WosLikeAdapter>();
    throw ConfigError("unknown harvest source '" + source_id + "' (expected source1 or source2)");
}

std::string resolve_api_key(const HarvestSession& session) {
    if (!session.api_key.empty()) return session.api_key;
    const char* env_name =
        session.source_id == "source1" ? "FIELDLENS_SOURCE1_KEY" : "FIELDLENS_SOURCE2_KEY";
    const char* value = std::getenv(env_name);
    if (!value || !*value)
        throw AuthError(std::string("missing API credential; set ") + env_name);
    return value;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot write cache file " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

void sleep_seconds(double s) {
    if (s <= 0) return;
    std::this_thread::sleep_for(std::chrono::duration<double>(s));
}

/// GET with caching, 429 handling, and exponential backoff on transient
/// failures. Returns the (possibly cached) response body.
std::string fetch(HarvestSession& session, const std::string& url_path,
                  const std::filesystem::path& cache_file, bool* not_found = nullptr) {
    if (std::filesystem::exists(cache_file)) {
        std::ifstream in(cache_file, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        std::string body = buf.str();
        if (not_found) *not_found = body == "{\"unresolved\":true}";
        return body;
    }

    std::string key = resolve_api_key(session);
    httplib::Client client(session.base_url);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    httplib::Headers headers = {{"X-ApiKey", key}};

    double backoff = session.backoff_base_s;
    double last_retry_after = 0;
    for (int attempt = 0; attempt <= session.max_retries; ++attempt) {
        ++session.network_calls;
        auto res = client.Get(url_path, headers);
        if (!res) {
            sleep_seconds(backoff);
            backoff = std::min(backoff * 2, session.backoff_cap_s);
            continue;
        }
        if (res->status == 200) {
            atomic_write(cache_file, res->body);
            if (not_found) *not_found = false;
            return res->body;
        }
        if (res->status == 401 || res->status == 403)
            throw AuthError("source rejected the API credential (" +
                            std::to_string(res->status) + ")");
        if (res->status == 404) {
            if (not_found) {
                atomic_write(cache_file, "{\"unresolved\":true}");
                *not_found = true;
                return "{\"unresolved\":true}";
            }
            throw SourceSchemaError("source returned 404 for " + url_path);
        }
        if (res->status == 429) {
            double retry_after = backoff;
            if (res->has_header("Retry-After"))
                retry_after = std::atof(res->get_header_value("Retry-After").c_str());
            last_retry_after = retry_after;
            sleep_seconds(std::min(retry_after, session.backoff_cap_s));
            continue;
        }
        if (res->status >= 500) {
            sleep_seconds(backoff);
            backoff = std::min(backoff * 2, session.backoff_cap_s);
            continue;
        }
        throw SourceSchemaError("unexpected HTTP status " + std::to_string(res->status) +
                                " for " + url_path);
    }
    throw RateLimited(last_retry_after,
                      "source kept refusing " + url_path + " past the retry budget");
}

json parse_body(const std::string& body, const std::string& what) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw SourceSchemaError(what + " is not valid JSON");
    return j;
}

}  // namespace

std::vector<ordered_json> run_query(const QuerySpec& q, HarvestSession& session) {
    if (q.keywords.empty()) throw ConfigError("query has no keywords");
    auto adapter = make_adapter(session.source_id);
    const std::string query_hash = sha256_hex(session.source_id + "\n" +
                                              adapter->canonical_query(q) + "\n" +
                                              std::to_string(session.page_size))
                                       .substr(0, 16);
    const auto query_dir = session.cache_dir / session.source_id / query_hash;

    std::vector<ordered_json> records;
    for (int page = 0;; ++page) {
        auto cache_file = query_dir / (std::to_string(page) + ".json");
        std::string body =
            fetch(session, adapter->search_path(q, page, session.page_size), cache_file);
        PageResult result =
            adapter->parse_search_page(parse_body(body, "search page"), q, session.source_id);
        for (auto& rec : result.records) records.push_back(std::move(rec));
        const std::size_t seen = static_cast<std::size_t>(page + 1) *
                                 static_cast<std::size_t>(session.page_size);
        if (result.records.empty() || seen >= result.total) break;
    }
    session.retrieved += records.size();
    return records;
}

std::map<std::string, std::set<std::string>> fetch_references(
    const std::set<std::string>& dois, HarvestSession& session,
    std::vector<std::string>* unresolved_log) {
    if (dois.empty()) throw ConfigError("fetch_references needs at least one DOI");
    auto adapter = make_adapter(session.source_id);
    std::map<std::string, std::set<std::string>> out;
    for (const auto& doi : dois) {
        auto cache_file =
            session.cache_dir / session.source_id / "refs" / (sha256_hex(doi).substr(0, 16) + ".json");
        bool not_found = false;
        std::string body =
            fetch(session, adapter->references_path(doi), cache_file, &not_found);
        if (not_found) {
            out[doi] = {};
            if (unresolved_log) unresolved_log->push_back(doi);
            continue;
        }
        out[doi] = adapter->parse_references(parse_body(body, "reference response"));
    }
    return out;
}

}  // namespace fieldlens
