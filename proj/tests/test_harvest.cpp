#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <set>
#include <sstream>

#include "fieldlens/corpus.hpp"
#include "fieldlens/errors.hpp"
#include "fieldlens/harvest.hpp"
#include "mock_source.hpp"
#include "testutil.hpp"

using namespace fieldlens;

namespace {

HarvestSession make_session(const mocksource::ScopusLikeServer& server,
                            const std::filesystem::path& cache) {
    HarvestSession s;
    s.source_id = "source1";
    s.base_url = server.base_url();
    s.page_size = 2;
    s.cache_dir = cache;
    s.api_key = mocksource::ScopusLikeServer::kApiKey;
    s.backoff_base_s = 0.01;
    s.backoff_cap_s = 0.05;
    return s;
}

QuerySpec demo_query() {
    return {{"decentraliz* AND autonomous AND organiz*", "dao* AND *governance"},
            "SUBJAREA(BUSI)",
            "BE"};
}

}  // namespace

TEST_CASE("run_query pages through the source exactly once despite a 429") {
    mocksource::ScopusLikeServer server;
    testutil::TempDir cache("harvest_cache");
    auto session = make_session(server, cache.path);

    auto records = run_query(demo_query(), session);
    REQUIRE(records.size() == 5);
    CHECK(server.throttled() == 1);  // page 2 was rate-limited once

    std::set<std::string> dois;
    for (const auto& r : records) dois.insert(r["doi"].get<std::string>());
    CHECK(dois.size() == 5);  // exactly-once delivery
    for (const auto& r : records) {
        CHECK(r["fields"] == nlohmann::json::array({"BE"}));
        CHECK(r["source"] == "source1");
    }
    CHECK(session.retrieved == 5);
}

TEST_CASE("warm cache replays the query without any network call") {
    mocksource::ScopusLikeServer server;
    testutil::TempDir cache("harvest_warm");
    auto s1 = make_session(server, cache.path);
    auto first = run_query(demo_query(), s1);
    const int calls_after_first = server.requests();

    auto s2 = make_session(server, cache.path);
    auto second = run_query(demo_query(), s2);
    CHECK(server.requests() == calls_after_first);  // zero new requests
    CHECK(s2.network_calls == 0);
    REQUIRE(second.size() == first.size());
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(second[i] == first[i]);
}

TEST_CASE("zero-hit queries return an empty sequence without error") {
    mocksource::ScopusLikeServer server;
    testutil::TempDir cache("harvest_zero");
    auto session = make_session(server, cache.path);
    QuerySpec q{{"no such topic anywhere"}, "", "BE"};
    auto records = run_query(q, session);
    CHECK(records.empty());
    CHECK(session.retrieved == 0);
}

TEST_CASE("missing credential raises AuthError before any request") {
    mocksource::ScopusLikeServer server;
    testutil::TempDir cache("harvest_auth");
    auto session = make_session(server, cache.path);
    session.api_key.clear();
    ::unsetenv("FIELDLENS_SOURCE1_KEY");
    CHECK_THROWS_AS(run_query(demo_query(), session), AuthError);
    CHECK(server.requests() == 0);
}

TEST_CASE("rejected credential raises AuthError") {
    mocksource::ScopusLikeServer server;
    testutil::TempDir cache("harvest_badkey");
    auto session = make_session(server, cache.path);
    session.api_key = "wrong";
    CHECK_THROWS_AS(run_query(demo_query(), session), AuthError);
}

TEST_CASE("records normalize to the corpus JSONL schema") {
    mocksource::ScopusLikeServer server;
    testutil::TempDir cache("harvest_schema");
    auto session = make_session(server, cache.path);
    auto records = run_query(demo_query(), session);
    std::ostringstream jsonl;
    for (const auto& r : records) jsonl << r.dump() << '\n';
    std::istringstream in(jsonl.str());
    auto corpus = ingest_records(in, RecordFormat::Jsonl, "BE", "CS");
    CHECK(corpus.size() == 5);
    const auto* rec = corpus.find("10.7/rec0");
    REQUIRE(rec != nullptr);
    CHECK(rec->title == "Record 0");
    CHECK(rec->year == 2022);
    REQUIRE(rec->venue.has_value());
    CHECK(rec->venue->kind == VenueKind::Journal);
    REQUIRE(rec->authors.size() == 1);
    CHECK(rec->authors[0].author_id == "au0");
}

TEST_CASE("fetch_references resolves DOIs and logs unresolvable ones") {
    mocksource::ScopusLikeServer server;
    testutil::TempDir cache("harvest_refs");
    auto session = make_session(server, cache.path);
    std::vector<std::string> unresolved;
    auto refs = fetch_references({"10.7/rec0", "10.7/unresolvable"}, session, &unresolved);
    CHECK(refs.at("10.7/rec0") ==
          std::set<std::string>{"10.7/ref1", "10.7/ref2", "10.7/ref3"});
    CHECK(refs.at("10.7/unresolvable").empty());
    REQUIRE(unresolved.size() == 1);
    CHECK(unresolved[0] == "10.7/unresolvable");

    SUBCASE("negative results are cached too") {
        auto s2 = make_session(server, cache.path);
        std::vector<std::string> log2;
        auto again = fetch_references({"10.7/rec0", "10.7/unresolvable"}, s2, &log2);
        CHECK(s2.network_calls == 0);
        CHECK(again == refs);
    }
}

TEST_CASE("rate-limited batch still returns every reference exactly once") {
    mocksource::ScopusLikeServer server;
    testutil::TempDir cache("harvest_refs429");
    auto session = make_session(server, cache.path);
    // drain the search-page throttle first so it hits the reference fetches
    (void)run_query(demo_query(), session);
    server.rearm_rate_limit();  // affects only the search route; references stay clean
    auto refs = fetch_references({"10.7/rec1", "10.7/rec2"}, session);
    CHECK(refs.size() == 2);
    for (const auto& [doi, set] : refs) CHECK(set.size() == 3);
}
