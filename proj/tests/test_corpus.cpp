#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "fieldlens/corpus.hpp"
#include "fieldlens/errors.hpp"
#include "testutil.hpp"

using namespace fieldlens;

namespace {

Corpus ingest_jsonl(const std::string& text, IngestStats* stats = nullptr) {
    std::istringstream in(text);
    return ingest_records(in, RecordFormat::Jsonl, "BE", "CS", stats);
}

}  // namespace

TEST_CASE("canonical_doi lowercases, trims, and strips the url prefix") {
    CHECK(canonical_doi("  10.1/A ") == "10.1/a");
    CHECK(canonical_doi("HTTPS://DOI.ORG/10.1/A") == "10.1/a");
    CHECK(canonical_doi("http://doi.org/10.5555/X") == "10.5555/x");
    CHECK(canonical_doi("doi.org/10.1/ab") == "10.1/ab");
    CHECK(canonical_doi("10.1145/3565383.3566112") == "10.1145/3565383.3566112");
}

TEST_CASE("ingest keeps one record per DOI") {
    auto corpus = ingest_jsonl(
        R"({"doi":"10.1/A","title":"one","fields":["BE"]})"
        "\n"
        R"({"doi":"10.1/B","title":"two","fields":["CS"]})"
        "\n");
    CHECK(corpus.size() == 2);
    CHECK(corpus.contains("10.1/a"));
    CHECK(corpus.contains("10.1/b"));
}

TEST_CASE("ingest dedups DOIs across spellings") {
    IngestStats stats;
    auto corpus = ingest_jsonl(
        R"({"doi":"HTTPS://DOI.ORG/10.1/A","title":"first","fields":["BE"]})"
        "\n"
        R"({"doi":"10.1/a","title":"second","fields":["CS"]})"
        "\n",
        &stats);
    CHECK(corpus.size() == 1);
    CHECK(stats.deduplicated == 1);
    CHECK(corpus.find("10.1/a")->title == "first");  // first occurrence wins
}

TEST_CASE("record without doi is dropped and counted, not an error") {
    IngestStats stats;
    auto corpus = ingest_jsonl(
        R"({"title":"no doi here","fields":["BE"]})"
        "\n"
        R"({"doi":"10.1/a","title":"ok","fields":["BE"]})"
        "\n",
        &stats);
    CHECK(corpus.size() == 1);
    CHECK(stats.dropped_missing_doi == 1);
}

TEST_CASE("unparseable line raises MalformedInput with the line number") {
    try {
        ingest_jsonl("{\"doi\":\"10.1/a\",\"fields\":[\"BE\"]}\nnot json at all\n");
        FAIL("expected MalformedInput");
    } catch (const MalformedInput& e) {
        CHECK(e.line_no() == 2);
    }
}

TEST_CASE("empty stream raises EmptyCorpus") {
    CHECK_THROWS_AS(ingest_jsonl(""), EmptyCorpus);
}

TEST_CASE("self references are removed at ingestion") {
    auto corpus = ingest_jsonl(
        R"({"doi":"10.1/a","fields":["BE"],"references":["10.1/A","10.1/b"]})"
        "\n");
    const auto* rec = corpus.find("10.1/a");
    REQUIRE(rec != nullptr);
    CHECK(rec->references == std::set<std::string>{"10.1/b"});
}

TEST_CASE("csv ingestion parses the five-column schema") {
    std::istringstream in(
        "doi,title,year,fields,references\n"
        "10.1/a,\"Governance, decentralized\",2021,BE;CS,10.1/b;10.1/c\n"
        "10.1/b,plain,2020,CS,\n");
    auto corpus = ingest_records(in, RecordFormat::Csv, "BE", "CS");
    CHECK(corpus.size() == 2);
    const auto* a = corpus.find("10.1/a");
    REQUIRE(a != nullptr);
    CHECK(a->title == "Governance, decentralized");
    CHECK(a->year == 2021);
    CHECK(a->fields == std::set<std::string>{"BE", "CS"});
    CHECK(a->references == std::set<std::string>{"10.1/b", "10.1/c"});
}

TEST_CASE("ingestion is idempotent over its own serialization") {
    std::mt19937 rng(7);
    auto pair = testutil::random_field_pair(rng);
    std::ostringstream out;
    write_jsonl(pair.corpus, out);
    std::istringstream in(out.str());
    auto again = ingest_records(in, RecordFormat::Jsonl, "A", "B");
    CHECK(again == pair.corpus);
}

TEST_CASE("merge_corpora adds only novel DOIs") {
    auto primary = ingest_jsonl(R"({"doi":"10.1/a","fields":["BE"]})" "\n");
    auto secondary = ingest_jsonl(R"({"doi":"10.1/b","fields":["CS"]})" "\n");
    auto merged = merge_corpora(primary, secondary);
    CHECK(merged.size() == 2);

    SUBCASE("size law holds on random corpora") {
        std::mt19937 rng(11);
        for (int round = 0; round < 20; ++round) {
            auto p = testutil::random_field_pair(rng).corpus;
            auto s = testutil::random_field_pair(rng).corpus;
            std::size_t novel = 0;
            for (const auto& [doi, rec] : s.papers())
                if (!p.contains(doi)) ++novel;
            CHECK(merge_corpora(p, s).size() == p.size() + novel);
        }
    }
}

TEST_CASE("merge keeps the primary record on DOI collision") {
    auto primary = ingest_jsonl(R"({"doi":"10.1/x","title":"p","fields":["BE"]})" "\n");
    auto secondary = ingest_jsonl(R"({"doi":"10.1/x","title":"s","fields":["CS"]})" "\n");
    auto merged = merge_corpora(primary, secondary);
    CHECK(merged.size() == 1);
    CHECK(merged.find("10.1/x")->fields == std::set<std::string>{"BE"});
    CHECK(merged.find("10.1/x")->title == "p");
}

TEST_CASE("merge with an empty-ish secondary is the identity") {
    auto primary = ingest_jsonl(
        R"({"doi":"10.1/a","fields":["BE"]})"
        "\n"
        R"({"doi":"10.1/b","fields":["CS"]})"
        "\n");
    auto merged = merge_corpora(primary, primary);  // all collisions
    CHECK(merged == primary);
}

TEST_CASE("merge rejects mismatched label pairs") {
    Corpus p("BE", "CS"), s("X", "Y");
    CHECK_THROWS_AS(merge_corpora(p, s), LabelMismatch);
}

TEST_CASE("block filter removes regex matches") {
    auto corpus = ingest_jsonl(
        R"({"doi":"10.1/a","title":"A study of Data Access Objects","fields":["BE"]})"
        "\n"
        R"({"doi":"10.1/b","title":"Decentralized governance","fields":["BE"]})"
        "\n");
    std::istringstream spec("block title Data Access Object\n");
    auto filters = parse_filter_specs(spec, "");
    auto [kept, log] = apply_filters(corpus, filters);
    CHECK(kept.size() == 1);
    CHECK(kept.contains("10.1/b"));
    REQUIRE(log.rejected.size() == 1);
    CHECK(log.rejected[0].first == "10.1/a");
}

TEST_CASE("empty filter list changes nothing") {
    auto corpus = ingest_jsonl(R"({"doi":"10.1/a","fields":["BE"]})" "\n");
    auto [kept, log] = apply_filters(corpus, {});
    CHECK(kept == corpus);
    CHECK(log.rejected.empty());
}

TEST_CASE("allowlist keeps only listed DOIs") {
    std::string lines;
    for (int i = 0; i < 5; ++i)
        lines += R"({"doi":"10.1/p)" + std::to_string(i) + R"(","fields":["BE"]})" "\n";
    auto corpus = ingest_jsonl(lines);

    testutil::TempDir tmp("allow");
    auto allow_path = tmp.path / "allow.txt";
    {
        std::ofstream out(allow_path);
        out << "10.1/p0\n10.1/p2\n10.1/p4\n";
    }
    std::istringstream spec("allow_doi_file " + allow_path.string() + "\n");
    auto filters = parse_filter_specs(spec, "");
    auto [kept, log] = apply_filters(corpus, filters);
    CHECK(kept.size() == 3);
    CHECK(log.rejected.size() == 2);
}

TEST_CASE("require filter drops records missing the field") {
    auto corpus = ingest_jsonl(
        R"({"doi":"10.1/a","abstract":"text","fields":["BE"]})"
        "\n"
        R"({"doi":"10.1/b","abstract":null,"fields":["BE"]})"
        "\n");
    std::istringstream spec("require abstract\n");
    auto [kept, log] = apply_filters(corpus, parse_filter_specs(spec, ""));
    CHECK(kept.size() == 1);
    CHECK(kept.contains("10.1/a"));
}

TEST_CASE("filter referencing an unknown field raises UnknownField") {
    std::istringstream spec("require citations_count\n");
    CHECK_THROWS_AS(parse_filter_specs(spec, ""), UnknownField);
}

TEST_CASE("log size plus survivors equals input size") {
    std::mt19937 rng(23);
    for (int round = 0; round < 20; ++round) {
        auto corpus = testutil::random_field_pair(rng).corpus;
        std::istringstream spec("block doi [02468]$\nrequire title\n");
        auto [kept, log] = apply_filters(corpus, parse_filter_specs(spec, ""));
        CHECK(kept.size() + log.rejected.size() == corpus.size());
    }
}
