#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fieldlens {

struct AuthorRef {
    std::string author_id;
    std::string display_name;

    friend bool operator==(const AuthorRef&, const AuthorRef&) = default;
};

enum class VenueKind { Journal, Conference, AggregatedProceedings };

std::string to_string(VenueKind kind);
VenueKind parse_venue_kind(std::string_view s);

struct VenueRef {
    std::string venue_id;
    std::string name;
    VenueKind kind = VenueKind::Journal;

    friend bool operator==(const VenueRef&, const VenueRef&) = default;
};

/// One publication keyed by its canonical DOI.
struct PaperRecord {
    std::string doi;
    std::string title;
    std::optional<std::string> abstract;
    int year = 0;
    std::vector<AuthorRef> authors;
    std::optional<VenueRef> venue;
    std::set<std::string> fields;      // subset of the corpus' two labels
    std::set<std::string> references;  // canonical DOIs, never the paper's own
    std::string source;

    friend bool operator==(const PaperRecord&, const PaperRecord&) = default;
};

/// Lowercases, trims, and strips doi.org URL prefixes.
std::string canonical_doi(std::string_view raw);

/// Immutable-after-build collection of papers for one two-field study.
class Corpus {
public:
    Corpus(std::string field_a_label, std::string field_b_label);

    const std::string& field_a_label() const noexcept { return field_a_; }
    const std::string& field_b_label() const noexcept { return field_b_; }

    bool contains(const std::string& doi) const { return papers_.count(doi) != 0; }
    const PaperRecord* find(const std::string& doi) const;
    std::size_t size() const noexcept { return papers_.size(); }
    bool empty() const noexcept { return papers_.empty(); }

    /// Ordered by DOI; iteration over this map is the canonical record order.
    const std::map<std::string, PaperRecord>& papers() const noexcept { return papers_; }

    /// Validates field labels and reference hygiene. Throws Error on a
    /// duplicate DOI or a label outside the configured pair.
    void insert(PaperRecord rec);

    friend bool operator==(const Corpus&, const Corpus&) = default;

private:
    std::string field_a_;
    std::string field_b_;
    std::map<std::string, PaperRecord> papers_;
};

enum class RecordFormat { Jsonl, Csv };

struct IngestStats {
    std::size_t parsed = 0;
    std::size_t dropped_missing_doi = 0;
    std::size_t deduplicated = 0;
};

/// Reads raw records (JSONL or CSV, see README for the schema), canonicalizes
/// DOIs, drops DOI-less records, and dedups by first occurrence.
/// Throws MalformedInput on unparseable lines and EmptyCorpus when nothing
/// survives.
Corpus ingest_records(std::istream& stream, RecordFormat format,
                      const std::string& field_a_label, const std::string& field_b_label,
                      IngestStats* stats = nullptr);

/// Adds secondary records whose DOI is absent from primary; colliding DOIs keep
/// the primary record wholesale (field labels are not unioned).
Corpus merge_corpora(const Corpus& primary, const Corpus& secondary);

struct FilterSpec {
    enum class Kind { Require, Block, AllowDoiFile, BlockDoiFile };
    Kind kind = Kind::Require;
    std::string field;            // Require / Block
    std::string pattern;          // Block: case-insensitive regex, searched
    std::set<std::string> dois;   // AllowDoiFile / BlockDoiFile (canonicalized)
    std::string display;          // original spec line, echoed in the log
};

/// One line per predicate:
///   require <field>
///   block <field> <regex>
///   allow_doi_file <path>
///   block_doi_file <path>
/// Paths are resolved relative to the spec file. Throws UnknownField for a
/// predicate naming a field PaperRecord does not have.
std::vector<FilterSpec> load_filter_specs(const std::string& path);
std::vector<FilterSpec> parse_filter_specs(std::istream& in, const std::string& base_dir);

struct FilterLog {
    std::vector<std::pair<std::string, std::string>> rejected;  // (doi, rejecting filter)
};

std::pair<Corpus, FilterLog> apply_filters(const Corpus& c, const std::vector<FilterSpec>& filters);

/// Canonical JSONL serialization; ingest(write_jsonl(c)) == c.
void write_jsonl(const Corpus& c, std::ostream& out);

}  // namespace fieldlens
