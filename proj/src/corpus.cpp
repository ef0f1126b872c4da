#include "fieldlens/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fieldlens/errors.hpp"
#include "fieldlens/util.hpp"

namespace fieldlens {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string to_string(VenueKind kind) {
    switch (kind) {
        case VenueKind::Journal: return "journal";
        case VenueKind::Conference: return "conference";
        case VenueKind::AggregatedProceedings: return "aggregated-proceedings";
    }
    return "journal";
}

VenueKind parse_venue_kind(std::string_view s) {
    if (s == "journal") return VenueKind::Journal;
    if (s == "conference") return VenueKind::Conference;
    if (s == "aggregated-proceedings") return VenueKind::AggregatedProceedings;
    throw Error("unknown venue kind: " + std::string(s));
}

std::string canonical_doi(std::string_view raw) {
    std::string s = to_lower(trim(raw));
    for (std::string_view prefix : {"https://doi.org/", "http://doi.org/", "doi.org/"}) {
        if (s.starts_with(prefix)) {
            s = s.substr(prefix.size());
            break;
        }
    }
    return trim(s);
}

Corpus::Corpus(std::string field_a_label, std::string field_b_label)
    : field_a_(std::move(field_a_label)), field_b_(std::move(field_b_label)) {}

const PaperRecord* Corpus::find(const std::string& doi) const {
    auto it = papers_.find(doi);
    return it == papers_.end() ? nullptr : &it->second;
}

void Corpus::insert(PaperRecord rec) {
    if (rec.doi.empty()) throw Error("record without DOI cannot enter a corpus");
    if (papers_.count(rec.doi)) throw Error("duplicate DOI: " + rec.doi);
    if (rec.fields.empty()) throw Error("record " + rec.doi + " carries no field label");
    for (const auto& f : rec.fields)
        if (f != field_a_ && f != field_b_)
            throw Error("record " + rec.doi + " carries unknown field label '" + f + "'");
    rec.references.erase(rec.doi);
    papers_.emplace(rec.doi, std::move(rec));
}

namespace {

PaperRecord record_from_json(const json& j, std::size_t line_no) {
    if (!j.is_object()) throw MalformedInput(line_no, "not a JSON object");
    PaperRecord rec;
    if (j.contains("doi") && j["doi"].is_string()) rec.doi = canonical_doi(j["doi"].get<std::string>());
    if (j.contains("title") && j["title"].is_string()) rec.title = j["title"].get<std::string>();
    if (j.contains("abstract") && j["abstract"].is_string())
        rec.abstract = j["abstract"].get<std::string>();
    if (j.contains("year") && j["year"].is_number_integer()) rec.year = j["year"].get<int>();
    if (j.contains("fields") && j["fields"].is_array())
        for (const auto& f : j["fields"])
            if (f.is_string()) rec.fields.insert(f.get<std::string>());
    if (j.contains("authors") && j["authors"].is_array())
        for (const auto& a : j["authors"]) {
            if (!a.is_object()) continue;
            AuthorRef ar;
            if (a.contains("id") && a["id"].is_string()) ar.author_id = a["id"].get<std::string>();
            if (a.contains("name") && a["name"].is_string())
                ar.display_name = a["name"].get<std::string>();
            if (!ar.author_id.empty()) rec.authors.push_back(std::move(ar));
        }
    if (j.contains("venue") && j["venue"].is_object()) {
        const auto& v = j["venue"];
        VenueRef vr;
        if (v.contains("id") && v["id"].is_string()) vr.venue_id = v["id"].get<std::string>();
        if (v.contains("name") && v["name"].is_string()) vr.name = v["name"].get<std::string>();
        if (v.contains("kind") && v["kind"].is_string())
            vr.kind = parse_venue_kind(v["kind"].get<std::string>());
        if (!vr.venue_id.empty()) rec.venue = std::move(vr);
    }
    if (j.contains("references") && j["references"].is_array())
        for (const auto& r : j["references"]) {
            if (!r.is_string()) continue;
            std::string doi = canonical_doi(r.get<std::string>());
            if (!doi.empty()) rec.references.insert(std::move(doi));
        }
    if (j.contains("source") && j["source"].is_string()) rec.source = j["source"].get<std::string>();
    return rec;
}

std::vector<std::string> split_semicolons(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

PaperRecord record_from_csv(const std::string& line, std::size_t line_no) {
    auto cols = split_csv_line(line);
    if (cols.size() < 5) throw MalformedInput(line_no, "expected 5 CSV columns");
    PaperRecord rec;
    rec.doi = canonical_doi(cols[0]);
    rec.title = trim(cols[1]);
    std::string year = trim(cols[2]);
    if (!year.empty()) {
        try {
            rec.year = std::stoi(year);
        } catch (const std::exception&) {
            throw MalformedInput(line_no, "year is not an integer: " + year);
        }
    }
    for (auto& f : split_semicolons(cols[3])) rec.fields.insert(f);
    for (auto& r : split_semicolons(cols[4])) {
        std::string doi = canonical_doi(r);
        if (!doi.empty()) rec.references.insert(doi);
    }
    rec.source = "csv";
    return rec;
}

}  // namespace

Corpus ingest_records(std::istream& stream, RecordFormat format,
                      const std::string& field_a_label, const std::string& field_b_label,
                      IngestStats* stats) {
    Corpus corpus(field_a_label, field_b_label);
    IngestStats local;
    std::string line;
    std::size_t line_no = 0;
    bool csv_header_seen = false;
    while (std::getline(stream, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (format == RecordFormat::Csv && !csv_header_seen) {
            csv_header_seen = true;  // first non-blank CSV line is the header
            continue;
        }
        PaperRecord rec;
        if (format == RecordFormat::Jsonl) {
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) throw MalformedInput(line_no, "invalid JSON");
            rec = record_from_json(j, line_no);
        } else {
            rec = record_from_csv(line, line_no);
        }
        ++local.parsed;
        if (rec.doi.empty()) {
            ++local.dropped_missing_doi;
            continue;
        }
        if (rec.fields.empty())
            throw MalformedInput(line_no, "record " + rec.doi + " has no field labels");
        for (const auto& f : rec.fields)
            if (f != field_a_label && f != field_b_label)
                throw MalformedInput(line_no, "unknown field label '" + f + "'");
        if (corpus.contains(rec.doi)) {
            ++local.deduplicated;  // first occurrence wins
            continue;
        }
        corpus.insert(std::move(rec));
    }
    if (stats) *stats = local;
    if (corpus.empty()) throw EmptyCorpus("no valid records survived ingestion");
    return corpus;
}

Corpus merge_corpora(const Corpus& primary, const Corpus& secondary) {
    if (primary.field_a_label() != secondary.field_a_label() ||
        primary.field_b_label() != secondary.field_b_label())
        throw LabelMismatch("corpora use different field label pairs: (" +
                            primary.field_a_label() + "," + primary.field_b_label() + ") vs (" +
                            secondary.field_a_label() + "," + secondary.field_b_label() + ")");
    Corpus out = primary;
    for (const auto& [doi, rec] : secondary.papers())
        if (!out.contains(doi)) out.insert(rec);
    return out;
}

namespace {

const std::set<std::string>& known_fields() {
    static const std::set<std::string> fields = {"doi",    "title",  "abstract", "year",
                                                 "venue",  "source", "fields",   "authors",
                                                 "references"};
    return fields;
}

std::string field_value(const PaperRecord& rec, const std::string& field) {
    if (field == "doi") return rec.doi;
    if (field == "title") return rec.title;
    if (field == "abstract") return rec.abstract.value_or("");
    if (field == "year") return rec.year == 0 ? "" : std::to_string(rec.year);
    if (field == "venue") return rec.venue ? rec.venue->name : "";
    if (field == "source") return rec.source;
    if (field == "fields") return join(rec.fields.begin(), rec.fields.end(), ";");
    if (field == "references") return join(rec.references.begin(), rec.references.end(), ";");
    if (field == "authors") {
        std::vector<std::string> names;
        names.reserve(rec.authors.size());
        for (const auto& a : rec.authors) names.push_back(a.display_name);
        return join(names.begin(), names.end(), ";");
    }
    throw UnknownField("predicate references unknown field '" + field + "'");
}

std::set<std::string> load_doi_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read DOI list " + path.string());
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string doi = canonical_doi(line);
        if (!doi.empty() && doi[0] != '#') out.insert(doi);
    }
    return out;
}

}  // namespace

std::vector<FilterSpec> parse_filter_specs(std::istream& in, const std::string& base_dir) {
    std::vector<FilterSpec> specs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ss(t);
        std::string verb;
        ss >> verb;
        FilterSpec spec;
        spec.display = t;
        if (verb == "require") {
            spec.kind = FilterSpec::Kind::Require;
            ss >> spec.field;
            if (spec.field.empty()) throw MalformedInput(line_no, "require needs a field name");
            if (!known_fields().count(spec.field))
                throw UnknownField("predicate references unknown field '" + spec.field + "'");
        } else if (verb == "block") {
            spec.kind = FilterSpec::Kind::Block;
            ss >> spec.field;
            std::getline(ss, spec.pattern);
            spec.pattern = trim(spec.pattern);
            if (spec.field.empty() || spec.pattern.empty())
                throw MalformedInput(line_no, "block needs a field name and a regex");
            if (!known_fields().count(spec.field))
                throw UnknownField("predicate references unknown field '" + spec.field + "'");
        } else if (verb == "allow_doi_file" || verb == "block_doi_file") {
            spec.kind = verb == "allow_doi_file" ? FilterSpec::Kind::AllowDoiFile
                                                 : FilterSpec::Kind::BlockDoiFile;
            std::string path;
            std::getline(ss, path);
            path = trim(path);
            if (path.empty()) throw MalformedInput(line_no, verb + " needs a path");
            std::filesystem::path p(path);
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            spec.dois = load_doi_file(p);
        } else {
            throw MalformedInput(line_no, "unknown filter verb '" + verb + "'");
        }
        specs.push_back(std::move(spec));
    }
    return specs;
}

std::vector<FilterSpec> load_filter_specs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read filter spec " + path);
    return parse_filter_specs(in, std::filesystem::path(path).parent_path().string());
}

std::pair<Corpus, FilterLog> apply_filters(const Corpus& c, const std::vector<FilterSpec>& filters) {
    std::vector<std::regex> block_regex(filters.size());
    for (std::size_t i = 0; i < filters.size(); ++i) {
        if (filters[i].kind != FilterSpec::Kind::Block) continue;
        if (!known_fields().count(filters[i].field))
            throw UnknownField("predicate references unknown field '" + filters[i].field + "'");
        try {
            block_regex[i] = std::regex(filters[i].pattern, std::regex::ECMAScript | std::regex::icase);
        } catch (const std::regex_error& e) {
            throw Error("bad filter regex '" + filters[i].pattern + "': " + e.what());
        }
    }
    Corpus kept(c.field_a_label(), c.field_b_label());
    FilterLog log;
    for (const auto& [doi, rec] : c.papers()) {
        const FilterSpec* rejecting = nullptr;
        for (std::size_t i = 0; i < filters.size(); ++i) {
            const auto& f = filters[i];
            bool rejected = false;
            switch (f.kind) {
                case FilterSpec::Kind::Require:
                    rejected = field_value(rec, f.field).empty();
                    break;
                case FilterSpec::Kind::Block:
                    rejected = std::regex_search(field_value(rec, f.field), block_regex[i]);
                    break;
                case FilterSpec::Kind::AllowDoiFile:
                    rejected = f.dois.count(doi) == 0;
                    break;
                case FilterSpec::Kind::BlockDoiFile:
                    rejected = f.dois.count(doi) != 0;
                    break;
            }
            if (rejected) {
                rejecting = &f;
                break;
            }
        }
        if (rejecting) {
            log.rejected.emplace_back(doi, rejecting->display);
        } else {
            kept.insert(rec);
        }
    }
    return {std::move(kept), std::move(log)};
}

void write_jsonl(const Corpus& c, std::ostream& out) {
    for (const auto& [doi, rec] : c.papers()) {
        ordered_json j;
        j["doi"] = rec.doi;
        j["title"] = rec.title;
        if (rec.abstract) j["abstract"] = *rec.abstract;
        else j["abstract"] = nullptr;
        j["year"] = rec.year;
        j["fields"] = rec.fields;
        ordered_json authors = ordered_json::array();
        for (const auto& a : rec.authors)
            authors.push_back(ordered_json{{"id", a.author_id}, {"name", a.display_name}});
        j["authors"] = std::move(authors);
        if (rec.venue)
            j["venue"] = ordered_json{{"id", rec.venue->venue_id},
                                      {"name", rec.venue->name},
                                      {"kind", to_string(rec.venue->kind)}};
        else
            j["venue"] = nullptr;
        j["references"] = rec.references;
        j["source"] = rec.source;
        out << j.dump() << '\n';
    }
}

}  // namespace fieldlens
