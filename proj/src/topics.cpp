#include "fieldlens/topics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "fieldlens/errors.hpp"
#include "fieldlens/util.hpp"

namespace fieldlens {

std::vector<TopicBundle> build_bundles(const Partition& partition, const Corpus& corpus) {
    int max_id = -1;
    for (const auto& [doi, c] : partition.assignment) max_id = std::max(max_id, c);

    std::vector<TopicBundle> bundles;
    bundles.reserve(static_cast<std::size_t>(max_id + 1));
    for (int c = 0; c <= max_id; ++c) bundles.push_back({c, {}});

    for (const auto& [doi, c] : partition.assignment) {
        BundleEntry entry;
        entry.doi = doi;
        entry.community_id = c;
        if (const PaperRecord* rec = corpus.find(doi)) {
            entry.title = rec->title.empty() ? doi : rec->title;
            entry.abstract_text =
                (rec->abstract && !rec->abstract->empty()) ? *rec->abstract : "Not found";
        } else {
            entry.title = doi;
            entry.abstract_text = "Not found";
        }
        bundles[static_cast<std::size_t>(c)].entries.push_back(std::move(entry));
    }
    for (auto& b : bundles)
        std::sort(b.entries.begin(), b.entries.end(),
                  [](const BundleEntry& l, const BundleEntry& r) { return l.doi < r.doi; });
    return bundles;
}

std::string render_bundles(const std::vector<TopicBundle>& bundles, const std::string& header) {
    std::string out;
    if (!header.empty()) {
        out = header;
        if (out.back() != '\n') out.push_back('\n');
        out.push_back('\n');
    }
    bool first = true;
    for (const auto& b : bundles) {
        if (!first) out.push_back('\n');
        first = false;
        for (const auto& e : b.entries) {
            out += e.title;
            out += " --- ";
            out += e.abstract_text;
            out += " --- ";
            out += std::to_string(e.community_id);
            out.push_back('\n');
        }
    }
    return out;
}

std::vector<TopicLabel> parse_labels(const std::string& response,
                                     std::vector<std::string>* warnings) {
    static const std::regex line_re(
        R"(^\s*Community\s+number:\s*(\d+)\s*---\s*Description:\s*(.*?)[\s,]*$)",
        std::regex::ECMAScript | std::regex::icase);

    std::vector<int> order;                // ids in first-appearance order
    std::map<int, std::string> by_id;      // last description wins
    std::istringstream in(response);
    std::string line;
    while (std::getline(in, line)) {
        std::smatch m;
        if (!std::regex_match(line, m, line_re)) continue;
        int id = std::stoi(m[1].str());
        std::string desc = trim(m[2].str());
        if (desc.empty()) continue;
        auto [it, inserted] = by_id.try_emplace(id, desc);
        if (inserted) {
            order.push_back(id);
        } else {
            if (warnings)
                warnings->push_back("duplicate label for community " + std::to_string(id) +
                                    "; keeping the last one");
            it->second = desc;
        }
    }
    if (order.empty()) throw NoLabelsFound("no label lines matched the expected format");

    std::vector<TopicLabel> labels;
    labels.reserve(order.size());
    for (int id : order) labels.push_back({id, by_id.at(id), std::nullopt});
    return labels;
}

std::vector<TopicLabel> normalize_labels(std::vector<TopicLabel> labels,
                                         const std::string& map_file) {
    std::ifstream in(map_file);
    if (!in) throw BadMapFile("cannot read normalization map " + map_file);

    std::vector<std::pair<std::string, std::string>> rows;  // pattern -> canonical
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto cols = split_csv_line(t);
        if (cols.size() < 2)
            throw BadMapFile("map line " + std::to_string(line_no) + " needs pattern,canonical");
        rows.emplace_back(trim(cols[0]), trim(cols[1]));
    }

    std::vector<std::regex> compiled;
    compiled.reserve(rows.size());
    for (const auto& [pattern, canonical] : rows) {
        try {
            compiled.emplace_back(pattern, std::regex::ECMAScript | std::regex::icase);
        } catch (const std::regex_error& e) {
            throw BadMapFile("bad pattern '" + pattern + "': " + e.what());
        }
    }

    for (auto& label : labels) {
        label.normalized = label.description;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (iequals(rows[i].first, label.description) ||
                std::regex_match(label.description, compiled[i])) {
                label.normalized = rows[i].second;
                break;
            }
        }
    }
    return labels;
}

}  // namespace fieldlens
