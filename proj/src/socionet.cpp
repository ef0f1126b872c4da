#include "fieldlens/socionet.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <regex>
#include <stack>

#include <nlohmann/json.hpp>

#include "fieldlens/errors.hpp"
#include "fieldlens/util.hpp"

namespace fieldlens {

std::string to_string(SocioKind kind) {
    return kind == SocioKind::Venue ? "venue" : "author";
}

std::string to_string(CentralityMeasure m) {
    switch (m) {
        case CentralityMeasure::WeightedDegree: return "weighted_degree";
        case CentralityMeasure::Betweenness: return "betweenness";
        case CentralityMeasure::Closeness: return "closeness";
    }
    return "weighted_degree";
}

void SocioNetwork::add_node(const std::string& id, const std::string& display_name) {
    nodes_.try_emplace(id, display_name);
}

void SocioNetwork::add_witness(const std::string& u, const std::string& v,
                               const std::string& witness) {
    if (u == v) return;
    if (!nodes_.count(u) || !nodes_.count(v))
        throw Error("socio edge endpoint missing: " + u + " -- " + v);
    EdgeKey key = u < v ? EdgeKey{u, v} : EdgeKey{v, u};
    edges_[key].witnesses.insert(witness);
}

std::vector<std::pair<std::string, std::size_t>> SocioNetwork::weighted_degrees() const {
    std::map<std::string, std::size_t> acc;
    for (const auto& [id, name] : nodes_) acc[id] = 0;
    for (const auto& [key, data] : edges_) {
        acc[key.first] += data.weight();
        acc[key.second] += data.weight();
    }
    return {acc.begin(), acc.end()};
}

VenueAggregationRule load_venue_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read venue rules " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ConfigError("venue rules " + path + " is not a JSON object");
    VenueAggregationRule rule;
    if (j.contains("group_threshold")) rule.group_threshold = j["group_threshold"].get<int>();
    if (rule.group_threshold < 1) throw ConfigError("group_threshold must be >= 1");
    if (j.contains("series"))
        for (const auto& [pattern, canonical] : j["series"].items())
            rule.same_series_patterns.emplace_back(pattern, canonical.get<std::string>());
    if (j.contains("groups"))
        for (const auto& [key, label] : j["groups"].items())
            rule.group_labels.emplace_back(key, label.get<std::string>());
    return rule;
}

namespace {

// "ICBC 2021" and "ICBC 2023" collapse to the same series name.
std::string strip_year_tokens(const std::string& name) {
    static const std::regex year_re(R"(\b(19|20)\d{2}\b)");
    std::string stripped = std::regex_replace(name, year_re, "");
    std::string out;
    bool last_space = true;
    for (char c : stripped) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!last_space) out.push_back(' ');
            last_space = true;
        } else {
            out.push_back(c);
            last_space = false;
        }
    }
    return trim(out);
}

bool name_contains(const std::string& haystack, const std::string& needle) {
    auto h = to_lower(haystack);
    auto n = to_lower(needle);
    return h.find(n) != std::string::npos;
}

}  // namespace

Corpus aggregate_venues(const Corpus& corpus, const VenueAggregationRule& rule) {
    std::vector<std::regex> series_re;
    series_re.reserve(rule.same_series_patterns.size());
    for (const auto& [pattern, canonical] : rule.same_series_patterns) {
        try {
            series_re.emplace_back(pattern, std::regex::ECMAScript | std::regex::icase);
        } catch (const std::regex_error& e) {
            throw ConfigError("bad venue series pattern '" + pattern + "': " + e.what());
        }
    }

    // phase 1: same-series rewriting
    std::map<std::string, PaperRecord> rewritten;
    for (const auto& [doi, rec] : corpus.papers()) {
        PaperRecord r = rec;
        if (r.venue) {
            bool matched = false;
            for (std::size_t i = 0; i < series_re.size(); ++i) {
                if (std::regex_match(r.venue->name, series_re[i]) ||
                    std::regex_match(r.venue->venue_id, series_re[i])) {
                    r.venue->venue_id = rule.same_series_patterns[i].second;
                    r.venue->name = rule.same_series_patterns[i].second;
                    matched = true;
                    break;
                }
            }
            if (!matched && r.venue->kind == VenueKind::Conference) {
                // conferences always canonicalize on the year-stripped series
                // name, so "ICBC" and "ICBC 2021" land on the same venue id
                std::string series = strip_year_tokens(r.venue->name);
                if (!series.empty()) {
                    r.venue->venue_id = to_lower(series);
                    r.venue->name = series;
                }
            }
        }
        rewritten.emplace(doi, std::move(r));
    }

    // phase 2: publisher-group aggregation of low-frequency conferences
    std::map<std::string, int> venue_papers;
    for (const auto& [doi, rec] : rewritten)
        if (rec.venue) ++venue_papers[rec.venue->venue_id];

    Corpus out(corpus.field_a_label(), corpus.field_b_label());
    for (auto& [doi, rec] : rewritten) {
        if (rec.venue && rec.venue->kind == VenueKind::Conference &&
            venue_papers[rec.venue->venue_id] <= rule.group_threshold) {
            for (const auto& [key, label] : rule.group_labels) {
                if (name_contains(rec.venue->name, key)) {
                    rec.venue->venue_id = label;
                    rec.venue->name = label;
                    rec.venue->kind = VenueKind::AggregatedProceedings;
                    break;
                }
            }
        }
        out.insert(std::move(rec));
    }
    return out;
}

SocioNetwork build_socionet(const Corpus& corpus, SocioKind kind) {
    SocioNetwork net(kind);
    // author id -> venues, venue id -> authors; display names as first seen
    std::map<std::string, std::set<std::string>> author_venues;
    std::map<std::string, std::set<std::string>> venue_authors;
    std::map<std::string, std::string> venue_names, author_names;
    std::size_t usable = 0;
    for (const auto& [doi, rec] : corpus.papers()) {
        if (!rec.venue || rec.authors.empty()) continue;
        ++usable;
        venue_names.try_emplace(rec.venue->venue_id, rec.venue->name);
        for (const auto& a : rec.authors) {
            author_names.try_emplace(a.author_id, a.display_name);
            author_venues[a.author_id].insert(rec.venue->venue_id);
            venue_authors[rec.venue->venue_id].insert(a.author_id);
        }
    }
    if (usable == 0)
        throw MissingMetadata("no record carries both a venue and authors");

    if (kind == SocioKind::Venue) {
        for (const auto& [vid, name] : venue_names) net.add_node(vid, name);
        for (const auto& [author, venues] : author_venues) {
            for (auto it = venues.begin(); it != venues.end(); ++it)
                for (auto jt = std::next(it); jt != venues.end(); ++jt)
                    net.add_witness(*it, *jt, author);
        }
    } else {
        for (const auto& [aid, name] : author_names)
            net.add_node(aid, name.empty() ? aid : name);
        for (const auto& [venue, authors] : venue_authors) {
            for (auto it = authors.begin(); it != authors.end(); ++it)
                for (auto jt = std::next(it); jt != authors.end(); ++jt)
                    net.add_witness(*it, *jt, venue);
        }
    }
    return net;
}

namespace {

struct IndexedNet {
    std::vector<std::string> ids;                     // sorted
    std::vector<std::vector<std::uint32_t>> adj;      // simple undirected
    std::vector<std::vector<std::size_t>> weights;    // aligned with adj

    std::size_t n() const { return ids.size(); }
};

IndexedNet index_net(const SocioNetwork& net) {
    IndexedNet out;
    out.ids.reserve(net.node_count());
    for (const auto& [id, name] : net.nodes()) out.ids.push_back(id);
    std::map<std::string, std::uint32_t> index;
    for (std::uint32_t i = 0; i < out.ids.size(); ++i) index[out.ids[i]] = i;
    out.adj.resize(out.n());
    out.weights.resize(out.n());
    for (const auto& [key, data] : net.edges()) {
        auto u = index.at(key.first), v = index.at(key.second);
        out.adj[u].push_back(v);
        out.adj[v].push_back(u);
        out.weights[u].push_back(data.weight());
        out.weights[v].push_back(data.weight());
    }
    for (auto& nb : out.adj) std::sort(nb.begin(), nb.end());
    return out;
}

// Brandes' accumulation over unweighted shortest paths; undirected pairs are
// visited from both endpoints, so final scores are halved.
std::vector<double> brandes_betweenness(const IndexedNet& net) {
    const std::size_t n = net.n();
    std::vector<double> cb(n, 0.0);
    for (std::uint32_t s = 0; s < n; ++s) {
        std::stack<std::uint32_t> order;
        std::vector<std::vector<std::uint32_t>> preds(n);
        std::vector<double> sigma(n, 0.0);
        std::vector<int> dist(n, -1);
        sigma[s] = 1.0;
        dist[s] = 0;
        std::queue<std::uint32_t> q;
        q.push(s);
        while (!q.empty()) {
            auto v = q.front();
            q.pop();
            order.push(v);
            for (auto w : net.adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        std::vector<double> delta(n, 0.0);
        while (!order.empty()) {
            auto w = order.top();
            order.pop();
            for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) cb[w] += delta[w];
        }
    }
    for (auto& v : cb) v /= 2.0;
    return cb;
}

std::vector<double> closeness_scores(const IndexedNet& net) {
    const std::size_t n = net.n();
    std::vector<double> scores(n, 0.0);
    for (std::uint32_t s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        dist[s] = 0;
        std::queue<std::uint32_t> q;
        q.push(s);
        long long sum = 0;
        while (!q.empty()) {
            auto v = q.front();
            q.pop();
            for (auto w : net.adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    sum += dist[w];
                    q.push(w);
                }
            }
        }
        scores[s] = sum > 0 ? 1.0 / static_cast<double>(sum) : 0.0;
    }
    return scores;
}

}  // namespace

CentralityTable centrality(const SocioNetwork& net, CentralityMeasure measure) {
    if (net.empty()) throw EmptyNetwork("centrality needs a non-empty network");
    CentralityTable table;
    table.measure = measure;

    if (measure == CentralityMeasure::WeightedDegree) {
        for (const auto& [id, deg] : net.weighted_degrees())
            table.scores[id] = static_cast<double>(deg);
    } else {
        IndexedNet idx = index_net(net);
        std::vector<double> values = measure == CentralityMeasure::Betweenness
                                         ? brandes_betweenness(idx)
                                         : closeness_scores(idx);
        for (std::uint32_t i = 0; i < idx.n(); ++i) table.scores[idx.ids[i]] = values[i];
    }

    table.top.assign(table.scores.begin(), table.scores.end());
    std::sort(table.top.begin(), table.top.end(), [](const auto& l, const auto& r) {
        return l.second != r.second ? l.second > r.second : l.first < r.first;
    });
    return table;
}

namespace {

std::vector<std::vector<std::string>> component_ids(const SocioNetwork& net) {
    IndexedNet idx = index_net(net);
    std::vector<int> comp(idx.n(), -1);
    int next = 0;
    for (std::uint32_t s = 0; s < idx.n(); ++s) {
        if (comp[s] != -1) continue;
        comp[s] = next;
        std::queue<std::uint32_t> q;
        q.push(s);
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            for (auto v : idx.adj[u])
                if (comp[v] == -1) {
                    comp[v] = next;
                    q.push(v);
                }
        }
        ++next;
    }
    std::vector<std::vector<std::string>> groups(next);
    for (std::uint32_t i = 0; i < idx.n(); ++i) groups[comp[i]].push_back(idx.ids[i]);
    return groups;  // each group sorted: ids were iterated in sorted order
}

std::size_t edges_within(const SocioNetwork& net, const std::set<std::string>& keep) {
    std::size_t count = 0;
    for (const auto& [key, data] : net.edges())
        if (keep.count(key.first) && keep.count(key.second)) ++count;
    return count;
}

}  // namespace

SocioNetwork main_component(const SocioNetwork& net) {
    if (net.empty()) throw EmptyNetwork("main_component needs a non-empty network");
    auto groups = component_ids(net);

    std::size_t best = 0;
    std::size_t best_edges = 0;
    {
        std::set<std::string> keep(groups[0].begin(), groups[0].end());
        best_edges = edges_within(net, keep);
    }
    for (std::size_t i = 1; i < groups.size(); ++i) {
        std::set<std::string> keep(groups[i].begin(), groups[i].end());
        std::size_t e = edges_within(net, keep);
        const auto& cur = groups[i];
        const auto& winner = groups[best];
        bool better = cur.size() > winner.size() ||
                      (cur.size() == winner.size() && e > best_edges) ||
                      (cur.size() == winner.size() && e == best_edges &&
                       cur.front() < winner.front());
        if (better) {
            best = i;
            best_edges = e;
        }
    }

    std::set<std::string> keep(groups[best].begin(), groups[best].end());
    SocioNetwork out(net.kind());
    for (const auto& id : groups[best]) out.add_node(id, net.nodes().at(id));
    for (const auto& [key, data] : net.edges()) {
        if (!keep.count(key.first) || !keep.count(key.second)) continue;
        for (const auto& w : data.witnesses) out.add_witness(key.first, key.second, w);
    }
    return out;
}

SocioComponentReport socio_components(const SocioNetwork& net) {
    SocioComponentReport report;
    if (net.empty()) return report;
    auto groups = component_ids(net);
    report.component_count = groups.size();
    for (const auto& g : groups) {
        std::set<std::string> keep(g.begin(), g.end());
        report.sizes.emplace_back(g.size(), edges_within(net, keep));
    }
    std::sort(report.sizes.begin(), report.sizes.end(), [](const auto& l, const auto& r) {
        return l.first != r.first ? l.first > r.first : l.second > r.second;
    });
    return report;
}

}  // namespace fieldlens
