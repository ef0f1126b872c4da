#include "fieldlens/graphml.hpp"

#include <cctype>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "fieldlens/errors.hpp"
#include "fieldlens/util.hpp"

namespace fieldlens {

void write_graphml(const CitationGraph& g, std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"scope\" for=\"graph\" attr.name=\"scope\" attr.type=\"string\"/>\n"
        << "  <key id=\"doi\" for=\"node\" attr.name=\"doi\" attr.type=\"string\"/>\n"
        << "  <key id=\"field_a\" for=\"node\" attr.name=\"field_a\" attr.type=\"boolean\"/>\n"
        << "  <key id=\"field_b\" for=\"node\" attr.name=\"field_b\" attr.type=\"boolean\"/>\n"
        << "  <key id=\"boundary\" for=\"node\" attr.name=\"boundary\" attr.type=\"boolean\"/>\n"
        << "  <key id=\"seeded\" for=\"node\" attr.name=\"seeded\" attr.type=\"boolean\"/>\n"
        << "  <key id=\"kind\" for=\"edge\" attr.name=\"kind\" attr.type=\"string\"/>\n"
        << "  <graph id=\"G\" edgedefault=\"directed\">\n"
        << "    <data key=\"scope\">" << to_string(g.scope()) << "</data>\n";
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
        const auto& n = g.node(i);
        out << "    <node id=\"n" << i << "\">"
            << "<data key=\"doi\">" << xml_escape(n.doi) << "</data>"
            << "<data key=\"field_a\">" << (n.in_field_a ? "true" : "false") << "</data>"
            << "<data key=\"field_b\">" << (n.in_field_b ? "true" : "false") << "</data>"
            << "<data key=\"boundary\">" << (n.is_boundary() ? "true" : "false") << "</data>"
            << "<data key=\"seeded\">" << (n.seeded ? "true" : "false") << "</data>"
            << "</node>\n";
    }
    for (const auto& e : g.edges()) {
        out << "    <edge source=\"n" << e.first << "\" target=\"n" << e.second << "\">"
            << "<data key=\"kind\">" << to_string(g.edge_kind(e)) << "</data>"
            << "</edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

void write_graphml(const SocioNetwork& net, std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"kind\" for=\"graph\" attr.name=\"kind\" attr.type=\"string\"/>\n"
        << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
        << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
        << "  <key id=\"witnesses\" for=\"edge\" attr.name=\"witnesses\" attr.type=\"string\"/>\n"
        << "  <graph id=\"G\" edgedefault=\"undirected\">\n"
        << "    <data key=\"kind\">" << to_string(net.kind()) << "</data>\n";
    std::map<std::string, std::size_t> index;
    std::size_t i = 0;
    for (const auto& [id, name] : net.nodes()) {
        index[id] = i;
        out << "    <node id=\"n" << i << "\">"
            << "<data key=\"label\">" << xml_escape(name.empty() ? id : name) << "</data>"
            << "</node>\n";
        ++i;
    }
    for (const auto& [key, data] : net.edges()) {
        out << "    <edge source=\"n" << index.at(key.first) << "\" target=\"n"
            << index.at(key.second) << "\">"
            << "<data key=\"weight\">" << data.weight() << "</data>"
            << "<data key=\"witnesses\">"
            << xml_escape(join(data.witnesses.begin(), data.witnesses.end(), ";"))
            << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

void write_edge_csv(const CitationGraph& g, std::ostream& out) {
    out << "citing_doi,cited_doi\n";
    for (const auto& [u, v] : g.edges())
        out << csv_escape(g.node(u).doi) << ',' << csv_escape(g.node(v).doi) << '\n';
}

namespace {

// Minimal XML element scanner for the GraphML subset this library writes.
struct XmlElement {
    std::string name;
    std::map<std::string, std::string> attrs;
    bool closing = false;      // </name>
    bool self_closing = false; // <name/>
    std::string text_after;    // text between this tag and the next '<'
};

class XmlScanner {
public:
    explicit XmlScanner(std::string content) : content_(std::move(content)) {}

    bool next(XmlElement& el) {
        auto lt = content_.find('<', pos_);
        while (lt != std::string::npos) {
            if (content_.compare(lt, 4, "<!--") == 0) {
                auto end = content_.find("-->", lt);
                if (end == std::string::npos) return false;
                lt = content_.find('<', end + 3);
                continue;
            }
            if (content_.compare(lt, 2, "<?") == 0) {
                auto end = content_.find("?>", lt);
                if (end == std::string::npos) return false;
                lt = content_.find('<', end + 2);
                continue;
            }
            break;
        }
        if (lt == std::string::npos) return false;
        auto gt = content_.find('>', lt);
        if (gt == std::string::npos) throw IoError("unterminated tag in GraphML");
        std::string body = content_.substr(lt + 1, gt - lt - 1);
        pos_ = gt + 1;

        el = XmlElement{};
        if (!body.empty() && body.front() == '/') {
            el.closing = true;
            body.erase(body.begin());
        }
        if (!body.empty() && body.back() == '/') {
            el.self_closing = true;
            body.pop_back();
        }
        std::size_t i = 0;
        while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
        el.name = body.substr(0, i);
        while (i < body.size()) {
            while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
            std::size_t eq = body.find('=', i);
            if (eq == std::string::npos) break;
            std::string key = trim(body.substr(i, eq - i));
            std::size_t q1 = body.find('"', eq);
            if (q1 == std::string::npos) break;
            std::size_t q2 = body.find('"', q1 + 1);
            if (q2 == std::string::npos) throw IoError("unterminated attribute in GraphML");
            el.attrs[key] = xml_unescape(body.substr(q1 + 1, q2 - q1 - 1));
            i = q2 + 1;
        }
        auto next_lt = content_.find('<', pos_);
        el.text_after = xml_unescape(
            content_.substr(pos_, next_lt == std::string::npos ? std::string::npos : next_lt - pos_));
        return true;
    }

private:
    std::string content_;
    std::size_t pos_ = 0;
};

bool parse_bool(const std::string& s) { return s == "true" || s == "1"; }

}  // namespace

CitationGraph read_citation_graphml(std::istream& in) {
    std::stringstream buf;
    buf << in.rdbuf();
    XmlScanner scanner(buf.str());

    std::map<std::string, std::string> key_names;  // key id -> attr name
    std::optional<Scope> scope;
    struct PendingNode {
        std::string id;
        std::map<std::string, std::string> data;
    };
    std::vector<PendingNode> nodes;
    std::vector<std::pair<std::string, std::string>> edges;  // source id, target id

    enum class In { None, Node, Edge, Graph } ctx = In::None;
    PendingNode cur;
    std::pair<std::string, std::string> cur_edge;
    std::string pending_key;

    XmlElement el;
    while (scanner.next(el)) {
        if (el.name == "key" && !el.closing) {
            if (el.attrs.count("id") && el.attrs.count("attr.name"))
                key_names[el.attrs["id"]] = el.attrs["attr.name"];
        } else if (el.name == "graph" && !el.closing) {
            ctx = In::Graph;
        } else if (el.name == "node") {
            if (el.closing) {
                nodes.push_back(cur);
                ctx = In::Graph;
            } else {
                cur = PendingNode{el.attrs["id"], {}};
                ctx = In::Node;
                if (el.self_closing) {
                    nodes.push_back(cur);
                    ctx = In::Graph;
                }
            }
        } else if (el.name == "edge") {
            if (el.closing) {
                edges.push_back(cur_edge);
                ctx = In::Graph;
            } else {
                cur_edge = {el.attrs["source"], el.attrs["target"]};
                ctx = In::Edge;
                if (el.self_closing) {
                    edges.push_back(cur_edge);
                    ctx = In::Graph;
                }
            }
        } else if (el.name == "data" && !el.closing && !el.self_closing) {
            auto it = key_names.find(el.attrs["key"]);
            std::string attr = it != key_names.end() ? it->second : el.attrs["key"];
            const std::string& value = el.text_after;
            if (ctx == In::Node) {
                cur.data[attr] = value;
            } else if (ctx == In::Graph && attr == "scope") {
                scope = parse_scope(trim(value));
            }
            // edge data (kind) is derived from node flags; ignored on read
        }
    }

    if (!scope) throw IoError("GraphML input lacks a graph scope attribute");

    CitationGraph::Builder builder(*scope);
    std::map<std::string, std::string> id_to_doi;
    for (const auto& n : nodes) {
        auto doi_it = n.data.find("doi");
        if (doi_it == n.data.end() || doi_it->second.empty())
            throw IoError("GraphML node " + n.id + " lacks a doi attribute");
        NodeRecord rec;
        rec.doi = doi_it->second;
        auto flag = [&](const char* name) {
            auto it = n.data.find(name);
            return it != n.data.end() && parse_bool(it->second);
        };
        rec.in_field_a = flag("field_a");
        rec.in_field_b = flag("field_b");
        rec.seeded = flag("seeded");
        id_to_doi[n.id] = rec.doi;
        builder.add_node(std::move(rec));
    }
    for (const auto& [src, dst] : edges) {
        auto s = id_to_doi.find(src);
        auto t = id_to_doi.find(dst);
        if (s == id_to_doi.end() || t == id_to_doi.end())
            throw IoError("GraphML edge references unknown node: " + src + " -> " + dst);
        builder.add_edge(s->second, t->second);
    }
    return builder.build();
}

}  // namespace fieldlens
