#include "websample/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "websample/seeds.hpp"

namespace websample {

namespace {

template <typename T>
bool parse_number(const std::string& s, T& value) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    for (std::string tok; ss >> tok;) out.push_back(std::move(tok));
    return out;
}

} // namespace

std::string format_behavior(const Behavior& b) {
    switch (b.kind) {
    case Behavior::Kind::Normal: return "normal";
    case Behavior::Kind::DeadEnd: return "deadend";
    case Behavior::Kind::FetchFail: return "fetchfail";
    case Behavior::Kind::Timeout: return "timeout";
    case Behavior::Kind::RedirectTo: return "redirect:" + std::to_string(b.redirect_target);
    case Behavior::Kind::SessionIdUrl:
        switch (b.truncation) {
        case TruncationOutcome::Ok: return "sid:ok";
        case TruncationOutcome::Error: return "sid:err";
        case TruncationOutcome::Redirect: return "sid:redir";
        }
    }
    return "normal";
}

Behavior parse_behavior(const std::string& token) {
    if (token == "normal") return Behavior::normal();
    if (token == "deadend") return Behavior::dead_end();
    if (token == "fetchfail") return Behavior::fetch_fail();
    if (token == "timeout") return Behavior::timeout();
    if (token == "sid:ok") return Behavior::session_id(TruncationOutcome::Ok);
    if (token == "sid:err") return Behavior::session_id(TruncationOutcome::Error);
    if (token == "sid:redir") return Behavior::session_id(TruncationOutcome::Redirect);
    if (token.starts_with("redirect:")) {
        NodeId target = 0;
        if (parse_number(token.substr(9), target)) return Behavior::redirect_to(target);
    }
    throw ParameterError("unknown behavior '" + token + "'");
}

void save_graph(const WebGraph& graph, std::ostream& out) {
    out << "webgraph v1 n=" << graph.node_count() << " m=" << graph.edge_count() << '\n';
    for (NodeId v = 0; v < graph.node_count(); ++v) {
        const NodeMeta& m = graph.meta(v);
        out << "N " << v << ' ' << m.url << ' ' << m.host << ' ' << m.domain << ' ' << m.tld << ' '
            << m.content_length << ' ' << format_behavior(m.behavior) << '\n';
    }
    for (NodeId v = 0; v < graph.node_count(); ++v) {
        for (NodeId w : graph.out(v)) out << "E " << v << ' ' << w << '\n';
    }
}

void save_graph(const WebGraph& graph, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    save_graph(graph, out);
}

std::string to_text(const WebGraph& graph) {
    std::ostringstream ss;
    save_graph(graph, ss);
    return ss.str();
}

WebGraph load_graph(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;

    std::size_t n = 0;
    std::size_t m = 0;
    bool have_header = false;
    while (!have_header && std::getline(in, line)) {
        ++lineno;
        auto tok = split_ws(line);
        if (tok.empty()) continue;
        if (tok.size() != 4 || tok[0] != "webgraph" || tok[1] != "v1" || !tok[2].starts_with("n=") ||
            !tok[3].starts_with("m=") || !parse_number(tok[2].substr(2), n) || !parse_number(tok[3].substr(2), m)) {
            throw ParseError(lineno, "expected header 'webgraph v1 n=<N> m=<M>'");
        }
        have_header = true;
    }
    if (!have_header) throw ParseError(lineno, "missing header");

    std::vector<NodeMeta> nodes(n);
    std::vector<std::size_t> node_line(n, 0);
    std::vector<std::vector<NodeId>> adjacency(n);
    std::size_t nodes_seen = 0;
    std::size_t edges_seen = 0;
    std::map<std::pair<NodeId, NodeId>, int> multiplicity;

    while (std::getline(in, line)) {
        ++lineno;
        auto tok = split_ws(line);
        if (tok.empty()) continue;
        if (tok[0] == "N") {
            if (tok.size() != 8) throw ParseError(lineno, "node line needs 8 fields");
            NodeId id = 0;
            if (!parse_number(tok[1], id)) throw ParseError(lineno, "bad node id '" + tok[1] + "'");
            if (id >= n) throw ParseError(lineno, "node id " + tok[1] + " out of range (n=" + std::to_string(n) + ")");
            if (node_line[id] != 0) throw ParseError(lineno, "duplicate node id " + tok[1]);
            if (edges_seen > 0) throw ParseError(lineno, "node line after edge lines");
            NodeMeta meta;
            meta.url = tok[2];
            meta.host = tok[3];
            meta.domain = tok[4];
            meta.tld = tok[5];
            if (!parse_number(tok[6], meta.content_length)) throw ParseError(lineno, "bad content length '" + tok[6] + "'");
            try {
                meta.behavior = parse_behavior(tok[7]);
                validate_node_meta(meta);
            } catch (const ParameterError& e) {
                throw ParseError(lineno, e.what());
            }
            nodes[id] = std::move(meta);
            node_line[id] = lineno;
            ++nodes_seen;
        } else if (tok[0] == "E") {
            if (tok.size() != 3) throw ParseError(lineno, "edge line needs 3 fields");
            NodeId src = 0;
            NodeId dst = 0;
            if (!parse_number(tok[1], src)) throw ParseError(lineno, "bad node id '" + tok[1] + "'");
            if (!parse_number(tok[2], dst)) throw ParseError(lineno, "bad node id '" + tok[2] + "'");
            for (NodeId id : {src, dst}) {
                if (id >= n || node_line[id] == 0) {
                    throw ParseError(lineno, "edge references unknown node id " + std::to_string(id));
                }
            }
            if (++multiplicity[{src, dst}] > static_cast<int>(kMaxParallelEdges)) {
                throw ParseError(lineno, "more than 2 parallel edges " + tok[1] + "->" + tok[2]);
            }
            adjacency[src].push_back(dst);
            ++edges_seen;
        } else {
            throw ParseError(lineno, "unknown record type '" + tok[0] + "'");
        }
    }
    if (nodes_seen != n) throw ParseError(lineno, "header declares n=" + std::to_string(n) + " but found " + std::to_string(nodes_seen) + " nodes");
    if (edges_seen != m) throw ParseError(lineno, "header declares m=" + std::to_string(m) + " but found " + std::to_string(edges_seen) + " edges");
    for (std::size_t v = 0; v < n; ++v) {
        const Behavior& b = nodes[v].behavior;
        if (b.kind == Behavior::Kind::RedirectTo && b.redirect_target >= n) {
            throw ParseError(node_line[v], "redirect to unknown node id " + std::to_string(b.redirect_target));
        }
    }
    try {
        return WebGraph(std::move(nodes), adjacency);
    } catch (const ParameterError& e) {
        throw ParseError(lineno, e.what());
    }
}

WebGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return load_graph(in);
}

std::uint64_t graph_hash(const WebGraph& graph) { return fnv1a64(to_text(graph)); }

} // namespace websample
