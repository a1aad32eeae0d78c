#include <algorithm>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "websample/walkers.hpp"

namespace websample {

void write_canonical_snapshot(std::ostream& out, const Environment& env, const MergedWalk& merged) {
    // A node's canonical registration step is the earliest walk step that
    // reached it; ties between walkers do not matter since records only
    // differ in that step.
    constexpr auto kUnseen = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> first(merged.node_count, kUnseen);
    for (const Trace& trace : merged.traces) {
        std::uint64_t t = 0;
        for (const Step& s : trace) {
            if (s.kind != StepKind::SelfloopRun) first[s.node] = std::min(first[s.node], t);
            t += s.count;
        }
    }
    const auto csv = [&](const std::vector<NodeId>& ids) {
        for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : "") << ids[i];
    };
    for (std::size_t v = 0; v < merged.node_count; ++v) {
        if (first[v] == kUnseen) continue;
        const AdjacencyRecord r = make_adjacency_record(env, static_cast<NodeId>(v), first[v]);
        out << "F " << v << " out=";
        csv(r.outlinks);
        out << " in=";
        csv(r.inlinks);
        out << " step=" << r.frozen_at_step << '\n';
    }
}

void write_trace_dump(std::ostream& out, const MergedWalk& merged) {
    out << "# walkers=" << merged.traces.size() << " nodes=" << merged.node_count << '\n';
    for (const StuckRecord& r : merged.stuck) out << "X " << r.walker << ' ' << r.at_step << ' ' << r.host << '\n';
    for (std::size_t w = 0; w < merged.traces.size(); ++w) {
        const Trace& trace = merged.traces[w];
        for (std::size_t i = 0; i < trace.size(); ++i) {
            out << "W " << w << ' ' << i << ' ' << trace[i].node << ' ' << to_string(trace[i].kind);
            if (trace[i].kind == StepKind::SelfloopRun) out << ':' << trace[i].count;
            out << '\n';
        }
    }
}

MergedWalk read_trace_dump(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> walkers;
    std::size_t nodes = 0;
    std::vector<Trace> traces;
    std::vector<StuckRecord> stuck;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string tag;
        fields >> tag;
        if (tag == "#") {
            if (walkers) continue;
            std::string a, b;
            fields >> a >> b;
            if (a.rfind("walkers=", 0) != 0 || b.rfind("nodes=", 0) != 0) throw ParseError(line_no, "malformed header");
            try {
                walkers = std::stoull(a.substr(8));
                nodes = std::stoull(b.substr(6));
            } catch (const std::exception&) {
                throw ParseError(line_no, "malformed header");
            }
            traces.resize(*walkers);
            continue;
        }
        if (!walkers) throw ParseError(line_no, "missing '# walkers=<k> nodes=<n>' header");
        if (tag == "X") {
            StuckRecord r;
            if (!(fields >> r.walker >> r.at_step >> r.host) || r.walker >= *walkers) {
                throw ParseError(line_no, "malformed stuck record");
            }
            stuck.push_back(r);
            continue;
        }
        if (tag != "W") throw ParseError(line_no, "unknown record '" + tag + "'");

        std::size_t w = 0, index = 0;
        std::uint64_t node = 0;
        std::string kind_text;
        if (!(fields >> w >> index >> node >> kind_text)) throw ParseError(line_no, "malformed step");
        if (w >= *walkers) throw ParseError(line_no, "walker index " + std::to_string(w) + " out of range");
        if (node >= nodes) throw ParseError(line_no, "node id " + std::to_string(node) + " out of range");
        if (index != traces[w].size()) throw ParseError(line_no, "step index out of sequence");

        Step s;
        s.node = static_cast<NodeId>(node);
        const auto colon = kind_text.find(':');
        const auto kind = parse_step_kind(std::string_view(kind_text).substr(0, colon));
        if (!kind) throw ParseError(line_no, "unknown step kind '" + kind_text + "'");
        s.kind = *kind;
        if (colon != std::string::npos) {
            if (s.kind != StepKind::SelfloopRun) throw ParseError(line_no, "only selfloop steps carry a count");
            try {
                s.count = std::stoull(kind_text.substr(colon + 1));
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad selfloop count");
            }
            if (s.count == 0) throw ParseError(line_no, "selfloop count must be positive");
        }
        traces[w].push_back(s);
    }
    if (!walkers) throw ParseError(line_no, "empty trace dump");

    MergedWalk merged = MergedWalk::from_traces(nodes, std::move(traces));
    std::sort(stuck.begin(), stuck.end(), [](const auto& a, const auto& b) { return a.walker < b.walker; });
    merged.stuck = std::move(stuck);
    return merged;
}

void write_walk_summary(std::ostream& out, const MergedWalk& merged, const WebGraph& graph,
                        std::string_view algorithm_label) {
    out << "algorithm = " << algorithm_label << '\n';
    out << "walkers = " << merged.traces.size() << '\n';
    out << "total_steps = " << merged.total_steps() << '\n';
    out << "transitions = " << merged.transitions() << '\n';
    out << "visited_nodes = " << merged.visited_nodes() << '\n';
    out << "seen_nodes = " << merged.seen_nodes << '\n';
    out << "seen_hosts = " << merged.seen_hosts << '\n';
    out << "seen_domains = " << merged.seen_domains << '\n';
    for (std::size_t k = 0; k < kStepKindCount; ++k) {
        out << "steps." << to_string(static_cast<StepKind>(k)) << " = " << merged.tallies[k] << '\n';
    }
    out << std::setprecision(6) << std::fixed;
    out << "jump_fraction = " << merged.fraction(StepKind::Jump) << '\n';
    out << "stuck_walkers = " << merged.stuck.size() << '\n';
    for (const StuckRecord& r : merged.stuck) {
        out << "stuck." << r.walker << " = step " << r.at_step << " host " << graph.host_name(r.host) << '\n';
    }
}

} // namespace websample
