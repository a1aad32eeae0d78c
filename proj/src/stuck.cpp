#include <algorithm>

#include "websample/walkers.hpp"

namespace websample {

HostRunTracker::HostRunTracker(std::uint64_t consecutive_limit, std::uint64_t overload_limit)
    : consecutive_limit_(consecutive_limit), overload_limit_(overload_limit) {
    if (consecutive_limit_ == 0 || overload_limit_ == 0) throw ConfigError("stuck limits must be >= 1");
}

bool HostRunTracker::observe(std::uint32_t host) {
    if (last_host_ == host) {
        ++run_;
    } else {
        last_host_ = host;
        run_ = 1;
    }
    if (run_ % consecutive_limit_ != 0) return false;
    // Every full block of consecutive fetches on the host is one overload event.
    if (++events_[host] >= overload_limit_ && !stuck_) {
        stuck_ = true;
        return true;
    }
    return false;
}

std::uint64_t HostRunTracker::overload_events(std::uint32_t host) const {
    const auto it = events_.find(host);
    return it == events_.end() ? 0 : it->second;
}

MergedWalk detect_stuck(const MergedWalk& merged, const WebGraph& graph, const WalkConfig& config) {
    std::vector<Trace> traces = merged.traces;
    std::vector<StuckRecord> stuck;
    for (std::size_t w = 0; w < traces.size(); ++w) {
        Trace& trace = traces[w];
        HostRunTracker tracker(config.consecutive_host_limit, config.overload_limit);
        std::uint64_t position = 0;
        for (std::size_t i = 0; i < trace.size(); ++i) {
            position += trace[i].count;
            if (trace[i].kind == StepKind::SelfloopRun) continue;
            const auto host = graph.host_id(trace[i].node);
            if (tracker.observe(host)) {
                stuck.push_back({w, position, host});
                trace.resize(i + 1);
                break;
            }
        }
    }
    MergedWalk out = MergedWalk::from_traces(merged.node_count, std::move(traces));
    out.stuck = std::move(stuck);
    out.seen_nodes = merged.seen_nodes;
    out.seen_hosts = merged.seen_hosts;
    out.seen_domains = merged.seen_domains;
    return out;
}

MergedWalk detect_stuck_and_prune(const MergedWalk& merged, const WebGraph& graph, const WalkConfig& config) {
    MergedWalk detected = detect_stuck(merged, graph, config);
    for (const StuckRecord& r : detected.stuck) detected.traces[r.walker].clear();
    MergedWalk out = MergedWalk::from_traces(detected.node_count, std::move(detected.traces));
    out.stuck = std::move(detected.stuck);
    out.seen_nodes = merged.seen_nodes;
    out.seen_hosts = merged.seen_hosts;
    out.seen_domains = merged.seen_domains;
    return out;
}

} // namespace websample
