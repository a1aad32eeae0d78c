#include "websample/walkers.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <omp.h>
#include <string>

#include "websample/seeds.hpp"

namespace websample {

namespace {

constexpr int kMaxJumpDraws = 1000;

void push_step(Trace& trace, const Step& s) {
    if (s.kind == StepKind::SelfloopRun && !trace.empty() && trace.back().kind == StepKind::SelfloopRun &&
        trace.back().node == s.node) {
        trace.back().count += s.count;
    } else {
        trace.push_back(s);
    }
}

NodeId resolve_start(const Environment& env, const WalkConfig& config) {
    if (!env.graph().contains(config.start_node)) {
        throw ConfigError("start node " + std::to_string(config.start_node) + " does not exist");
    }
    const auto start = env.fetch(config.start_node);
    if (!start.fetched()) {
        throw ConfigError("start node " + std::to_string(config.start_node) +
                          " is unfetchable: " + std::string(to_string(*start.failure)));
    }
    return start.final;
}

std::mt19937_64 walker_rng(const WalkConfig& config, std::size_t walker) {
    return std::mt19937_64(derive_seed(config.seed, "walker", walker));
}

struct WalkerResult {
    Trace trace;
    std::optional<StuckRecord> stuck;
};

WalkerResult walk_ab(const Environment& env, const WalkConfig& config, FrozenAdjacency& frozen, NodeId start,
                     std::size_t walker) {
    const WebGraph& g = env.graph();
    auto rng = walker_rng(config, walker);
    HostRunTracker tracker(config.consecutive_host_limit, config.overload_limit);
    WalkerResult out;
    out.trace.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(config.step_budget + 1, 1u << 20)));
    out.trace.push_back({start, StepKind::Start, 1});
    frozen.freeze(env, start, 0);

    std::uint64_t position = 1;
    const auto observe = [&](NodeId v) {
        if (tracker.observe(g.host_id(v)) && !out.stuck) out.stuck = StuckRecord{walker, position, g.host_id(v)};
        return out.stuck.has_value() && config.stop_stuck;
    };
    if (observe(start)) return out;

    NodeId current = start;
    for (std::uint64_t t = 1; t <= config.step_budget; ++t) {
        const Step s = step_ab(env, frozen, current, rng);
        push_step(out.trace, s);
        ++position;
        if (s.kind == StepKind::SelfloopRun) continue;
        frozen.freeze(env, s.node, t);
        current = s.node;
        if (observe(current)) break;
    }
    return out;
}

/// Shared state of the lockstep Walk C rounds.
struct WalkCState {
    SeenCatalog catalog;
    std::vector<Trace> traces;
    std::vector<std::mt19937_64> rngs;
    std::vector<HostRunTracker> trackers;
    std::vector<NodeId> current;
    std::vector<std::uint8_t> active;
    std::vector<Step> pending;
    std::vector<StuckRecord> stuck;
    std::size_t active_count = 0;

    WalkCState(const WebGraph& g, const WalkConfig& config, NodeId start) : catalog(g) {
        const auto w = config.walkers;
        catalog.record_visit(start);
        traces.assign(w, Trace{{start, StepKind::Start, 1}});
        for (std::size_t i = 0; i < w; ++i) {
            rngs.push_back(walker_rng(config, i));
            trackers.emplace_back(config.consecutive_host_limit, config.overload_limit);
        }
        current.assign(w, start);
        active.assign(w, 1);
        pending.resize(w);
        active_count = w;
        for (std::size_t i = 0; i < w; ++i) observe(g, config, i, start, 1);
    }

    void observe(const WebGraph& g, const WalkConfig& config, std::size_t w, NodeId v, std::uint64_t position) {
        const bool already = std::any_of(stuck.begin(), stuck.end(), [&](const StuckRecord& r) { return r.walker == w; });
        if (trackers[w].observe(g.host_id(v)) && !already) {
            stuck.push_back({w, position, g.host_id(v)});
            if (config.stop_stuck) {
                active[w] = 0;
                --active_count;
            }
        }
    }

    // Applies the round's steps in walker order.
    void apply_round(const WebGraph& g, const WalkConfig& config, std::uint64_t t) {
        for (std::size_t w = 0; w < traces.size(); ++w) {
            if (!active[w]) continue;
            const Step& s = pending[w];
            traces[w].push_back(s);
            catalog.record_visit(s.node);
            current[w] = s.node;
            observe(g, config, w, s.node, t + 1);
        }
    }
};

MergedWalk finish(std::size_t node_count, std::vector<Trace> traces, std::vector<StuckRecord> stuck) {
    MergedWalk m = MergedWalk::from_traces(node_count, std::move(traces));
    std::sort(stuck.begin(), stuck.end(), [](const auto& a, const auto& b) { return a.walker < b.walker; });
    m.stuck = std::move(stuck);
    return m;
}

MergedWalk finish_c(std::size_t node_count, WalkCState& state) {
    MergedWalk m = finish(node_count, std::move(state.traces), std::move(state.stuck));
    m.seen_nodes = state.catalog.seen_count();
    m.seen_hosts = state.catalog.host_count();
    m.seen_domains = state.catalog.domain_count();
    return m;
}

} // namespace

std::string_view to_string(StepKind kind) {
    switch (kind) {
    case StepKind::Start: return "start";
    case StepKind::Outlink: return "outlink";
    case StepKind::Inlink: return "inlink";
    case StepKind::SelfloopRun: return "selfloop";
    case StepKind::Jump: return "jump";
    case StepKind::SiblingFallback: return "sibling";
    }
    return "unknown";
}

std::optional<StepKind> parse_step_kind(std::string_view name) {
    for (std::size_t k = 0; k < kStepKindCount; ++k) {
        const auto kind = static_cast<StepKind>(k);
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

std::uint64_t expanded_length(const Trace& trace) {
    std::uint64_t total = 0;
    for (const Step& s : trace) total += s.count;
    return total;
}

void WalkConfig::validate() const {
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("reset probability d must lie in (0,1)");
    if (walkers < 1) throw ConfigError("need at least one walker");
    if (consecutive_host_limit < 1 || overload_limit < 1) throw ConfigError("stuck limits must be >= 1");
    if (max < 1) throw ConfigError("max must be >= 1");
}

MergedWalk MergedWalk::from_traces(std::size_t node_count, std::vector<Trace> traces) {
    MergedWalk m;
    m.node_count = node_count;
    m.visit_count.assign(node_count, 0);
    for (const Trace& trace : traces) {
        for (const Step& s : trace) {
            if (s.node >= node_count) throw DataError("trace references node " + std::to_string(s.node));
            m.visit_count[s.node] += s.count;
            m.tallies[static_cast<std::size_t>(s.kind)] += s.count;
        }
    }
    m.traces = std::move(traces);
    return m;
}

std::uint64_t MergedWalk::total_steps() const {
    std::uint64_t total = 0;
    for (auto t : tallies) total += t;
    return total;
}

std::uint64_t MergedWalk::transitions() const {
    return total_steps() - tallies[static_cast<std::size_t>(StepKind::Start)];
}

std::size_t MergedWalk::visited_nodes() const {
    return static_cast<std::size_t>(std::count_if(visit_count.begin(), visit_count.end(), [](auto c) { return c > 0; }));
}

bool MergedWalk::is_stuck(std::size_t walker) const {
    return std::any_of(stuck.begin(), stuck.end(), [&](const StuckRecord& r) { return r.walker == walker; });
}

double MergedWalk::fraction(StepKind kind) const {
    const auto n = transitions();
    return n == 0 ? 0.0 : static_cast<double>(tallies[static_cast<std::size_t>(kind)]) / static_cast<double>(n);
}

Step step_ab(const Environment& env, const FrozenAdjacency& frozen, NodeId current, std::mt19937_64& rng) {
    const AdjacencyRecord& rec = frozen.at(current);
    const std::size_t real = rec.size();
    const auto slot_target = [&](std::size_t i) { return i < rec.outlinks.size() ? rec.outlinks[i] : rec.inlinks[i - rec.outlinks.size()]; };

    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, real)(rng);
    if (pick == real) return {current, StepKind::SelfloopRun, 1};

    const auto outcome = env.fetch(slot_target(pick));
    if (outcome.fetched()) {
        return {outcome.final, pick < rec.outlinks.size() ? StepKind::Outlink : StepKind::Inlink, 1};
    }

    std::vector<std::size_t> siblings;
    for (std::size_t i = 0; i < real; ++i) {
        if (i != pick && env.fetchable(slot_target(i))) siblings.push_back(i);
    }
    if (siblings.empty()) return {current, StepKind::SelfloopRun, 1};
    const auto chosen = siblings[std::uniform_int_distribution<std::size_t>(0, siblings.size() - 1)(rng)];
    return {env.fetch(slot_target(chosen)).final, StepKind::SiblingFallback, 1};
}

Step step_c(const Environment& env, const SeenCatalog& catalog, NodeId current, double d, std::mt19937_64& rng,
            JumpMode mode) {
    const WebGraph& g = env.graph();
    const bool reset = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < d;
    if (!reset) {
        const auto outlinks = g.out(current);
        if (!outlinks.empty()) {
            const NodeId head = outlinks[std::uniform_int_distribution<std::size_t>(0, outlinks.size() - 1)(rng)];
            const auto outcome = env.fetch(head);
            if (outcome.fetched()) return {outcome.final, StepKind::Outlink, 1};
        }
    }
    for (int attempt = 0; attempt < kMaxJumpDraws; ++attempt) {
        std::optional<NodeId> target;
        if (mode == JumpMode::GlobalUniform) {
            target = std::uniform_int_distribution<NodeId>(0, static_cast<NodeId>(g.node_count() - 1))(rng);
        } else {
            target = catalog.draw(rng);
        }
        if (!target) break;
        const auto outcome = env.fetch(*target);
        if (outcome.fetched()) return {outcome.final, StepKind::Jump, 1};
    }
    return {current, StepKind::Jump, 1};
}

std::uint64_t draw_selfloop_run(std::uint64_t k, std::uint64_t max, std::mt19937_64& rng) {
    if (k > max) throw ConfigError("modified degree " + std::to_string(k) + " exceeds max=" + std::to_string(max));
    if (k == max) return 0;
    std::geometric_distribution<std::uint64_t> geo(static_cast<double>(k) / static_cast<double>(max));
    return geo(rng);
}

Trace inject_selfloops(const Trace& trace, const FrozenAdjacency& frozen, Regularization reg, std::uint64_t max,
                       std::mt19937_64& rng) {
    Trace out;
    out.reserve(trace.size() * (reg == Regularization::B ? 2 : 1));
    for (const Step& s : trace) {
        push_step(out, s);
        if (reg == Regularization::A) continue;
        // Each Walk A step at the node, selfloop steps included, is followed by
        // a geometric number of extra B selfloops.
        const std::uint64_t k = modified_degree(frozen.at(s.node), Regularization::A, max);
        std::uint64_t extra = 0;
        for (std::uint64_t i = 0; i < s.count; ++i) extra += draw_selfloop_run(k, max, rng);
        if (extra > 0) push_step(out, {s.node, StepKind::SelfloopRun, extra});
    }
    return out;
}

MergedWalk inject_selfloops(const MergedWalk& merged, const FrozenAdjacency& frozen, Regularization reg,
                            std::uint64_t max, std::uint64_t seed) {
    std::vector<Trace> traces(merged.traces.size());
    const auto n = static_cast<std::int64_t>(traces.size());
    // Exceptions must not escape the parallel region; keep the lowest walker's.
    std::vector<std::exception_ptr> errors(traces.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t w = 0; w < n; ++w) {
        try {
            std::mt19937_64 rng(derive_seed(seed, "selfloops", static_cast<std::uint64_t>(w)));
            traces[w] = inject_selfloops(merged.traces[w], frozen, reg, max, rng);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    MergedWalk out = MergedWalk::from_traces(merged.node_count, std::move(traces));
    out.stuck = merged.stuck;
    out.seen_nodes = merged.seen_nodes;
    out.seen_hosts = merged.seen_hosts;
    out.seen_domains = merged.seen_domains;
    return out;
}

MergedWalk run_walks(const Environment& env, const WalkConfig& config, FrozenAdjacency& frozen) {
    config.validate();
    const NodeId start = resolve_start(env, config);
    const WebGraph& g = env.graph();
    const auto walkers = static_cast<std::int64_t>(config.walkers);

    if (config.algorithm == WalkAlgorithm::AB) {
        std::vector<WalkerResult> results(config.walkers);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t w = 0; w < walkers; ++w) {
            results[w] = walk_ab(env, config, frozen, start, static_cast<std::size_t>(w));
        }
        std::vector<Trace> traces;
        std::vector<StuckRecord> stuck;
        for (auto& r : results) {
            traces.push_back(std::move(r.trace));
            if (r.stuck) stuck.push_back(*r.stuck);
        }
        return finish(g.node_count(), std::move(traces), std::move(stuck));
    }

    WalkCState state(g, config, start);
#pragma omp parallel
    {
        for (std::uint64_t t = 1; t <= config.step_budget; ++t) {
            if (state.active_count == 0) break;
#pragma omp for schedule(static)
            for (std::int64_t w = 0; w < walkers; ++w) {
                if (state.active[w]) {
                    state.pending[w] = step_c(env, state.catalog, state.current[w], config.d, state.rngs[w], config.jump_mode);
                }
            }
#pragma omp single
            state.apply_round(g, config, t);
        }
    }
    return finish_c(g.node_count(), state);
}

MergedWalk run_walks(const Environment& env, const WalkConfig& config) {
    FrozenAdjacency frozen(env.graph().node_count());
    return run_walks(env, config, frozen);
}

MergedWalk run_walks_serial(const Environment& env, const WalkConfig& config, FrozenAdjacency& frozen) {
    config.validate();
    const NodeId start = resolve_start(env, config);
    const WebGraph& g = env.graph();

    if (config.algorithm == WalkAlgorithm::AB) {
        std::vector<Trace> traces;
        std::vector<StuckRecord> stuck;
        for (std::size_t w = 0; w < config.walkers; ++w) {
            auto r = walk_ab(env, config, frozen, start, w);
            traces.push_back(std::move(r.trace));
            if (r.stuck) stuck.push_back(*r.stuck);
        }
        return finish(g.node_count(), std::move(traces), std::move(stuck));
    }

    WalkCState state(g, config, start);
    for (std::uint64_t t = 1; t <= config.step_budget && state.active_count > 0; ++t) {
        for (std::size_t w = 0; w < config.walkers; ++w) {
            if (state.active[w]) {
                state.pending[w] = step_c(env, state.catalog, state.current[w], config.d, state.rngs[w], config.jump_mode);
            }
        }
        state.apply_round(g, config, t);
    }
    return finish_c(g.node_count(), state);
}

} // namespace websample
