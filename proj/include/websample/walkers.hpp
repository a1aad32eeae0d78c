#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "websample/environment.hpp"
#include "websample/frozen_adjacency.hpp"
#include "websample/seen_catalog.hpp"

namespace websample {

enum class WalkAlgorithm : std::uint8_t { AB, C };

/// Where Walk C lands on a random reset. GlobalUniform exists only so the
/// walk has a closed-form stationary law (PageRank) to verify against.
enum class JumpMode : std::uint8_t { SeenHierarchy, GlobalUniform };

enum class StepKind : std::uint8_t { Start, Outlink, Inlink, SelfloopRun, Jump, SiblingFallback };
inline constexpr std::size_t kStepKindCount = 6;

std::string_view to_string(StepKind kind);
std::optional<StepKind> parse_step_kind(std::string_view name);

/// One trace entry. SelfloopRun entries stand for `count` consecutive
/// selfloop steps; every other kind has count 1.
struct Step {
    NodeId node = 0;
    StepKind kind = StepKind::Start;
    std::uint64_t count = 1;

    bool operator==(const Step&) const = default;
};

using Trace = std::vector<Step>;

/// Number of walk steps in a trace with selfloop runs expanded.
std::uint64_t expanded_length(const Trace& trace);

struct WalkConfig {
    WalkAlgorithm algorithm = WalkAlgorithm::AB;
    double d = 1.0 / 7.0;
    std::uint64_t max = 10'000'000;
    std::size_t walkers = 50;
    std::uint64_t step_budget = 1000;
    NodeId start_node = 0;
    std::uint64_t consecutive_host_limit = 3000;
    std::uint64_t overload_limit = 12;
    /// Terminate a walker as soon as it is declared stuck.
    bool stop_stuck = true;
    JumpMode jump_mode = JumpMode::SeenHierarchy;
    std::uint64_t seed = 1;

    void validate() const;  // throws ConfigError
};

struct StuckRecord {
    std::size_t walker = 0;
    std::uint64_t at_step = 0;  // 1-based expanded step position
    std::uint32_t host = 0;

    bool operator==(const StuckRecord&) const = default;
};

struct MergedWalk {
    std::size_t node_count = 0;
    std::vector<Trace> traces;
    std::vector<std::uint64_t> visit_count;  // selfloop runs counted by length
    std::array<std::uint64_t, kStepKindCount> tallies{};
    std::vector<StuckRecord> stuck;  // ascending walker index
    std::size_t seen_nodes = 0;
    std::size_t seen_hosts = 0;
    std::size_t seen_domains = 0;

    /// Rebuilds visit counts and tallies from `traces`.
    static MergedWalk from_traces(std::size_t node_count, std::vector<Trace> traces);

    std::uint64_t total_steps() const;
    /// All non-initial steps; the tallies other than Start partition them.
    std::uint64_t transitions() const;
    std::size_t visited_nodes() const;
    bool is_stuck(std::size_t walker) const;
    double fraction(StepKind kind) const;

    bool operator==(const MergedWalk&) const = default;
};

/// Walk AB transition: uniform over the frozen slots of `current` (outlinks,
/// retrieved inlinks and one selfloop). An unfetchable pick falls back to a
/// uniformly chosen fetchable sibling slot, or the selfloop if none is left.
Step step_ab(const Environment& env, const FrozenAdjacency& frozen, NodeId current, std::mt19937_64& rng);

/// Walk C transition: reset with probability d, otherwise follow a uniform
/// outlink; dead ends and fetch failures force a reset.
Step step_c(const Environment& env, const SeenCatalog& catalog, NodeId current, double d, std::mt19937_64& rng,
            JumpMode mode = JumpMode::SeenHierarchy);

/// Extra selfloop steps after one Walk A step at a node of modified degree k
/// when the degree is padded to `max`: Geometric(k / max) failures.
std::uint64_t draw_selfloop_run(std::uint64_t k, std::uint64_t max, std::mt19937_64& rng);

/// Turns a Walk AB trace into a Walk A (unchanged) or Walk B trace.
Trace inject_selfloops(const Trace& trace, const FrozenAdjacency& frozen, Regularization reg, std::uint64_t max,
                       std::mt19937_64& rng);
MergedWalk inject_selfloops(const MergedWalk& merged, const FrozenAdjacency& frozen, Regularization reg,
                            std::uint64_t max, std::uint64_t seed);

/// Runs `config.walkers` walkers from the start node. AB walkers share
/// `frozen` and run independently in parallel. C walkers share a seen catalog
/// and advance in lockstep rounds whose catalog updates are applied in walker
/// order, so results do not depend on thread scheduling.
MergedWalk run_walks(const Environment& env, const WalkConfig& config, FrozenAdjacency& frozen);
MergedWalk run_walks(const Environment& env, const WalkConfig& config);

/// Single-threaded reference with identical semantics.
MergedWalk run_walks_serial(const Environment& env, const WalkConfig& config, FrozenAdjacency& frozen);

/// Consecutive-same-host bookkeeping for one walker.
class HostRunTracker {
public:
    HostRunTracker(std::uint64_t consecutive_limit, std::uint64_t overload_limit);

    /// Feeds one fetch on `host`; returns true the moment the walker is stuck.
    bool observe(std::uint32_t host);
    bool stuck() const { return stuck_; }
    std::uint64_t overload_events(std::uint32_t host) const;

private:
    std::uint64_t consecutive_limit_;
    std::uint64_t overload_limit_;
    std::optional<std::uint32_t> last_host_;
    std::uint64_t run_ = 0;
    std::map<std::uint32_t, std::uint64_t> events_;
    bool stuck_ = false;
};

/// Replays the host-overload rule over every trace, truncates walkers at the
/// step they got stuck, and removes stuck walkers' steps from the merged
/// counts. Traces stay index-aligned; pruned ones are left empty.
MergedWalk detect_stuck_and_prune(const MergedWalk& merged, const WebGraph& graph, const WalkConfig& config);

/// Same replay without pruning: stuck walkers are truncated and listed.
MergedWalk detect_stuck(const MergedWalk& merged, const WebGraph& graph, const WalkConfig& config);

/// Canonical frozen-adjacency snapshot: nodes registered in (step, walker)
/// order, independent of thread scheduling.
void write_canonical_snapshot(std::ostream& out, const Environment& env, const MergedWalk& merged);

// Trace dump: `W <walker> <stepindex> <nodeid> <kind>[:<count>]`, preceded by
// a `# walkers=<k> nodes=<n>` comment.
void write_trace_dump(std::ostream& out, const MergedWalk& merged);
MergedWalk read_trace_dump(std::istream& in);  // throws ParseError
void write_walk_summary(std::ostream& out, const MergedWalk& merged, const WebGraph& graph,
                        std::string_view algorithm_label);

} // namespace websample
