#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "websample/frozen_adjacency.hpp"
#include "websample/walkers.hpp"

namespace websample {

enum class SampleAlgorithm : std::uint8_t { A, B, C };
enum class SampleUnit : std::uint8_t { States, Steps, CRandom, CPR, CVR };
enum class Window : std::uint8_t { LastHalf, LastQuarter, All };

inline constexpr std::size_t kDefaultTargetSize = 10000;
inline constexpr std::size_t kDefaultRepetitions = 5;

struct SampleSpec {
    SampleAlgorithm algorithm = SampleAlgorithm::A;
    SampleUnit unit = SampleUnit::States;
    Window window = Window::LastHalf;
    std::size_t target_size = kDefaultTargetSize;
    std::uint64_t seed = 1;

    /// e.g. "A_StatesOnLastHalf", "B_StepsOnLastQuarter", "C_PR". A C label
    /// gets an "On<Window>" suffix only when the window is not All.
    std::string label() const;
    void validate() const;  // throws ConfigError

    bool operator==(const SampleSpec&) const = default;
};

std::optional<SampleSpec> parse_sample_label(const std::string& label);

/// The eleven sample types: A and B x {States, Steps} x {LastHalf,
/// LastQuarter}, then C_Random, C_PR, C_VR. Each spec seed is derived from
/// `seed` and the spec label.
std::vector<SampleSpec> standard_sample_specs(std::size_t target_size, std::uint64_t seed);

/// States of a step window with their in-window visit counts.
struct WindowView {
    std::vector<NodeId> states;         // ascending
    std::vector<std::uint64_t> visits;  // aligned with states
    std::uint64_t total_steps = 0;
};

/// Per walker, keeps the last ceil(L/2) or ceil(L/4) expanded steps (a
/// selfloop run straddling the cut is split), then merges across walkers.
WindowView extract_window(const MergedWalk& merged, Window window);

enum class ScoreKind : std::uint8_t { SubgraphPageRank, VisitRatio, Oracle };

/// Dense score per graph node; nodes outside the support score 0.
struct ScoreVector {
    ScoreKind kind = ScoreKind::Oracle;
    std::vector<double> values;

    double sum() const;
};

/// PageRank of the subgraph induced by the visited states, edges being the
/// graph outlinks among them.
ScoreVector subgraph_pagerank(const MergedWalk& merged, const WebGraph& graph, double d);
ScoreVector visit_ratio(const MergedWalk& merged);
ScoreVector visit_ratio(const WindowView& window, std::size_t node_count);

/// Smallest c with sum_i min(1, c * w_i) = target, solved exactly on the
/// sorted weights. With target >= |w| every item saturates.
double calibrate_scale(std::span<const double> weights, double target);

struct Sample {
    SampleSpec spec;
    std::size_t repetition = 0;
    std::vector<NodeId> members;  // ascending
    std::vector<double> weights;  // weight used per member
    std::size_t window_states = 0;
    double scale = 0.0;
};

/// Includes window state i independently with probability min(1, c * w_i).
/// Throws DataError on a non-positive weight.
Sample subsample(const WindowView& window, std::span<const double> weights, const SampleSpec& spec,
                 std::size_t repetition = 0);

/// What a sample type needs besides its walk.
struct SampleInputs {
    const WebGraph* graph = nullptr;
    /// Walk of the sample's algorithm: Walk A, the selfloop-injected Walk B, or Walk C.
    const MergedWalk* walk = nullptr;
    /// Degree lookup for A weights.
    const FrozenAdjacency* frozen = nullptr;
    /// Damping of the subgraph PageRank used by C_PR.
    double d = 1.0 / 7.0;
};

/// Per-state weights for the spec: A-States 1/deg, A-Steps visit/deg,
/// B-States 1, B-Steps visit, C_Random 1, C_PR 1/PR, C_VR 1/VR.
std::vector<double> sample_weights(const WindowView& window, const SampleSpec& spec, const SampleInputs& inputs);

/// `repetitions` independent samples with seeds derived from the spec seed.
std::vector<Sample> make_samples(const SampleInputs& inputs, const SampleSpec& spec,
                                 std::size_t repetitions = kDefaultRepetitions);

/// `# sample <label> repetition=<r> target=<t> seed=<s> window_states=<n>`
/// followed by `S <nodeid> <weight>` per member.
void write_sample(std::ostream& out, const Sample& sample);
Sample read_sample(std::istream& in);  // throws ParseError

} // namespace websample
