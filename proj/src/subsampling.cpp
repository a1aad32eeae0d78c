#include "websample/subsampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "websample/pagerank.hpp"
#include "websample/seeds.hpp"

namespace websample {

namespace {

const char* unit_name(SampleUnit unit) {
    switch (unit) {
    case SampleUnit::States: return "States";
    case SampleUnit::Steps: return "Steps";
    case SampleUnit::CRandom: return "Random";
    case SampleUnit::CPR: return "PR";
    case SampleUnit::CVR: return "VR";
    }
    return "?";
}

const char* window_name(Window window) {
    switch (window) {
    case Window::LastHalf: return "LastHalf";
    case Window::LastQuarter: return "LastQuarter";
    case Window::All: return "All";
    }
    return "?";
}

bool is_c_unit(SampleUnit unit) {
    return unit == SampleUnit::CRandom || unit == SampleUnit::CPR || unit == SampleUnit::CVR;
}

} // namespace

std::string SampleSpec::label() const {
    const char algo = algorithm == SampleAlgorithm::A ? 'A' : algorithm == SampleAlgorithm::B ? 'B' : 'C';
    std::string out(1, algo);
    out += '_';
    out += unit_name(unit);
    if (algorithm == SampleAlgorithm::C) {
        if (window != Window::All) out += std::string("On") + window_name(window);
    } else {
        out += std::string("On") + window_name(window);
    }
    return out;
}

void SampleSpec::validate() const {
    const bool c = algorithm == SampleAlgorithm::C;
    if (c != is_c_unit(unit)) throw ConfigError("sample unit does not belong to algorithm in " + label());
    if (!c && window == Window::All) throw ConfigError(label() + ": A and B samples need a LastHalf or LastQuarter window");
}

std::optional<SampleSpec> parse_sample_label(const std::string& label) {
    for (auto algo : {SampleAlgorithm::A, SampleAlgorithm::B, SampleAlgorithm::C}) {
        for (auto unit : {SampleUnit::States, SampleUnit::Steps, SampleUnit::CRandom, SampleUnit::CPR, SampleUnit::CVR}) {
            for (auto window : {Window::LastHalf, Window::LastQuarter, Window::All}) {
                SampleSpec spec{algo, unit, window};
                try {
                    spec.validate();
                } catch (const ConfigError&) {
                    continue;
                }
                if (spec.label() == label) return spec;
            }
        }
    }
    return std::nullopt;
}

std::vector<SampleSpec> standard_sample_specs(std::size_t target_size, std::uint64_t seed) {
    std::vector<SampleSpec> specs;
    for (auto algo : {SampleAlgorithm::A, SampleAlgorithm::B}) {
        for (auto unit : {SampleUnit::States, SampleUnit::Steps}) {
            for (auto window : {Window::LastHalf, Window::LastQuarter}) specs.push_back({algo, unit, window, target_size});
        }
    }
    for (auto unit : {SampleUnit::CRandom, SampleUnit::CPR, SampleUnit::CVR}) {
        specs.push_back({SampleAlgorithm::C, unit, Window::All, target_size});
    }
    for (auto& s : specs) s.seed = derive_seed(seed, s.label());
    return specs;
}

WindowView extract_window(const MergedWalk& merged, Window window) {
    std::vector<std::uint64_t> visits(merged.node_count, 0);
    WindowView view;
    for (const Trace& trace : merged.traces) {
        const std::uint64_t length = expanded_length(trace);
        std::uint64_t keep = length;
        if (window == Window::LastHalf) keep = (length + 1) / 2;
        if (window == Window::LastQuarter) keep = (length + 3) / 4;
        const std::uint64_t skip = length - keep;

        std::uint64_t pos = 0;
        for (const Step& s : trace) {
            const std::uint64_t end = pos + s.count;
            if (end > skip) {
                const std::uint64_t inside = end - std::max(pos, skip);
                visits[s.node] += inside;
                view.total_steps += inside;
            }
            pos = end;
        }
    }
    for (NodeId v = 0; v < visits.size(); ++v) {
        if (visits[v] == 0) continue;
        view.states.push_back(v);
        view.visits.push_back(visits[v]);
    }
    return view;
}

double ScoreVector::sum() const {
    return std::accumulate(values.begin(), values.end(), 0.0);
}

ScoreVector subgraph_pagerank(const MergedWalk& merged, const WebGraph& graph, double d) {
    std::vector<NodeId> visited;
    for (NodeId v = 0; v < merged.visit_count.size(); ++v) {
        if (merged.visit_count[v] > 0) visited.push_back(v);
    }
    ScoreVector out{ScoreKind::SubgraphPageRank, std::vector<double>(graph.node_count(), 0.0)};
    if (visited.empty()) return out;
    const PageRankResult pr = pagerank(Digraph::induced(graph, visited), d);
    for (std::size_t i = 0; i < visited.size(); ++i) out.values[visited[i]] = pr.scores[i];
    return out;
}

ScoreVector visit_ratio(const MergedWalk& merged) {
    ScoreVector out{ScoreKind::VisitRatio, std::vector<double>(merged.node_count, 0.0)};
    const double total = static_cast<double>(merged.total_steps());
    if (total == 0) return out;
    for (std::size_t v = 0; v < merged.node_count; ++v) out.values[v] = static_cast<double>(merged.visit_count[v]) / total;
    return out;
}

ScoreVector visit_ratio(const WindowView& window, std::size_t node_count) {
    ScoreVector out{ScoreKind::VisitRatio, std::vector<double>(node_count, 0.0)};
    if (window.total_steps == 0) return out;
    const double total = static_cast<double>(window.total_steps);
    for (std::size_t i = 0; i < window.states.size(); ++i) {
        out.values[window.states[i]] = static_cast<double>(window.visits[i]) / total;
    }
    return out;
}

double calibrate_scale(std::span<const double> weights, double target) {
    if (weights.empty() || target <= 0.0) return 0.0;
    std::vector<double> w(weights.begin(), weights.end());
    std::sort(w.begin(), w.end(), std::greater<>());
    const std::size_t n = w.size();
    if (target >= static_cast<double>(n)) return 1.0 / w.back();

    // With the k largest weights saturated, c = (target - k) / (sum of the
    // rest); the first k for which that c is consistent is the solution.
    std::vector<double> suffix(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + w[i];
    for (std::size_t k = 0; k < n; ++k) {
        const double c = (target - static_cast<double>(k)) / suffix[k];
        if (c * w[k] <= 1.0 && (k == 0 || c * w[k - 1] >= 1.0)) return c;
    }
    return 1.0 / w.back();
}

Sample subsample(const WindowView& window, std::span<const double> weights, const SampleSpec& spec,
                 std::size_t repetition) {
    if (weights.size() != window.states.size()) throw DataError("weight count does not match window states");
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
            throw DataError(spec.label() + ": non-positive weight for node " + std::to_string(window.states[i]));
        }
    }
    Sample s;
    s.spec = spec;
    s.repetition = repetition;
    s.window_states = window.states.size();
    s.scale = calibrate_scale(weights, static_cast<double>(spec.target_size));

    std::mt19937_64 rng(derive_seed(spec.seed, "repetition", repetition));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double p = std::min(1.0, s.scale * weights[i]);
        if (unit(rng) < p) {
            s.members.push_back(window.states[i]);
            s.weights.push_back(weights[i]);
        }
    }
    return s;
}

std::vector<double> sample_weights(const WindowView& window, const SampleSpec& spec, const SampleInputs& inputs) {
    spec.validate();
    std::vector<double> w(window.states.size(), 1.0);
    const auto visits = [&](std::size_t i) { return static_cast<double>(window.visits[i]); };
    const auto degree = [&](std::size_t i) {
        if (inputs.frozen == nullptr) throw ConfigError(spec.label() + " needs the frozen adjacency");
        return static_cast<double>(modified_degree(inputs.frozen->at(window.states[i]), Regularization::A, 0));
    };

    switch (spec.algorithm) {
    case SampleAlgorithm::A:
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = (spec.unit == SampleUnit::Steps ? visits(i) : 1.0) / degree(i);
        }
        break;
    case SampleAlgorithm::B:
        if (spec.unit == SampleUnit::Steps) {
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = visits(i);
        }
        break;
    case SampleAlgorithm::C: {
        if (spec.unit == SampleUnit::CRandom) break;
        ScoreVector scores;
        if (spec.unit == SampleUnit::CPR) {
            if (inputs.graph == nullptr || inputs.walk == nullptr) throw ConfigError("C_PR needs the graph and walk");
            scores = subgraph_pagerank(*inputs.walk, *inputs.graph, inputs.d);
        } else {
            scores = visit_ratio(window, inputs.walk != nullptr ? inputs.walk->node_count : 0);
        }
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double score = scores.values.at(window.states[i]);
            w[i] = score > 0.0 ? 1.0 / score : 0.0;
        }
        break;
    }
    }
    return w;
}

std::vector<Sample> make_samples(const SampleInputs& inputs, const SampleSpec& spec, std::size_t repetitions) {
    if (inputs.walk == nullptr) throw ConfigError(spec.label() + ": no walk supplied");
    const WindowView window = extract_window(*inputs.walk, spec.window);
    const std::vector<double> weights = sample_weights(window, spec, inputs);
    std::vector<Sample> out(repetitions);
    const auto reps = static_cast<std::int64_t>(repetitions);
    std::vector<std::exception_ptr> errors(repetitions);
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < reps; ++r) {
        try {
            out[r] = subsample(window, weights, spec, static_cast<std::size_t>(r));
        } catch (...) {
            errors[r] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

void write_sample(std::ostream& out, const Sample& sample) {
    out << "# sample " << sample.spec.label() << " repetition=" << sample.repetition
        << " target=" << sample.spec.target_size << " seed=" << sample.spec.seed
        << " window_states=" << sample.window_states << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < sample.members.size(); ++i) {
        out << "S " << sample.members[i] << ' ' << sample.weights[i] << '\n';
    }
}

Sample read_sample(std::istream& in) {
    Sample s;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string tag;
        fields >> tag;
        if (tag == "#") {
            std::string word, label;
            fields >> word >> label;
            if (word != "sample") continue;
            const auto spec = parse_sample_label(label);
            if (!spec) throw ParseError(line_no, "unknown sample label '" + label + "'");
            s.spec = *spec;
            std::string kv;
            while (fields >> kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw ParseError(line_no, "malformed header field '" + kv + "'");
                const std::string key = kv.substr(0, eq);
                std::uint64_t value = 0;
                const auto* first = kv.data() + eq + 1;
                const auto* last = kv.data() + kv.size();
                if (std::from_chars(first, last, value).ptr != last) throw ParseError(line_no, "bad value in '" + kv + "'");
                if (key == "repetition") s.repetition = value;
                else if (key == "target") s.spec.target_size = value;
                else if (key == "seed") s.spec.seed = value;
                else if (key == "window_states") s.window_states = value;
            }
            header = true;
            continue;
        }
        if (!header) throw ParseError(line_no, "missing sample header");
        if (tag != "S") throw ParseError(line_no, "unknown record '" + tag + "'");
        NodeId node = 0;
        double weight = 0.0;
        if (!(fields >> node >> weight)) throw ParseError(line_no, "malformed sample line");
        if (!s.members.empty() && node <= s.members.back()) throw ParseError(line_no, "members must be ascending and unique");
        s.members.push_back(node);
        s.weights.push_back(weight);
    }
    if (!header) throw ParseError(line_no, "empty sample file");
    return s;
}

} // namespace websample
