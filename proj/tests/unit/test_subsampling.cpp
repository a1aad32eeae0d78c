#include <doctest.h>

#include <sstream>

#include "../support/oracles.hpp"
#include "websample/errors.hpp"
#include "websample/frozen_adjacency.hpp"
#include "websample/generators.hpp"
#include "websample/subsampling.hpp"

using namespace websample;

namespace {

MergedWalk one_walker(std::size_t nodes, Trace trace) {
    return MergedWalk::from_traces(nodes, {std::move(trace)});
}

Trace unit_trace(std::initializer_list<NodeId> nodes) {
    Trace t;
    for (NodeId v : nodes) t.push_back({v, t.empty() ? StepKind::Start : StepKind::Outlink, 1});
    return t;
}

/// Expands runs and takes the last `keep` steps, the slow way.
std::map<NodeId, std::uint64_t> window_oracle(const Trace& t, std::uint64_t keep) {
    std::vector<NodeId> expanded;
    for (const auto& s : t) expanded.insert(expanded.end(), s.count, s.node);
    std::map<NodeId, std::uint64_t> visits;
    for (std::size_t i = expanded.size() - keep; i < expanded.size(); ++i) ++visits[expanded[i]];
    return visits;
}

} // namespace

TEST_CASE("labels") {
    CHECK(SampleSpec{SampleAlgorithm::A, SampleUnit::States, Window::LastHalf}.label() == "A_StatesOnLastHalf");
    CHECK(SampleSpec{SampleAlgorithm::B, SampleUnit::Steps, Window::LastQuarter}.label() == "B_StepsOnLastQuarter");
    CHECK(SampleSpec{SampleAlgorithm::C, SampleUnit::CRandom, Window::All}.label() == "C_Random");
    CHECK(SampleSpec{SampleAlgorithm::C, SampleUnit::CVR, Window::LastHalf}.label() == "C_VROnLastHalf");
    const auto specs = standard_sample_specs(100, 3);
    REQUIRE(specs.size() == 11);
    std::set<std::uint64_t> seeds;
    for (const auto& s : specs) {
        const auto parsed = parse_sample_label(s.label());
        REQUIRE(parsed);
        CHECK(parsed->algorithm == s.algorithm);
        CHECK(parsed->unit == s.unit);
        CHECK(parsed->window == s.window);
        seeds.insert(s.seed);
    }
    CHECK(seeds.size() == 11);
    CHECK_FALSE(parse_sample_label("D_States"));
    CHECK_THROWS_AS((SampleSpec{SampleAlgorithm::A, SampleUnit::CPR, Window::All}.validate()), ConfigError);
    CHECK_THROWS_AS((SampleSpec{SampleAlgorithm::A, SampleUnit::States, Window::All}.validate()), ConfigError);
}

TEST_CASE("window: last half of 100 steps") {
    Trace t;
    for (NodeId v = 0; v < 100; ++v) t.push_back({v, v == 0 ? StepKind::Start : StepKind::Outlink, 1});
    const WindowView w = extract_window(one_walker(100, t), Window::LastHalf);
    CHECK(w.total_steps == 50);
    CHECK(w.states.front() == 50);
    CHECK(w.states.back() == 99);
}

TEST_CASE("window: [a,a,b,c]") {
    const WindowView w = extract_window(one_walker(3, unit_trace({0, 0, 1, 2})), Window::LastHalf);
    CHECK(w.states == std::vector<NodeId>{1, 2});
    CHECK(w.visits == std::vector<std::uint64_t>{1, 1});
}

TEST_CASE("window: selfloop runs are split at the cut") {
    // Ten steps at a (start plus a run of nine), then five plain steps.
    Trace t{{0, StepKind::Start, 1}, {0, StepKind::SelfloopRun, 9}};
    for (NodeId v = 1; v <= 5; ++v) t.push_back({v, StepKind::Outlink, 1});
    const MergedWalk m = one_walker(6, t);
    const WindowView q = extract_window(m, Window::LastQuarter);
    CHECK(q.states == std::vector<NodeId>{2, 3, 4, 5});
    CHECK(q.total_steps == 4);

    const WindowView h = extract_window(m, Window::LastHalf);
    const auto expected = window_oracle(t, 8);
    REQUIRE(h.states.size() == expected.size());
    for (std::size_t i = 0; i < h.states.size(); ++i) CHECK(expected.at(h.states[i]) == h.visits[i]);
    CHECK(h.visits.front() == 3);  // three of the ten steps at a
}

TEST_CASE("window: random traces against the expansion oracle") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        Trace t{{0, StepKind::Start, 1}};
        const int len = std::uniform_int_distribution<int>(0, 12)(rng);
        for (int i = 0; i < len; ++i) {
            const NodeId v = std::uniform_int_distribution<NodeId>(0, 4)(rng);
            if (rng() % 3 == 0) {
                t.push_back({t.back().node, StepKind::SelfloopRun, 1 + rng() % 6});
            } else {
                t.push_back({v, StepKind::Outlink, 1});
            }
        }
        const std::uint64_t L = expanded_length(t);
        for (auto [window, keep] : {std::pair{Window::LastHalf, (L + 1) / 2}, std::pair{Window::LastQuarter, (L + 3) / 4},
                                    std::pair{Window::All, L}}) {
            const WindowView w = extract_window(one_walker(5, t), window);
            const auto expected = window_oracle(t, keep);
            CHECK(w.total_steps == keep);
            REQUIRE(w.states.size() == expected.size());
            for (std::size_t i = 0; i < w.states.size(); ++i) CHECK(expected.at(w.states[i]) == w.visits[i]);
        }
    }
}

TEST_CASE("calibration") {
    const std::vector<double> w{0.5, 0.25};
    CHECK(calibrate_scale(w, 1.5) == doctest::Approx(2.0));
    CHECK(calibrate_scale(w, 2.0) == doctest::Approx(4.0));

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> weights(200);
        for (auto& x : weights) x = std::exp(std::normal_distribution<double>(0.0, 2.0)(rng));
        const double target = std::uniform_real_distribution<double>(1.0, 199.0)(rng);
        const double c = calibrate_scale(weights, target);
        double total = 0.0;
        for (double x : weights) total += std::min(1.0, c * x);
        CHECK(total == doctest::Approx(target).epsilon(1e-9));
    }
}

TEST_CASE("subsample: inclusion probabilities") {
    WindowView view;
    view.states = {0, 1};
    view.visits = {1, 1};
    view.total_steps = 2;
    const std::vector<double> weights{0.5, 0.25};
    const double c = calibrate_scale(weights, 1.5);
    CHECK(std::min(1.0, c * weights[0]) == doctest::Approx(1.0));
    CHECK(std::min(1.0, c * weights[1]) == doctest::Approx(0.5));

    // Target 1: c = 4/3, so the states enter with probability 2/3 and 1/3.
    SampleSpec spec{SampleAlgorithm::A, SampleUnit::States, Window::LastHalf, 1, 17};
    constexpr int kReps = 20'000;
    std::vector<double> hits(2, 0.0);
    for (std::size_t r = 0; r < kReps; ++r) {
        for (NodeId v : subsample(view, weights, spec, r).members) hits[v] += 1.0;
    }
    const auto [stat, df] = oracle::pearson({hits[0], kReps - hits[0], hits[1], kReps - hits[1]},
                                            {kReps * 2.0 / 3.0, kReps / 3.0, kReps / 3.0, kReps * 2.0 / 3.0});
    CHECK(stat < oracle::chi_square_critical(df - 1, 0.01));

    // Target equal to the state count includes everything.
    spec = {SampleAlgorithm::B, SampleUnit::States, Window::LastHalf, 2, 5};
    const Sample all = subsample(view, std::vector<double>{1.0, 1.0}, spec, 0);
    CHECK(all.members == std::vector<NodeId>{0, 1});

    CHECK_THROWS_AS(subsample(view, std::vector<double>{1.0, 0.0}, spec, 0), DataError);
    CHECK_THROWS_AS(subsample(view, std::vector<double>{1.0}, spec, 0), DataError);
}

TEST_CASE("subsample: expected size hits the target") {
    WindowView view;
    for (NodeId v = 0; v < 2000; ++v) {
        view.states.push_back(v);
        view.visits.push_back(1 + v % 7);
        view.total_steps += view.visits.back();
    }
    std::vector<double> weights;
    for (auto x : view.visits) weights.push_back(1.0 / static_cast<double>(x));
    SampleSpec spec{SampleAlgorithm::A, SampleUnit::States, Window::LastHalf, 300, 8};
    double sizes = 0.0;
    for (std::size_t r = 0; r < 200; ++r) sizes += static_cast<double>(subsample(view, weights, spec, r).members.size());
    CHECK(std::abs(sizes / 200.0 - 300.0) < 5.0);
}

TEST_CASE("sample weights per type") {
    const WebGraph g = generate_trap_graph(8);
    const Environment env(g, 1);
    FrozenAdjacency frozen(g.node_count());
    Trace t{{4, StepKind::Start, 1}, {4, StepKind::SelfloopRun, 3}, {0, StepKind::Outlink, 1}, {1, StepKind::Outlink, 1}};
    for (const auto& s : t) frozen.freeze(env, s.node, 0);
    const MergedWalk m = one_walker(8, t);
    const SampleInputs inputs{&g, &m, &frozen, 1.0 / 7.0};
    const WindowView w = extract_window(m, Window::LastHalf);  // 3 steps: one at 4, then 0, 1
    REQUIRE(w.states == std::vector<NodeId>{0, 1, 4});

    const double deg0 = static_cast<double>(frozen.at(0).size() + 1);
    const double deg4 = static_cast<double>(frozen.at(4).size() + 1);
    auto a_states = sample_weights(w, {SampleAlgorithm::A, SampleUnit::States, Window::LastHalf}, inputs);
    CHECK(a_states[0] == doctest::Approx(1.0 / deg0));
    CHECK(a_states[2] == doctest::Approx(1.0 / deg4));
    auto b_steps = sample_weights(w, {SampleAlgorithm::B, SampleUnit::Steps, Window::LastHalf}, inputs);
    CHECK(b_steps == std::vector<double>{1.0, 1.0, 1.0});
    auto c_vr = sample_weights(w, {SampleAlgorithm::C, SampleUnit::CVR, Window::LastHalf}, inputs);
    CHECK(c_vr == std::vector<double>{3.0, 3.0, 3.0});
    auto c_random = sample_weights(w, {SampleAlgorithm::C, SampleUnit::CRandom, Window::LastHalf}, inputs);
    CHECK(c_random == std::vector<double>{1.0, 1.0, 1.0});

    const SampleInputs no_frozen{&g, &m, nullptr, 1.0 / 7.0};
    CHECK_THROWS_AS(sample_weights(w, {SampleAlgorithm::A, SampleUnit::States, Window::LastHalf}, no_frozen), ConfigError);
}

TEST_CASE("subgraph PageRank") {
    const WebGraph single({oracle::own_host_page(0), oracle::own_host_page(1)}, {{1}, {}});
    const auto one = subgraph_pagerank(one_walker(2, unit_trace({0})), single, 1.0 / 7.0);
    CHECK(one.values == std::vector<double>{1.0, 0.0});

    const WebGraph cycle({oracle::own_host_page(0), oracle::own_host_page(1)}, {{1}, {0}});
    const auto two = subgraph_pagerank(one_walker(2, unit_trace({0, 1})), cycle, 1.0 / 7.0);
    CHECK(two.values[0] == doctest::Approx(0.5));
    CHECK(two.values[1] == doctest::Approx(0.5));

    // a -> b -> c with c dangling, plus an unvisited d that links into a.
    const WebGraph chain({oracle::own_host_page(0), oracle::own_host_page(1), oracle::own_host_page(2),
                          oracle::own_host_page(3)},
                         {{1}, {2}, {}, {0}});
    const auto three = subgraph_pagerank(one_walker(4, unit_trace({0, 1, 2})), chain, 1.0 / 7.0);
    const auto dense = oracle::power_iteration(oracle::pagerank_matrix(3, {{0, 1}, {1, 2}}, 1.0 / 7.0));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(three.values[i] - dense[i]) < 1e-8);
    CHECK(three.values[3] == 0.0);
}

TEST_CASE("visit ratio") {
    const auto r = visit_ratio(one_walker(2, unit_trace({0, 0, 1})));
    CHECK(r.values[0] == doctest::Approx(2.0 / 3.0));
    CHECK(r.values[1] == doctest::Approx(1.0 / 3.0));
    const auto loop = visit_ratio(one_walker(1, Trace{{0, StepKind::Start, 1}, {0, StepKind::SelfloopRun, 9}}));
    CHECK(loop.values == std::vector<double>{1.0});
}

TEST_CASE("make_samples: determinism and single repetition") {
    GeneratorSpec gs;
    gs.n = 2000;
    gs.seed = 4;
    const WebGraph g = generate_power_law_web(gs);
    const Environment env(g, 4);
    FrozenAdjacency frozen(g.node_count());
    WalkConfig c;
    c.walkers = 4;
    c.step_budget = 2000;
    const MergedWalk m = run_walks(env, c, frozen);
    const SampleInputs inputs{&g, &m, &frozen, 1.0 / 7.0};
    const SampleSpec spec{SampleAlgorithm::A, SampleUnit::States, Window::LastHalf, 100, 99};

    const auto five = make_samples(inputs, spec);
    const auto again = make_samples(inputs, spec);
    REQUIRE(five.size() == 5);
    for (std::size_t r = 0; r < 5; ++r) {
        CHECK(five[r].members == again[r].members);
        CHECK(five[r].repetition == r);
    }
    CHECK(five[0].members != five[1].members);

    const auto single = make_samples(inputs, spec, 1);
    const WindowView w = extract_window(m, Window::LastHalf);
    const Sample direct = subsample(w, sample_weights(w, spec, inputs), spec, 0);
    CHECK(single.front().members == direct.members);
    CHECK(single.front().members == five.front().members);
}

TEST_CASE("sample file round trip") {
    Sample s;
    s.spec = {SampleAlgorithm::C, SampleUnit::CPR, Window::All, 50, 1234};
    s.repetition = 3;
    s.members = {2, 9, 40};
    s.weights = {1.5, 0.1, 1e-7 / 3.0};
    s.window_states = 77;
    std::stringstream io;
    write_sample(io, s);
    const Sample back = read_sample(io);
    CHECK(back.spec == s.spec);
    CHECK(back.repetition == 3);
    CHECK(back.members == s.members);
    CHECK(back.weights == s.weights);
    CHECK(back.window_states == 77);

    std::istringstream bad("# sample X_Y repetition=0 target=1 seed=1 window_states=1\n");
    CHECK_THROWS_AS(read_sample(bad), ParseError);
    std::istringstream unordered("# sample C_Random repetition=0 target=1 seed=1 window_states=1\nS 5 1\nS 2 1\n");
    CHECK_THROWS_AS(read_sample(unordered), ParseError);
}
