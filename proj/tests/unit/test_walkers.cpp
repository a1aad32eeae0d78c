#include <doctest.h>

#include <omp.h>

#include <numeric>
#include <sstream>

#include "../support/oracles.hpp"
#include "websample/errors.hpp"
#include "websample/frozen_adjacency.hpp"
#include "websample/generators.hpp"
#include "websample/seeds.hpp"
#include "websample/seen_catalog.hpp"
#include "websample/walkers.hpp"

using namespace websample;

namespace {

// 0 -> 1 and 2 -> 0, so node 0 has slots {1 (out), 2 (in), self}.
WebGraph three_slot_graph() {
    std::vector<NodeMeta> nodes;
    for (NodeId v = 0; v < 3; ++v) nodes.push_back(oracle::own_host_page(v));
    return WebGraph(std::move(nodes), {{1}, {}, {0}});
}

WalkConfig config(WalkAlgorithm algorithm, std::size_t walkers, std::uint64_t budget, std::uint64_t seed = 1) {
    WalkConfig c;
    c.algorithm = algorithm;
    c.walkers = walkers;
    c.step_budget = budget;
    c.seed = seed;
    return c;
}

const WebGraph& hazard_graph() {
    static const WebGraph g = [] {
        GeneratorSpec spec;
        spec.n = 3000;
        spec.seed = 21;
        spec.hazards = {0.03, 0.02, 0.01, 0.03, 0.02};
        return generate_power_law_web(spec);
    }();
    return g;
}

NodeId fetchable_start(const Environment& env) {
    NodeId v = 0;
    while (!env.fetchable(v) || env.fetch(v).outlinks.empty()) ++v;
    return v;
}

} // namespace

TEST_CASE("step kind names round trip") {
    for (auto k : {StepKind::Start, StepKind::Outlink, StepKind::Inlink, StepKind::SelfloopRun, StepKind::Jump,
                   StepKind::SiblingFallback}) {
        CHECK(parse_step_kind(to_string(k)) == k);
    }
    CHECK(to_string(StepKind::SelfloopRun) == "selfloop");
    CHECK_FALSE(parse_step_kind("teleport"));
}

TEST_CASE("step_ab: uniform over three slots") {
    const WebGraph g = three_slot_graph();
    const Environment env(g, 1);
    FrozenAdjacency frozen(3);
    frozen.freeze(env, 0, 0);
    std::mt19937_64 rng(5);
    std::vector<double> counts(3, 0.0);
    constexpr int kDraws = 30'000;
    for (int i = 0; i < kDraws; ++i) {
        const Step s = step_ab(env, frozen, 0, rng);
        if (s.kind == StepKind::Outlink) {
            CHECK(s.node == 1);
            counts[0] += 1;
        } else if (s.kind == StepKind::Inlink) {
            CHECK(s.node == 2);
            counts[1] += 1;
        } else {
            CHECK(s.kind == StepKind::SelfloopRun);
            CHECK(s.node == 0);
            CHECK(s.count == 1);
            counts[2] += 1;
        }
    }
    const auto [stat, df] = oracle::pearson(counts, std::vector<double>(3, kDraws / 3.0));
    CHECK(stat < oracle::chi_square_critical(df, 0.01));
}

TEST_CASE("step_ab: isolated node always selfloops") {
    const WebGraph g({oracle::own_host_page(0)}, {{}});
    const Environment env(g, 1);
    FrozenAdjacency frozen(1);
    frozen.freeze(env, 0, 0);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) CHECK(step_ab(env, frozen, 0, rng) == Step{0, StepKind::SelfloopRun, 1});
}

TEST_CASE("step_ab: unfetchable pick falls back to a sibling") {
    // 0 links to 1 (fails) and 2 (fine).
    std::vector<NodeMeta> nodes{oracle::own_host_page(0), oracle::own_host_page(1), oracle::own_host_page(2)};
    nodes[1].behavior = Behavior::fetch_fail();
    const WebGraph g(std::move(nodes), {{1, 2}, {}, {}});
    const Environment env(g, 1);
    FrozenAdjacency frozen(3);
    frozen.freeze(env, 0, 0);
    std::mt19937_64 rng(3);
    int fallback = 0;
    for (int i = 0; i < 3000; ++i) {
        const Step s = step_ab(env, frozen, 0, rng);
        CHECK(s.node != 1);
        if (s.kind == StepKind::SiblingFallback) {
            CHECK(s.node == 2);
            ++fallback;
        }
    }
    CHECK(fallback > 800);
    CHECK(fallback < 1200);
}

TEST_CASE("step_c: jumps follow the seen hierarchy") {
    const WebGraph g({oracle::page(0, "h1.d1.org", "d1.org", Behavior::dead_end()), oracle::page(1, "h2.d2.org", "d2.org"),
                      oracle::page(2, "h2.d2.org", "d2.org")},
                     {{}, {}, {}});
    const Environment env(g, 1);
    SeenCatalog catalog(g);
    for (NodeId v : {0, 1, 2}) catalog.add_seen(v);
    std::mt19937_64 rng(8);
    std::vector<double> counts(3, 0.0);
    constexpr int kDraws = 20'000;
    for (int i = 0; i < kDraws; ++i) {
        // Node 0 is a dead end, so every step jumps.
        const Step s = step_c(env, catalog, 0, 1.0 / 7.0, rng);
        CHECK(s.kind == StepKind::Jump);
        counts[s.node] += 1;
    }
    const auto [stat, df] = oracle::pearson(counts, {kDraws * 0.5, kDraws * 0.25, kDraws * 0.25});
    CHECK(stat < oracle::chi_square_critical(df, 0.01));
}

TEST_CASE("step_c: d=0 follows the single outlink") {
    const WebGraph g({oracle::own_host_page(0), oracle::own_host_page(1)}, {{1}, {0}});
    const Environment env(g, 1);
    SeenCatalog catalog(g);
    catalog.record_visit(0);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) CHECK(step_c(env, catalog, 0, 0.0, rng) == Step{1, StepKind::Outlink, 1});
}

TEST_CASE("selfloop run lengths") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) CHECK(draw_selfloop_run(40, 40, rng) == 0);
    CHECK_THROWS_AS(draw_selfloop_run(41, 40, rng), ConfigError);
    double sum = 0.0;
    constexpr int kDraws = 100'000;
    for (int i = 0; i < kDraws; ++i) sum += static_cast<double>(draw_selfloop_run(500, 1000, rng));
    CHECK(std::abs(sum / kDraws - 1.0) <= 0.02);
}

TEST_CASE("inject_selfloops: A is the identity, B pads to max") {
    const WebGraph g = generate_trap_graph(8);
    const Environment env(g, 1);
    FrozenAdjacency frozen(g.node_count());
    const MergedWalk walk = run_walks(env, config(WalkAlgorithm::AB, 3, 500), frozen);
    const MergedWalk a = inject_selfloops(walk, frozen, Regularization::A, 0, 1);
    CHECK(a.traces == walk.traces);

    const MergedWalk b = inject_selfloops(walk, frozen, Regularization::B, 100, 1);
    CHECK(b.total_steps() > walk.total_steps());
    // Removing selfloop runs leaves the same non-selfloop moves.
    for (std::size_t w = 0; w < walk.traces.size(); ++w) {
        std::vector<Step> x, y;
        for (const auto& s : walk.traces[w]) {
            if (s.kind != StepKind::SelfloopRun) x.push_back(s);
        }
        for (const auto& s : b.traces[w]) {
            if (s.kind != StepKind::SelfloopRun) y.push_back(s);
        }
        CHECK(x == y);
    }
    CHECK(inject_selfloops(walk, frozen, Regularization::B, 100, 1) == b);
    CHECK_THROWS_AS(inject_selfloops(walk, frozen, Regularization::B, 3, 1), ConfigError);
}

TEST_CASE("run_walks: zero budget") {
    const WebGraph g = generate_trap_graph(8);
    const Environment env(g, 1);
    for (auto algorithm : {WalkAlgorithm::AB, WalkAlgorithm::C}) {
        WalkConfig c = config(algorithm, 4, 0);
        c.start_node = 5;
        const MergedWalk m = run_walks(env, c);
        CHECK(m.traces.size() == 4);
        for (const auto& t : m.traces) CHECK(t == Trace{Step{5, StepKind::Start, 1}});
        CHECK(m.visit_count[5] == 4);
        CHECK(m.transitions() == 0);
    }
}

TEST_CASE("run_walks: single dead-end page") {
    const WebGraph g({oracle::page(0, "www.x.org", "x.org", Behavior::dead_end())}, {{}});
    const Environment env(g, 1);
    const MergedWalk m = run_walks(env, config(WalkAlgorithm::C, 2, 100));
    CHECK(m.fraction(StepKind::Jump) == 1.0);
    CHECK(m.visit_count[0] == 202);
}

TEST_CASE("run_walks: bad start nodes") {
    std::vector<NodeMeta> nodes{oracle::own_host_page(0), oracle::own_host_page(1)};
    nodes[1].behavior = Behavior::timeout();
    const WebGraph g(std::move(nodes), {{1}, {0}});
    const Environment env(g, 1);
    WalkConfig c = config(WalkAlgorithm::AB, 1, 10);
    c.start_node = 1;
    CHECK_THROWS_AS(run_walks(env, c), ConfigError);
    c.start_node = 7;
    CHECK_THROWS_AS(run_walks(env, c), ConfigError);
    c.start_node = 0;
    c.d = 1.0;
    c.algorithm = WalkAlgorithm::C;
    CHECK_THROWS_AS(run_walks(env, c), ConfigError);
}

TEST_CASE("run_walks: tallies partition the transitions") {
    const Environment env(hazard_graph(), 2);
    for (auto algorithm : {WalkAlgorithm::AB, WalkAlgorithm::C}) {
        WalkConfig c = config(algorithm, 6, 3000, 4);
        c.start_node = fetchable_start(env);
        const MergedWalk m = run_walks(env, c);
        const auto sum = std::accumulate(m.tallies.begin(), m.tallies.end(), std::uint64_t{0});
        CHECK(sum == m.total_steps());
        CHECK(m.tallies[static_cast<std::size_t>(StepKind::Start)] == 6);
        CHECK(m.total_steps() == m.transitions() + 6);
        const auto visits = std::accumulate(m.visit_count.begin(), m.visit_count.end(), std::uint64_t{0});
        CHECK(visits == m.total_steps());
        for (const auto& t : m.traces) CHECK(expanded_length(t) == 3001);
        if (algorithm == WalkAlgorithm::AB) {
            CHECK(m.tallies[static_cast<std::size_t>(StepKind::Jump)] == 0);
        } else {
            CHECK(m.tallies[static_cast<std::size_t>(StepKind::Inlink)] == 0);
            CHECK(m.tallies[static_cast<std::size_t>(StepKind::SiblingFallback)] == 0);
            CHECK(m.seen_nodes >= m.visited_nodes());
        }
        for (const auto& t : m.traces) {
            for (const auto& s : t) CHECK(env.fetchable(s.node));
        }
    }
}

TEST_CASE("run_walks: parallel equals serial for any thread count") {
    const Environment env(hazard_graph(), 3);
    for (auto algorithm : {WalkAlgorithm::AB, WalkAlgorithm::C}) {
        WalkConfig c = config(algorithm, 7, 2000, 9);
        c.start_node = fetchable_start(env);
        FrozenAdjacency f_serial(env.graph().node_count());
        const MergedWalk serial = run_walks_serial(env, c, f_serial);
        for (int threads : {1, 3, 8}) {
            omp_set_num_threads(threads);
            FrozenAdjacency f(env.graph().node_count());
            CHECK(run_walks(env, c, f) == serial);
        }
    }
    omp_set_num_threads(1);
}

TEST_CASE("host run tracker") {
    HostRunTracker alternating(2, 1);
    for (int i = 0; i < 1000; ++i) CHECK_FALSE(alternating.observe(static_cast<std::uint32_t>(i % 2)));
    CHECK(alternating.overload_events(0) == 0);

    HostRunTracker trap(50, 3);
    for (int i = 1; i <= 150; ++i) {
        const bool stuck = trap.observe(7);
        CHECK(stuck == (i == 150));
    }
    CHECK(trap.stuck());
    CHECK(trap.overload_events(7) == 3);
    CHECK_FALSE(trap.observe(7));  // reported once

    HostRunTracker broken(50, 3);
    for (int block = 0; block < 3; ++block) {
        for (int i = 0; i < 49; ++i) broken.observe(1);
        broken.observe(2);
    }
    CHECK(broken.overload_events(1) == 0);
}

TEST_CASE("detect_stuck on a trap trace") {
    const WebGraph g = generate_trap_graph(8);
    Trace t{{0, StepKind::Start, 1}};
    for (int i = 1; i < 200; ++i) t.push_back({static_cast<NodeId>(i % 4), StepKind::Outlink, 1});
    t.insert(t.begin() + 10, Step{1, StepKind::SelfloopRun, 5});
    const MergedWalk m = MergedWalk::from_traces(8, {t, Trace{{4, StepKind::Start, 1}}});
    WalkConfig c;
    c.consecutive_host_limit = 50;
    c.overload_limit = 3;
    const MergedWalk d = detect_stuck(m, g, c);
    REQUIRE(d.stuck.size() == 1);
    CHECK(d.stuck[0].walker == 0);
    CHECK(d.stuck[0].at_step == 155);  // 150 fetches plus the 5-step run
    CHECK(d.stuck[0].host == g.host_id(0));
    CHECK(expanded_length(d.traces[0]) == 155);
    CHECK(d.is_stuck(0));
    CHECK_FALSE(d.is_stuck(1));

    const MergedWalk p = detect_stuck_and_prune(m, g, c);
    CHECK(p.traces[0].empty());
    CHECK(p.total_steps() == 1);
    CHECK(p.stuck == d.stuck);
}

TEST_CASE("trace dump round trip") {
    const Environment env(hazard_graph(), 5);
    WalkConfig c = config(WalkAlgorithm::C, 3, 300, 2);
    c.start_node = fetchable_start(env);
    MergedWalk m = run_walks(env, c);
    m.stuck.push_back({1, 17, 4});
    std::stringstream io;
    write_trace_dump(io, m);
    const MergedWalk back = read_trace_dump(io);
    CHECK(back.traces == m.traces);
    CHECK(back.visit_count == m.visit_count);
    CHECK(back.tallies == m.tallies);
    CHECK(back.stuck == m.stuck);

    std::istringstream bad("# walkers=1 nodes=3\nW 0 0 9 start\n");
    CHECK_THROWS_AS(read_trace_dump(bad), ParseError);
    std::istringstream bad_kind("# walkers=1 nodes=3\nW 0 0 1 hop\n");
    CHECK_THROWS_AS(read_trace_dump(bad_kind), ParseError);
}

TEST_CASE("trace dump format") {
    const MergedWalk m = MergedWalk::from_traces(
        3, {Trace{{0, StepKind::Start, 1}, {0, StepKind::SelfloopRun, 4}, {2, StepKind::Inlink, 1}}});
    std::ostringstream out;
    write_trace_dump(out, m);
    CHECK(out.str() == "# walkers=1 nodes=3\nW 0 0 0 start\nW 0 1 0 selfloop:4\nW 0 2 2 inlink\n");
}

TEST_CASE("walk summary") {
    const WebGraph g = generate_trap_graph(8);
    const MergedWalk m = MergedWalk::from_traces(
        8, {Trace{{0, StepKind::Start, 1}, {1, StepKind::Outlink, 1}, {1, StepKind::SelfloopRun, 2}}});
    std::ostringstream out;
    write_walk_summary(out, m, g, "A");
    const std::string s = out.str();
    CHECK(s.find("algorithm = A\n") != std::string::npos);
    CHECK(s.find("total_steps = 4\n") != std::string::npos);
    CHECK(s.find("transitions = 3\n") != std::string::npos);
    CHECK(s.find("steps.selfloop = 2\n") != std::string::npos);
}

TEST_CASE("canonical snapshot does not depend on thread count") {
    const Environment env(hazard_graph(), 6);
    WalkConfig c = config(WalkAlgorithm::AB, 5, 800, 3);
    c.start_node = fetchable_start(env);
    std::string first;
    for (int threads : {1, 4}) {
        omp_set_num_threads(threads);
        FrozenAdjacency f(env.graph().node_count());
        const MergedWalk m = run_walks(env, c, f);
        std::ostringstream out;
        write_canonical_snapshot(out, env, m);
        if (first.empty()) {
            first = out.str();
            CHECK(first.find(" step=0\n") != std::string::npos);
        } else {
            CHECK(out.str() == first);
        }
    }
    omp_set_num_threads(1);
}
