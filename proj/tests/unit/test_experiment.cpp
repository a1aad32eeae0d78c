#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "websample/config.hpp"
#include "websample/errors.hpp"
#include "websample/experiment.hpp"

using namespace websample;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("websample_test_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

ExperimentConfig small_config(const fs::path& out) {
    std::istringstream text(
        "seed = 11\n"
        "generator.n = 1500\n"
        "walk.ab.walkers = 4\n"
        "walk.ab.step_budget = 800\n"
        "walk.c.walkers = 4\n"
        "walk.c.step_budget = 800\n"
        "sample.target_size = 60\n"
        "sample.repetitions = 2\n"
        "sample.types = A_StatesOnLastHalf, C_Random\n");
    ExperimentConfig config = parse_config(text);
    config.out_dir = out;
    return config;
}

int run_cli(const std::string& args) {
    const int status = std::system((std::string(WEBSAMPLE_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("config: keys and round trip") {
    std::istringstream text(
        "# comment\n"
        "seed = 5   # trailing\n"
        "generator.hazard.dead_end = 0.25\n"
        "walk.c.jump_mode = uniform\n"
        "walk.ab.stop_stuck = false\n"
        "walk.b.max = 1000\n");
    const ExperimentConfig c = parse_config(text);
    CHECK(c.seed == 5);
    CHECK(c.generator.hazards.dead_end == 0.25);
    CHECK(c.c.jump_mode == JumpMode::GlobalUniform);
    CHECK_FALSE(c.ab.stop_stuck);
    CHECK(c.b_max == 1000);
    CHECK(c.sample_specs().size() == 11);

    std::istringstream again(c.to_text());
    CHECK(parse_config(again).to_text() == c.to_text());
}

TEST_CASE("config: errors name the line") {
    const auto message = [](const std::string& text) {
        std::istringstream in(text);
        try {
            parse_config(in);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("seed = 1\nbogus.key = 3\n").find("line 2") != std::string::npos);
    CHECK(message("seed = 1\n\nnot a pair\n").find("line 3") != std::string::npos);
    CHECK(message("walk.c.jump_mode = sideways\n").find("line 1") != std::string::npos);
    CHECK(message("seed = -4\n").find("line 1") != std::string::npos);

    std::istringstream unknown_type("sample.types = A_Random\n");
    CHECK_THROWS_AS(parse_config(unknown_type).validate(), ConfigError);
}

TEST_CASE("config: the hash ignores the output directory") {
    ExperimentConfig a;
    ExperimentConfig b;
    b.out_dir = "elsewhere";
    CHECK(a.hash() == b.hash());
    b.seed = a.seed + 1;
    CHECK(a.hash() != b.hash());
}

TEST_CASE("run_experiment: outputs, determinism and manifest") {
    const fs::path one = scratch("one");
    const fs::path two = scratch("two");
    const RunManifest m1 = run_experiment(small_config(one));
    const RunManifest m2 = run_experiment(small_config(two));
    CHECK(m1.files == m2.files);
    CHECK(m1.config_hash == m2.config_hash);
    CHECK_FALSE(fs::exists(one / ".partial"));
    for (const std::string& f : m1.files) {
        REQUIRE(fs::exists(one / f));
        CHECK(slurp(one / f) == slurp(two / f));
    }
    const auto has = [&](const std::string& f) { return std::find(m1.files.begin(), m1.files.end(), f) != m1.files.end(); };
    CHECK(has("samples/A_StatesOnLastHalf_1.txt"));
    CHECK(has("samples/C_Random_0.txt"));
    CHECK_FALSE(has("samples/A_StatesOnLastHalf_2.txt"));
    CHECK(has("comparison.csv"));
    CHECK(m1.rows.size() == 2);

    const RunManifest back = read_manifest(one / "manifest.txt");
    CHECK(back.files == m1.files);
    CHECK(back.graph_hash == m1.graph_hash);
    REQUIRE(back.rows.size() == m1.rows.size());
    CHECK(back.rows[0].sample == m1.rows[0].sample);

    std::ostringstream table;
    emit_comparison(table, {back, back});
    std::istringstream rows(table.str());
    CHECK(read_comparison_rows(rows).size() == 4);
    CHECK_THROWS_AS(emit_comparison(table, {back}), ConfigError);

    fs::remove_all(one);
    fs::remove_all(two);
}

TEST_CASE("run_experiment: stopping early and refusing foreign graphs") {
    const fs::path a = scratch("early");
    const RunManifest walk_only = run_experiment(small_config(a), Stage::Walk);
    CHECK(fs::exists(a / "walk/ab.trace"));
    CHECK_FALSE(fs::exists(a / "samples"));
    CHECK(walk_only.rows.empty());

    const fs::path b = scratch("seed12");
    ExperimentConfig other = small_config(b);
    other.seed = 12;
    const RunManifest m_other = run_experiment(other);
    const fs::path c = scratch("seed11");
    const RunManifest m_same = run_experiment(small_config(c));
    std::ostringstream sink;
    CHECK_THROWS_AS(emit_comparison(sink, {m_same, m_other}), ConfigError);
    for (const auto& p : {a, b, c}) fs::remove_all(p);
}

TEST_CASE("cli: exit codes") {
    const fs::path out = scratch("cli");
    CHECK(run_cli("all --config " WEBSAMPLE_CONFIGS "/smoke.conf --out " + out.string()) == 0);
    CHECK(fs::exists(out / "comparison.csv"));
    CHECK(run_cli("compare " + (out / "manifest.txt").string() + " " + (out / "manifest.txt").string()) == 0);

    const fs::path bad = scratch("bad.conf");
    std::ofstream(bad) << "no.such.key = 1\n";
    CHECK(run_cli("all --config " + bad.string() + " --out " + out.string()) == 2);
    CHECK(run_cli("walk --no-such-flag") == 2);
    fs::remove_all(out);
    fs::remove(bad);
}
