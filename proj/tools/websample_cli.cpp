// Command-line front end: generate -> walk -> sample -> analyze -> compare.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "websample/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool verify_mode = false;
    std::vector<std::string> manifests;
};

websample::ExperimentConfig build_config(const Options& o) {
    websample::ExperimentConfig config;
    if (!o.config_path.empty()) config = websample::load_config(o.config_path);
    if (o.seed) config.seed = *o.seed;
    if (o.out) config.out_dir = *o.out;
    if (o.verify_mode) config.c.jump_mode = websample::JumpMode::GlobalUniform;
    return config;
}

int run_stage(const Options& o, websample::Stage last) {
    const auto config = build_config(o);
    const auto manifest = websample::run_experiment(config, last);
    for (const auto& [stage, seconds] : manifest.wall_seconds) {
        std::clog << "wall." << stage << " = " << seconds << " s\n";
    }
    std::cout << "wrote " << manifest.files.size() << " files to " << config.out_dir.string() << '\n';
    return 0;
}

int run_compare(const Options& o) {
    std::vector<websample::RunManifest> manifests;
    for (const auto& path : o.manifests) manifests.push_back(websample::read_manifest(path));
    if (o.out) {
        std::filesystem::create_directories(*o.out);
        std::ofstream out(std::filesystem::path(*o.out) / "comparison.csv");
        websample::emit_comparison(out, manifests);
    } else {
        websample::emit_comparison(std::cout, manifests);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-walk web page sampling workbench"};
    app.require_subcommand(1);
    Options o;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "flat key = value config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "global seed (overrides the config)");
        sub->add_option("--out", o.out, "output directory (overrides the config)");
        sub->add_flag("--verify-mode", o.verify_mode, "Walk C jumps uniformly over all pages");
    };

    const std::vector<std::pair<std::string, websample::Stage>> stages = {
        {"generate", websample::Stage::Generate}, {"walk", websample::Stage::Walk},
        {"sample", websample::Stage::Sample},     {"analyze", websample::Stage::Analyze},
        {"all", websample::Stage::Compare},
    };
    std::vector<std::pair<CLI::App*, websample::Stage>> stage_commands;
    for (const auto& [name, stage] : stages) {
        auto* sub = app.add_subcommand(name, name == "all" ? "run every stage and write comparison.csv"
                                                           : "run the pipeline through the " + name + " stage");
        add_common(sub);
        stage_commands.emplace_back(sub, stage);
    }
    auto* compare = app.add_subcommand("compare", "stack the comparison tables of finished runs");
    compare->add_option("manifests", o.manifests, "manifest.txt files of finished runs")->required()->check(CLI::ExistingFile);
    compare->add_option("--out", o.out, "directory for comparison.csv (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (compare->parsed()) return run_compare(o);
        for (const auto& [sub, stage] : stage_commands) {
            if (sub->parsed()) return run_stage(o, stage);
        }
    } catch (const websample::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const websample::StageError& e) {
        std::cerr << e.what() << '\n';
        return kExitStage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitStage;
    }
    return 0;
}
