#include "websample/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "websample/analysis.hpp"
#include "websample/graph_io.hpp"
#include "websample/seeds.hpp"

namespace websample {

namespace fs = std::filesystem;

namespace {

std::string hex(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

class Pipeline {
public:
    Pipeline(const ExperimentConfig& config, RunManifest& manifest) : config_(config), manifest_(manifest) {}

    template <typename Body>
    void stage(Stage s, Body&& body) {
        const auto start = std::chrono::steady_clock::now();
        try {
            body();
        } catch (const ConfigError& e) {
            mark_partial(s, e.what());
            throw;
        } catch (const std::exception& e) {
            mark_partial(s, e.what());
            throw StageError(s, e.what());
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        manifest_.wall_seconds[std::string(to_string(s))] = elapsed.count();
        std::clog << "stage " << to_string(s) << " done in " << fixed(elapsed.count(), 2) << " s\n";
    }

    /// Opens `relative` under the output directory and lists it in the manifest.
    std::ofstream open(const std::string& relative) {
        const fs::path path = config_.out_dir / relative;
        fs::create_directories(path.parent_path());
        std::ofstream out(path);
        if (!out) throw DataError("cannot write " + path.string());
        manifest_.files.push_back(relative);
        return out;
    }

private:
    void mark_partial(Stage s, const std::string& message) {
        std::error_code ec;
        fs::create_directories(config_.out_dir, ec);
        std::ofstream marker(config_.out_dir / ".partial");
        marker << "stage = " << to_string(s) << "\nerror = " << message << '\n';
    }

    const ExperimentConfig& config_;
    RunManifest& manifest_;
};

std::uint64_t auto_b_max(const FrozenAdjacency& frozen) {
    std::uint64_t largest = 0;
    for (NodeId v = 0; v < frozen.node_count(); ++v) {
        if (const auto* r = frozen.find(v)) largest = std::max<std::uint64_t>(largest, r->size());
    }
    return std::max<std::uint64_t>({10 * largest, largest + 1, 1});
}

void add_tallies(RunManifest& m, const std::string& prefix, const MergedWalk& w) {
    m.tallies.emplace_back(prefix + ".total_steps", std::to_string(w.total_steps()));
    m.tallies.emplace_back(prefix + ".visited_nodes", std::to_string(w.visited_nodes()));
    for (std::size_t k = 1; k < kStepKindCount; ++k) {
        const auto kind = static_cast<StepKind>(k);
        m.tallies.emplace_back(prefix + ".fraction." + std::string(to_string(kind)), fixed(w.fraction(kind), 6));
    }
    m.tallies.emplace_back(prefix + ".stuck_walkers", std::to_string(w.stuck.size()));
}

ComparisonRow make_row(const std::string& run, const SampleTypeReport& r) {
    ComparisonRow row;
    row.run = run;
    row.sample = r.label;
    row.unique_hosts = r.unique_hosts;
    row.top_host_share = r.top_host_share;
    row.avg_outdegree = r.avg_outdegree;
    row.max_outdegree = r.max_outdegree;
    row.exponent = r.exponent;
    for (const auto& b : r.tld.buckets) row.tld_percentages.push_back(b.percentage);
    return row;
}

} // namespace

std::string_view to_string(Stage stage) {
    switch (stage) {
    case Stage::Generate: return "generate";
    case Stage::Walk: return "walk";
    case Stage::Sample: return "sample";
    case Stage::Analyze: return "analyze";
    case Stage::Compare: return "compare";
    }
    return "unknown";
}

StageError::StageError(Stage stage, const std::string& message)
    : std::runtime_error("stage " + std::string(to_string(stage)) + " failed: " + message), stage_(stage) {}

RunManifest run_experiment(const ExperimentConfig& config, Stage last) {
    config.validate();
    RunManifest manifest;
    manifest.config_hash = hex(config.hash());
    fs::create_directories(config.out_dir);
    fs::remove(config.out_dir / ".partial");
    Pipeline p(config, manifest);

    std::optional<WebGraph> graph;
    p.stage(Stage::Generate, [&] {
        if (config.graph_file) {
            graph = load_graph(*config.graph_file);
        } else {
            GeneratorSpec spec = config.generator;
            spec.seed = derive_seed(config.seed, "generate");
            graph = generate_power_law_web(spec);
        }
        manifest.graph_hash = hex(graph_hash(*graph));
        auto cfg = p.open("config.txt");
        cfg << config.canonical_text();
        auto out = p.open("graph.txt");
        save_graph(*graph, out);
    });

    const auto finish = [&] {
        manifest.files.push_back("manifest.txt");
        std::ofstream out(config.out_dir / "manifest.txt");
        write_manifest(out, manifest);
        return manifest;
    };
    if (last == Stage::Generate) return finish();

    const Environment env(*graph, derive_seed(config.seed, "environment"));
    FrozenAdjacency frozen(graph->node_count());
    MergedWalk walk_a, walk_b, walk_c;
    p.stage(Stage::Walk, [&] {
        WalkConfig ab = config.ab;
        ab.algorithm = WalkAlgorithm::AB;
        ab.seed = derive_seed(config.seed, "walk.ab");
        walk_a = detect_stuck_and_prune(run_walks(env, ab, frozen), *graph, ab);
        const std::uint64_t b_max = config.b_max != 0 ? config.b_max : auto_b_max(frozen);
        walk_b = inject_selfloops(walk_a, frozen, Regularization::B, b_max, derive_seed(config.seed, "walk.b"));

        WalkConfig c = config.c;
        c.algorithm = WalkAlgorithm::C;
        c.seed = derive_seed(config.seed, "walk.c");
        walk_c = detect_stuck_and_prune(run_walks(env, c), *graph, c);

        auto trace_ab = p.open("walk/ab.trace");
        write_trace_dump(trace_ab, walk_a);
        auto summary_ab = p.open("walk/ab_summary.txt");
        write_walk_summary(summary_ab, walk_a, *graph, "AB");
        auto snapshot = p.open("walk/frozen_adjacency.txt");
        write_canonical_snapshot(snapshot, env, walk_a);
        auto summary_b = p.open("walk/b_summary.txt");
        summary_b << "max = " << b_max << '\n';
        write_walk_summary(summary_b, walk_b, *graph, "B");
        auto trace_c = p.open("walk/c.trace");
        write_trace_dump(trace_c, walk_c);
        auto summary_c = p.open("walk/c_summary.txt");
        write_walk_summary(summary_c, walk_c, *graph, "C");

        add_tallies(manifest, "ab", walk_a);
        manifest.tallies.emplace_back("b.max", std::to_string(b_max));
        add_tallies(manifest, "c", walk_c);
    });
    if (last == Stage::Walk) return finish();

    const auto specs = config.sample_specs();
    std::vector<std::vector<Sample>> samples;
    p.stage(Stage::Sample, [&] {
        for (const auto& spec : specs) {
            SampleInputs inputs{&*graph, nullptr, &frozen, config.c.d};
            inputs.walk = spec.algorithm == SampleAlgorithm::A ? &walk_a
                          : spec.algorithm == SampleAlgorithm::B ? &walk_b
                                                                 : &walk_c;
            samples.push_back(make_samples(inputs, spec, config.repetitions));
            for (const Sample& s : samples.back()) {
                auto out = p.open("samples/" + spec.label() + "_" + std::to_string(s.repetition) + ".txt");
                write_sample(out, s);
            }
        }
    });
    if (last == Stage::Sample) return finish();

    std::vector<SampleTypeReport> reports;
    p.stage(Stage::Analyze, [&] {
        const ScoreVector c_scores = subgraph_pagerank(walk_c, *graph, config.c.d);
        std::vector<NodeId> c_states;
        for (NodeId v = 0; v < walk_c.visit_count.size(); ++v) {
            if (walk_c.visit_count[v] > 0) c_states.push_back(v);
        }
        auto whole = p.open("reports/subgraph_pagerank_range.csv");
        write_csv(whole, pagerank_range_report(c_scores, c_states));

        for (std::size_t i = 0; i < specs.size(); ++i) {
            const bool is_c = specs[i].algorithm == SampleAlgorithm::C;
            const SampleTypeReport r = analyze_samples(samples[i], *graph, is_c ? &c_scores : nullptr);
            const std::string base = "reports/" + r.label;
            auto json = p.open(base + ".json");
            write_json(json, r);
            auto hosts = p.open(base + "_hosts.csv");
            write_csv(hosts, host_report(samples[i].front().members, *graph, config.top_hosts));
            auto tld = p.open(base + "_tld.csv");
            write_csv(tld, r.tld);
            auto content = p.open(base + "_content_length.csv");
            write_csv(content, r.content_length);
            auto outdeg = p.open(base + "_outdegree.csv");
            write_csv(outdeg, r.outdegree);
            if (is_c) {
                auto prr = p.open(base + "_pagerank_range.csv");
                write_csv(prr, r.pagerank_range);
            }
            reports.push_back(r);
        }
    });
    if (last == Stage::Analyze) return finish();

    p.stage(Stage::Compare, [&] {
        for (const auto& r : reports) manifest.rows.push_back(make_row(manifest.config_hash, r));
        auto out = p.open("comparison.csv");
        write_comparison_rows(out, manifest.rows);
    });
    return finish();
}

void write_manifest(std::ostream& out, const RunManifest& manifest) {
    out << "config_hash = " << manifest.config_hash << '\n';
    out << "graph_hash = " << manifest.graph_hash << '\n';
    for (const auto& f : manifest.files) out << "file = " << f << '\n';
    for (const auto& [key, value] : manifest.tallies) out << "tally." << key << " = " << value << '\n';
}

RunManifest read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest " + path.string());
    RunManifest m;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 3);
        if (key == "config_hash") m.config_hash = value;
        else if (key == "graph_hash") m.graph_hash = value;
        else if (key == "file") m.files.push_back(value);
        else if (key.rfind("tally.", 0) == 0) m.tallies.emplace_back(key.substr(6), value);
        else throw ParseError(line_no, "unknown manifest key '" + key + "'");
    }
    if (std::find(m.files.begin(), m.files.end(), "comparison.csv") != m.files.end()) {
        std::ifstream table(path.parent_path() / "comparison.csv");
        if (!table) throw ConfigError("manifest lists comparison.csv but it is missing");
        m.rows = read_comparison_rows(table);
    }
    return m;
}

void write_comparison_rows(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "run,sample,unique_hosts,top_host_share,avg_outdegree,max_outdegree,exponent";
    for (auto tld : kTldPool) out << ",." << tld;
    out << ",other\n";
    for (const auto& r : rows) {
        out << r.run << ',' << r.sample << ',' << fixed(r.unique_hosts, 2) << ',' << fixed(r.top_host_share, 2) << ','
            << fixed(r.avg_outdegree, 2) << ',' << fixed(r.max_outdegree, 2) << ','
            << (r.exponent ? fixed(*r.exponent, 3) : std::string("NA"));
        for (double pct : r.tld_percentages) out << ',' << fixed(pct, 2);
        out << '\n';
    }
}

std::vector<ComparisonRow> read_comparison_rows(std::istream& in) {
    std::vector<ComparisonRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        if (++line_no == 1 || line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7 + kTldPool.size() + 1) throw ParseError(line_no, "wrong number of columns");
        ComparisonRow r;
        try {
            r.run = cells[0];
            r.sample = cells[1];
            r.unique_hosts = std::stod(cells[2]);
            r.top_host_share = std::stod(cells[3]);
            r.avg_outdegree = std::stod(cells[4]);
            r.max_outdegree = std::stod(cells[5]);
            if (cells[6] != "NA") r.exponent = std::stod(cells[6]);
            for (std::size_t i = 7; i < cells.size(); ++i) r.tld_percentages.push_back(std::stod(cells[i]));
        } catch (const std::exception&) {
            throw ParseError(line_no, "malformed number");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit_comparison(std::ostream& out, const std::vector<RunManifest>& manifests) {
    if (manifests.size() < 2) throw ConfigError("comparison needs at least two manifests");
    std::vector<ComparisonRow> rows;
    for (const auto& m : manifests) {
        if (m.graph_hash != manifests.front().graph_hash) {
            throw ConfigError("refusing to compare runs over different graphs (" + manifests.front().graph_hash + " vs " +
                              m.graph_hash + ")");
        }
        rows.insert(rows.end(), m.rows.begin(), m.rows.end());
    }
    write_comparison_rows(out, rows);
}

} // namespace websample
