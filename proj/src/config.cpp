#include "websample/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "websample/seeds.hpp"

namespace websample {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& text) {
    T value{};
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc() || ptr != last) throw ConfigError("'" + text + "' is not a valid number");
    return value;
}

bool parse_bool(const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("'" + text + "' is not a boolean");
}

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

struct Field {
    std::string key;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field number_field(std::string key, T ExperimentConfig::*outer) {
    return {key, [outer](ExperimentConfig& c, const std::string& v) { c.*outer = parse_number<T>(v); },
            [outer](const ExperimentConfig& c) {
                if constexpr (std::is_floating_point_v<T>) return format_double(c.*outer);
                else return std::to_string(c.*outer);
            }};
}

template <typename S, typename T>
Field nested_field(std::string key, S ExperimentConfig::*outer, T S::*inner) {
    return {key, [outer, inner](ExperimentConfig& c, const std::string& v) { (c.*outer).*inner = parse_number<T>(v); },
            [outer, inner](const ExperimentConfig& c) {
                if constexpr (std::is_floating_point_v<T>) return format_double((c.*outer).*inner);
                else return std::to_string((c.*outer).*inner);
            }};
}

Field hazard_field(std::string key, double HazardRates::*rate) {
    return {key, [rate](ExperimentConfig& c, const std::string& v) { c.generator.hazards.*rate = parse_number<double>(v); },
            [rate](const ExperimentConfig& c) { return format_double(c.generator.hazards.*rate); }};
}

void add_walk_fields(std::vector<Field>& fields, const std::string& prefix, WalkConfig ExperimentConfig::*walk) {
    fields.push_back(nested_field(prefix + "walkers", walk, &WalkConfig::walkers));
    fields.push_back(nested_field(prefix + "step_budget", walk, &WalkConfig::step_budget));
    fields.push_back(nested_field(prefix + "start_node", walk, &WalkConfig::start_node));
    fields.push_back(nested_field(prefix + "consecutive_host_limit", walk, &WalkConfig::consecutive_host_limit));
    fields.push_back(nested_field(prefix + "overload_limit", walk, &WalkConfig::overload_limit));
    fields.push_back({prefix + "stop_stuck",
                      [walk](ExperimentConfig& c, const std::string& v) { (c.*walk).stop_stuck = parse_bool(v); },
                      [walk](const ExperimentConfig& c) { return std::string((c.*walk).stop_stuck ? "true" : "false"); }});
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(number_field("seed", &ExperimentConfig::seed));
        f.push_back({"out", [](ExperimentConfig& c, const std::string& v) { c.out_dir = v; },
                     [](const ExperimentConfig& c) { return c.out_dir.string(); }});
        f.push_back({"graph.file", [](ExperimentConfig& c, const std::string& v) {
                         if (v.empty()) c.graph_file.reset();
                         else c.graph_file = v;
                     },
                     [](const ExperimentConfig& c) { return c.graph_file ? c.graph_file->string() : std::string(); }});
        f.push_back(nested_field("generator.n", &ExperimentConfig::generator, &GeneratorSpec::n));
        f.push_back(nested_field("generator.exponent", &ExperimentConfig::generator, &GeneratorSpec::target_exponent));
        f.push_back(nested_field("generator.max_outdegree", &ExperimentConfig::generator, &GeneratorSpec::max_outdegree));
        f.push_back(nested_field("generator.pages_per_host", &ExperimentConfig::generator, &GeneratorSpec::mean_pages_per_host));
        f.push_back(nested_field("generator.hosts_per_domain", &ExperimentConfig::generator,
                                 &GeneratorSpec::mean_hosts_per_domain));
        f.push_back(nested_field("generator.intra_host_fraction", &ExperimentConfig::generator,
                                 &GeneratorSpec::intra_host_fraction));
        f.push_back(hazard_field("generator.hazard.dead_end", &HazardRates::dead_end));
        f.push_back(hazard_field("generator.hazard.fetch_fail", &HazardRates::fetch_fail));
        f.push_back(hazard_field("generator.hazard.timeout", &HazardRates::timeout));
        f.push_back(hazard_field("generator.hazard.redirect", &HazardRates::redirect));
        f.push_back(hazard_field("generator.hazard.session_id", &HazardRates::session_id));
        add_walk_fields(f, "walk.ab.", &ExperimentConfig::ab);
        f.push_back(number_field("walk.b.max", &ExperimentConfig::b_max));
        add_walk_fields(f, "walk.c.", &ExperimentConfig::c);
        f.push_back(nested_field("walk.c.d", &ExperimentConfig::c, &WalkConfig::d));
        f.push_back({"walk.c.jump_mode",
                     [](ExperimentConfig& c, const std::string& v) {
                         if (v == "hierarchy") c.c.jump_mode = JumpMode::SeenHierarchy;
                         else if (v == "uniform") c.c.jump_mode = JumpMode::GlobalUniform;
                         else throw ConfigError("jump_mode must be 'hierarchy' or 'uniform'");
                     },
                     [](const ExperimentConfig& c) {
                         return std::string(c.c.jump_mode == JumpMode::SeenHierarchy ? "hierarchy" : "uniform");
                     }});
        f.push_back(number_field("sample.target_size", &ExperimentConfig::target_size));
        f.push_back(number_field("sample.repetitions", &ExperimentConfig::repetitions));
        f.push_back({"sample.types",
                     [](ExperimentConfig& c, const std::string& v) {
                         c.sample_labels.clear();
                         std::istringstream in(v);
                         std::string label;
                         while (std::getline(in, label, ',')) {
                             if (!trim(label).empty()) c.sample_labels.push_back(trim(label));
                         }
                     },
                     [](const ExperimentConfig& c) {
                         std::string out;
                         for (const auto& l : c.sample_labels) out += (out.empty() ? "" : ",") + l;
                         return out;
                     }});
        f.push_back(number_field("analysis.top_hosts", &ExperimentConfig::top_hosts));
        return f;
    }();
    return table;
}

} // namespace

ExperimentConfig::ExperimentConfig() {
    ab.algorithm = WalkAlgorithm::AB;
    c.algorithm = WalkAlgorithm::C;
}

void ExperimentConfig::validate() const {
    if (!graph_file) {
        try {
            generator.validate();
        } catch (const ParameterError& e) {
            throw ConfigError(std::string("generator: ") + e.what());
        }
    }
    ab.validate();
    c.validate();
    if (repetitions < 1) throw ConfigError("sample.repetitions must be >= 1");
    std::vector<std::string> seen;
    for (const auto& label : sample_labels) {
        if (!parse_sample_label(label)) throw ConfigError("unknown sample type '" + label + "'");
        if (std::find(seen.begin(), seen.end(), label) != seen.end()) throw ConfigError("duplicate sample type '" + label + "'");
        seen.push_back(label);
    }
    if (graph_file && !std::filesystem::exists(*graph_file)) {
        throw ConfigError("graph file " + graph_file->string() + " does not exist");
    }
}

std::vector<SampleSpec> ExperimentConfig::sample_specs() const {
    std::vector<SampleSpec> all = standard_sample_specs(target_size, derive_seed(seed, "sample"));
    if (sample_labels.empty()) return all;
    std::vector<SampleSpec> picked;
    for (const auto& label : sample_labels) {
        auto spec = *parse_sample_label(label);
        spec.target_size = target_size;
        spec.seed = derive_seed(derive_seed(seed, "sample"), spec.label());
        picked.push_back(spec);
    }
    return picked;
}

std::string ExperimentConfig::to_text() const {
    std::string out;
    for (const auto& f : fields()) out += f.key + " = " + f.get(*this) + "\n";
    return out;
}

std::string ExperimentConfig::canonical_text() const {
    // The output directory is where results go, not what they are.
    std::string text;
    for (const auto& f : fields()) {
        if (f.key != "out") text += f.key + " = " + f.get(*this) + "\n";
    }
    return text;
}

std::uint64_t ExperimentConfig::hash() const {
    return fnv1a64(canonical_text());
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& table = fields();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
        if (it == table.end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        try {
            it->set(config, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": " + e.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in);
}

} // namespace websample
