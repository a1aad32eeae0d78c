#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "websample/generators.hpp"
#include "websample/subsampling.hpp"
#include "websample/walkers.hpp"

namespace websample {

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";
    /// Load the graph from here instead of generating it.
    std::optional<std::filesystem::path> graph_file;
    GeneratorSpec generator;

    WalkConfig ab;  // algorithm AB
    WalkConfig c;   // algorithm C
    /// Regular degree of Walk B; 0 picks 10x the largest frozen degree.
    std::uint64_t b_max = 0;

    std::size_t target_size = kDefaultTargetSize;
    std::size_t repetitions = kDefaultRepetitions;
    std::vector<std::string> sample_labels;  // empty means all eleven
    std::size_t top_hosts = 10;

    ExperimentConfig();

    void validate() const;  // throws ConfigError
    std::vector<SampleSpec> sample_specs() const;
    /// Canonical `key = value` dump of every key.
    std::string to_text() const;
    /// Same without `out`; this is what the config hash covers.
    std::string canonical_text() const;
    std::uint64_t hash() const;
};

/// Flat `key = value` document; `#` starts a comment. Unknown keys and
/// malformed values raise ConfigError naming the line.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

} // namespace websample
