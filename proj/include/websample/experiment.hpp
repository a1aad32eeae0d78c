#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "websample/config.hpp"

namespace websample {

enum class Stage : std::uint8_t { Generate, Walk, Sample, Analyze, Compare };

std::string_view to_string(Stage stage);

/// A pipeline stage threw; outputs written so far stay on disk next to a
/// `.partial` marker.
class StageError : public std::runtime_error {
public:
    StageError(Stage stage, const std::string& message);
    Stage stage() const { return stage_; }

private:
    Stage stage_;
};

/// One row of the comparison table.
struct ComparisonRow {
    std::string run;  // config hash of the producing run
    std::string sample;
    double unique_hosts = 0.0;
    double top_host_share = 0.0;
    double avg_outdegree = 0.0;
    double max_outdegree = 0.0;
    std::optional<double> exponent;
    std::vector<double> tld_percentages;  // kTldPool order, then "other"
};

struct RunManifest {
    std::string config_hash;
    std::string graph_hash;
    std::vector<std::string> files;  // relative to the output directory
    std::vector<std::pair<std::string, std::string>> tallies;
    std::vector<ComparisonRow> rows;
    /// Seconds per stage; reported on stderr, never written to disk.
    std::map<std::string, double> wall_seconds;
};

/// Runs the pipeline through `last` into `config.out_dir`: graph, one Walk AB
/// (A and B samples both derive from it), an independent Walk C, the sample
/// files, per-sample-type reports and comparison.csv. Equal configs give
/// byte-identical output trees.
RunManifest run_experiment(const ExperimentConfig& config, Stage last = Stage::Compare);

void write_manifest(std::ostream& out, const RunManifest& manifest);
/// Reads manifest.txt and the comparison table next to it.
RunManifest read_manifest(const std::filesystem::path& path);

/// Stacks the manifests' rows into one table. Refuses (ConfigError) fewer
/// than two manifests or manifests over different graphs.
void emit_comparison(std::ostream& out, const std::vector<RunManifest>& manifests);
void write_comparison_rows(std::ostream& out, const std::vector<ComparisonRow>& rows);
std::vector<ComparisonRow> read_comparison_rows(std::istream& in);

} // namespace websample
