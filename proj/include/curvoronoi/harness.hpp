#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "curvoronoi/geometry.hpp"

namespace curvo {

// Experiment description loaded from a sectioned key = value text file.
// The schema is versioned and unknown keys are hard errors: a typo in a
// parameter name must fail loudly, not silently fall back to a default.
struct ExperimentConfig {
    int schema = 1;
    std::string kind;  // sample | graph | estimate-pc | estimate-pu |
                       // couple | cutsets | explore | events
    SpaceSpec space;
    double window_radius = 0.0;
    double window_buffer = 0.0;
    bool has_window = false;

    double lambda = 1.0;
    std::uint64_t seed = 1;
    int replicas = 1;
    int workers = 1;
    std::string out_dir = ".";

    // kind-specific parameters, validated per kind
    std::vector<double> p_grid;
    double eps_scale = 0.0;
    double n_scale = 0.0;
    double d_separation = 0.0;
    double alpha = 0.05;
    double p = 0.0;
    double epsilon = 0.0;
    double couple_r = 0.0;
    double rho = 0.0;
    std::string graph_kind = "voronoi";  // cutsets: voronoi | net
    bool with_margins = false;
    bool with_cells = true;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

// Reproduction record written next to the CSV output.
struct RunManifest {
    std::uint64_t config_hash = 0;
    std::string build_id;
    std::string kind;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    int replicas = 0;
    int failed_replicas = 0;
    std::vector<std::uint64_t> replica_seeds;
    // output file path -> FNV-1a digest of its bytes
    std::map<std::string, std::uint64_t> output_digests;
};

void write_manifest(const std::string& path, const RunManifest& m);

// Runs the configured experiment: fans replicas out over a worker pool
// (replica i is a pure function of the config and split_seed(seed, i), so
// aggregation is identical for any worker count), streams rows to
// <out>/results.csv, and writes <out>/manifest.txt.
RunManifest run(const ExperimentConfig& config);

// One run per distinct value (duplicates removed, order kept), with outputs
// under <out>/<parameter>=<value>/.  Sweepable: lambda, eps, N, p.
std::vector<RunManifest> sweep(const ExperimentConfig& config,
                               const std::string& parameter,
                               const std::vector<double>& values);

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 1469598103934665603ull);
std::uint64_t digest_file(const std::string& path);

inline constexpr const char* kBuildId = "curvoronoi 1.0.0";
inline constexpr const char* kCsvSchema = "v1";

}  // namespace curvo
