#pragma once

#include "pathmap/ingest.hpp"
#include "pathmap/kegg.hpp"
#include "pathmap/profiles.hpp"
#include "pathmap/render.hpp"
#include "pathmap/stats.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pathmap::pipeline {

enum class RunMode { multi_condition, time_series };

struct RunConfig {
    std::filesystem::path expression_path;
    std::filesystem::path ko_mapping_path;
    std::optional<std::filesystem::path> candidates_path;
    std::optional<std::filesystem::path> go_annotation_path;

    std::string org_code = "ko";
    RunMode mode = RunMode::multi_condition;
    std::vector<std::string> time_points; // time-series mode only
    std::map<std::string, std::string> replicate_map;

    std::filesystem::path cache_dir;
    std::filesystem::path out_dir;
    bool offline = false;
    std::optional<std::filesystem::path> fixture_dir; // offline source
    std::string base_url = "https://rest.kegg.jp";
    bool refresh = false;

    double alpha = 0.05;
    int n_bins = 5;
    std::string palette = "ylorrd";
    double fc_threshold = 1.0;
    double pseudocount = 1.0;
    bool replicate_test = false;
    render::Aggregation aggregation = render::Aggregation::mean;
    std::vector<std::string> pathway_filter; // allowlist of pathway ids

    /// Test hook: when set, used instead of the fetcher implied by
    /// offline/base_url.
    std::shared_ptr<kegg::Fetcher> fetcher;

    void validate() const;
};

struct RunReport {
    std::size_t pathways_rendered = 0;
    std::size_t pathway_tests = 0;
    std::size_t go_tests = 0;
    std::size_t significant_pathways = 0;
    std::size_t significant_go_terms = 0;
    std::size_t profile_groups = 0;
    std::vector<std::string> warnings;
    double wall_seconds = 0.0;
};

/// Runs the full workflow and writes the output tree under
/// config.out_dir. Results are staged in out_dir/.partial and moved into
/// place on success.
RunReport run(const RunConfig& config);

/// Header + one row per result; floats with 6 digits after the point,
/// scientific below 1e-4.
void write_enrichment_tsv(const std::vector<stats::EnrichmentResult>& results,
                          const std::filesystem::path& destination,
                          const std::string& label);

/// Replaces characters unsafe in file names (namespace labels, candidate
/// labels) with '_'.
std::string sanitize_filename(const std::string& name);

} // namespace pathmap::pipeline
