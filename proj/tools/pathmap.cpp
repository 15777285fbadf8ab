// pathmap: KEGG pathway expression overlays and enrichment reports.

#include "pathmap/error.hpp"
#include "pathmap/kegg.hpp"
#include "pathmap/pipeline.hpp"
#include "pathmap/zipfile.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

namespace {

constexpr const char* kVersion = "0.1.0";

std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("PATHMAP_CACHE_DIR")) return env;
    if (const char* home = std::getenv("HOME")) {
        return std::filesystem::path(home) / ".cache" / "pathmap";
    }
    return "pathmap_cache";
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"KEGG pathway expression mapping and enrichment"};
    app.require_subcommand(1);

    // --- run --------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "Run the full analysis workflow");
    run_cmd->set_config("--config", "", "Optional key=value config file");

    std::string expr, ko_map, candidates, go, org = "ko", out_dir;
    std::string cache = default_cache_dir().string();
    std::string mode = "multi", timepoints, agg = "mean", palette = "ylorrd";
    std::vector<std::string> pathway_filter;
    double alpha = 0.05, fc_threshold = 1.0, pseudocount = 1.0;
    int bins = 5;
    bool offline = false, refresh = false, replicate_test = false, bundle = false;

    run_cmd->add_option("--expr", expr, "Expression matrix TSV")->required();
    run_cmd->add_option("--ko-map", ko_map, "Gene-to-KO mapping TSV")->required();
    run_cmd->add_option("--candidates", candidates, "Candidate gene lists TSV");
    run_cmd->add_option("--go", go, "GO annotation TSV");
    run_cmd->add_option("--org", org, "KEGG organism code (default ko)");
    run_cmd->add_option("--out", out_dir, "Output directory")->required();
    run_cmd->add_option("--cache", cache, "KEGG cache directory");
    run_cmd->add_flag("--offline", offline, "Serve pathways from the cache only");
    run_cmd->add_option("--mode", mode, "multi | timeseries")
        ->check(CLI::IsMember({"multi", "timeseries"}));
    run_cmd->add_option("--timepoints", timepoints,
                        "Ordered comma-separated time point columns");
    run_cmd->add_option("--alpha", alpha, "Adjusted-p significance threshold");
    run_cmd->add_option("--bins", bins, "Number of quantile color bins");
    run_cmd->add_option("--fc-threshold", fc_threshold, "log2 fold-change call threshold");
    run_cmd->add_option("--pseudocount", pseudocount, "Pseudocount for log ratios");
    run_cmd->add_flag("--replicate-test", replicate_test,
                      "Require a Welch test across replicates for direction calls");
    run_cmd->add_option("--agg", agg, "KO aggregation: mean | max | sum")
        ->check(CLI::IsMember({"mean", "max", "sum"}));
    run_cmd->add_option("--palette", palette, "Color palette: ylorrd | viridis");
    run_cmd->add_option("--pathway", pathway_filter, "Restrict to these pathway ids");
    run_cmd->add_flag("--refresh", refresh, "Refetch cached artifacts");
    run_cmd->add_flag("--report-bundle", bundle, "Also write <out>/bundle.zip");

    // --- fetch ------------------------------------------------------------
    auto* fetch_cmd = app.add_subcommand("fetch", "Pre-warm the pathway cache");
    std::string fetch_org = "ko";
    std::string fetch_cache = default_cache_dir().string();
    std::vector<std::string> fetch_filter;
    fetch_cmd->add_option("--org", fetch_org, "KEGG organism code")->required();
    fetch_cmd->add_option("--cache", fetch_cache, "KEGG cache directory");
    fetch_cmd->add_option("--pathway", fetch_filter, "Restrict to these pathway ids");

    // --- version ----------------------------------------------------------
    auto* version_cmd = app.add_subcommand("version", "Print the version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (version_cmd->parsed()) {
            std::cout << "pathmap " << kVersion << "\n";
            return 0;
        }

        if (fetch_cmd->parsed()) {
            auto fetcher = std::make_shared<pathmap::kegg::HttpFetcher>();
            pathmap::kegg::Client client(fetcher, fetch_cache);
            std::vector<pathmap::kegg::PathwayId> ids;
            if (!fetch_filter.empty()) {
                for (const auto& text : fetch_filter) {
                    ids.push_back(pathmap::kegg::parse_pathway_id(text));
                }
            } else {
                ids = client.list_pathways(fetch_org);
            }
            for (const auto& id : ids) {
                client.fetch_pathway(id);
                std::cout << "cached " << id.str() << "\n";
            }
            return 0;
        }

        pathmap::pipeline::RunConfig config;
        config.expression_path = expr;
        config.ko_mapping_path = ko_map;
        if (!candidates.empty()) config.candidates_path = candidates;
        if (!go.empty()) config.go_annotation_path = go;
        config.org_code = org;
        config.out_dir = out_dir;
        config.cache_dir = cache;
        config.offline = offline;
        config.refresh = refresh;
        config.alpha = alpha;
        config.n_bins = bins;
        config.palette = palette;
        config.fc_threshold = fc_threshold;
        config.pseudocount = pseudocount;
        config.replicate_test = replicate_test;
        config.aggregation = pathmap::render::parse_aggregation(agg);
        config.pathway_filter = pathway_filter;
        if (mode == "timeseries") {
            config.mode = pathmap::pipeline::RunMode::time_series;
            config.time_points = split_csv(timepoints);
        }

        auto report = pathmap::pipeline::run(config);

        for (const auto& warning : report.warnings) {
            std::cerr << "warning: " << warning << "\n";
        }
        std::cout << "pathways rendered: " << report.pathways_rendered << "\n"
                  << "pathway tests: " << report.pathway_tests
                  << " (significant: " << report.significant_pathways << ")\n"
                  << "GO tests: " << report.go_tests
                  << " (significant: " << report.significant_go_terms << ")\n";
        if (config.mode == pathmap::pipeline::RunMode::time_series) {
            std::cout << "profile groups: " << report.profile_groups << "\n";
        }
        std::cout << "elapsed: " << report.wall_seconds << " s\n";

        if (bundle) {
            pathmap::zipfile::pack_directory(config.out_dir,
                                             config.out_dir / "bundle.zip");
            std::cout << "bundle: " << (config.out_dir / "bundle.zip").string() << "\n";
        }
        return 0;
    } catch (const pathmap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
