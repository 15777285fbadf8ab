#include "pathmap/pipeline.hpp"

#include "pathmap/error.hpp"
#include "pathmap/tsv.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

namespace pathmap::pipeline {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::io_error, "cannot open " + path.string());
    return in;
}

void write_text(const fs::path& path, const std::string& data) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::io_error, "cannot write " + path.string());
    out.write(data.data(), std::streamsize(data.size()));
    if (!out) throw Error(errc::io_error, "short write to " + path.string());
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

void append_result_row(std::ostream& out, const stats::EnrichmentResult& r) {
    out << r.term_id << '\t' << r.term_name << '\t' << r.table.a << '\t' << r.table.b << '\t'
        << r.table.c << '\t' << r.table.d << '\t' << tsv::format_value(r.p_value) << '\t'
        << tsv::format_value(r.p_adjusted) << '\t' << join(r.hit_genes, ",") << '\n';
}

constexpr const char* kResultColumns =
    "term_id\tterm_name\ta\tb\tc\td\tp_value\tp_adjusted\thit_genes";

} // namespace

std::string sanitize_filename(const std::string& name) {
    std::string out = name;
    for (char& c : out) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_';
        if (!ok) c = '_';
    }
    return out.empty() ? "_" : out;
}

void RunConfig::validate() const {
    if (expression_path.empty()) throw Error(errc::config_error, "expression file required");
    if (ko_mapping_path.empty()) throw Error(errc::config_error, "KO mapping file required");
    if (out_dir.empty()) throw Error(errc::config_error, "output directory required");
    if (cache_dir.empty()) throw Error(errc::config_error, "cache directory required");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(errc::config_error, "alpha must be in (0,1]");
    if (n_bins < 2) throw Error(errc::config_error, "bins must be >= 2");
    if (pseudocount < 0.0) throw Error(errc::config_error, "pseudocount must be >= 0");
    if (fc_threshold <= 0.0) throw Error(errc::config_error, "fc-threshold must be > 0");
    if (mode == RunMode::time_series && time_points.size() < 2) {
        throw Error(errc::config_error, "time-series mode needs >= 2 time points");
    }
}

void write_enrichment_tsv(const std::vector<stats::EnrichmentResult>& results,
                          const fs::path& destination, const std::string& label) {
    std::ostringstream out;
    if (!label.empty()) out << "candidate_set\t";
    out << kResultColumns << '\n';
    for (const auto& r : results) {
        if (!label.empty()) out << label << '\t';
        append_result_row(out, r);
    }
    write_text(destination, out.str());
}

RunReport run(const RunConfig& config) {
    config.validate();
    auto started = std::chrono::steady_clock::now();
    RunReport report;

    // --- inputs ---------------------------------------------------------
    ingest::ExpressionMatrix matrix;
    {
        auto in = open_input(config.expression_path);
        matrix = ingest::parse_expression_table(in);
    }
    ingest::KoMapping mapping;
    {
        auto in = open_input(config.ko_mapping_path);
        mapping = ingest::parse_ko_mapping(in);
    }
    std::vector<ingest::CandidateSet> candidates;
    if (config.candidates_path) {
        auto in = open_input(*config.candidates_path);
        candidates = ingest::parse_candidate_lists(in);
    }
    ingest::GoAnnotation annotation;
    if (config.go_annotation_path) {
        auto in = open_input(*config.go_annotation_path);
        annotation = ingest::parse_go_annotation(in);
    }

    const std::set<std::string> universe = matrix.gene_set();
    report.warnings = ingest::cross_check(matrix, mapping, candidates);

    // --- pathways -------------------------------------------------------
    std::shared_ptr<kegg::Fetcher> fetcher = config.fetcher;
    if (!fetcher) {
        if (config.offline) {
            fetcher = std::make_shared<kegg::FixtureFetcher>(
                config.fixture_dir.value_or(config.cache_dir));
        } else {
            fetcher = std::make_shared<kegg::HttpFetcher>(config.base_url);
        }
    }
    kegg::Client client(fetcher, config.cache_dir, config.refresh);

    std::vector<kegg::PathwayId> ids;
    if (!config.pathway_filter.empty()) {
        for (const auto& text : config.pathway_filter) {
            ids.push_back(kegg::parse_pathway_id(text));
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    } else {
        ids = client.list_pathways(config.org_code);
    }

    std::vector<kegg::Pathway> pathways;
    std::vector<std::string> pathway_pngs;
    for (const auto& id : ids) {
        auto [pathway, png] = client.fetch_pathway(id);
        pathways.push_back(std::move(pathway));
        pathway_pngs.push_back(std::move(png));
    }

    // --- staging directory ----------------------------------------------
    const fs::path staging = config.out_dir / ".partial";
    std::error_code ec;
    fs::remove_all(staging, ec);
    fs::create_directories(staging);

    try {
        // --- overlays and missing KOs -----------------------------------
        std::map<std::string, std::size_t> gene_row;
        for (std::size_t g = 0; g < matrix.n_genes(); ++g) gene_row[matrix.gene_ids[g]] = g;

        // KO -> universe genes mapped to it
        std::map<std::string, std::vector<std::string>> ko_genes;
        for (const auto& [gene, kos] : mapping.entries) {
            if (!universe.count(gene)) continue;
            for (const auto& ko : kos) ko_genes[ko].push_back(gene);
        }

        std::set<std::string> candidate_genes;
        for (const auto& set : candidates) {
            candidate_genes.insert(set.genes.begin(), set.genes.end());
        }

        std::vector<double> all_values(matrix.values.begin(), matrix.values.end());
        render::QuantileScale scale =
            render::build_quantile_scale(all_values, config.n_bins, config.palette);

        std::ostringstream missing;
        missing << "pathway_id\tko_id\n";

        for (std::size_t i = 0; i < pathways.size(); ++i) {
            const auto& pathway = pathways[i];

            render::OverlaySpec spec;
            spec.pathway = &pathway;
            spec.base_image_png = &pathway_pngs[i];
            spec.condition_labels = matrix.condition_labels;
            spec.scale = scale;

            std::set<std::string> pathway_kos;
            for (const auto& entry : pathway.entries) {
                pathway_kos.insert(entry.ko_ids.begin(), entry.ko_ids.end());
            }
            for (const auto& ko : pathway_kos) {
                auto it = ko_genes.find(ko);
                if (it == ko_genes.end()) {
                    missing << pathway.id.str() << '\t' << ko << '\n';
                    continue;
                }
                std::vector<double> display(matrix.n_conditions());
                for (std::size_t c = 0; c < matrix.n_conditions(); ++c) {
                    std::vector<double> values;
                    values.reserve(it->second.size());
                    for (const auto& gene : it->second) {
                        values.push_back(matrix.at(gene_row.at(gene), c));
                    }
                    display[c] = render::aggregate_ko_value(values, config.aggregation);
                }
                spec.ko_values[ko] = std::move(display);
                for (const auto& gene : it->second) {
                    if (candidate_genes.count(gene)) {
                        spec.candidate_kos.insert(ko);
                        break;
                    }
                }
            }

            auto rendered = render::render_overlay(spec);
            report.warnings.insert(report.warnings.end(), rendered.warnings.begin(),
                                   rendered.warnings.end());
            write_text(staging / "pathways" / (pathway.id.str() + ".png"), rendered.png);
            ++report.pathways_rendered;
        }
        write_text(staging / "missing.tsv", missing.str());

        // --- pathway over-representation --------------------------------
        {
            std::ostringstream out;
            out << "candidate_set\t" << kResultColumns << '\n';
            for (const auto& set : candidates) {
                std::set<std::string> selected;
                std::set_intersection(set.genes.begin(), set.genes.end(), universe.begin(),
                                      universe.end(),
                                      std::inserter(selected, selected.begin()));
                auto results =
                    stats::pathway_overrepresentation(selected, pathways, mapping, universe);
                report.pathway_tests += results.size();
                for (const auto& r : results) {
                    if (r.p_adjusted < config.alpha) ++report.significant_pathways;
                    out << set.label << '\t';
                    append_result_row(out, r);
                }
            }
            write_text(staging / "pathway_enrichment.tsv", out.str());
        }

        // --- GO enrichment per candidate set -----------------------------
        if (config.go_annotation_path) {
            for (const auto& set : candidates) {
                std::set<std::string> selected;
                std::set_intersection(set.genes.begin(), set.genes.end(), universe.begin(),
                                      universe.end(),
                                      std::inserter(selected, selected.begin()));
                auto enrichment =
                    stats::go_enrichment(selected, annotation, universe, config.alpha);
                for (const auto& [ns, results] : enrichment.full) {
                    report.go_tests += results.size();
                    std::string stem =
                        sanitize_filename(set.label) + "_" + sanitize_filename(ns);
                    write_enrichment_tsv(results,
                                         staging / "go_enrichment" / (stem + "_all.tsv"), "");
                    write_enrichment_tsv(enrichment.filtered.at(ns),
                                         staging / "go_enrichment" /
                                             (stem + "_significant.tsv"), "");
                    report.significant_go_terms += enrichment.filtered.at(ns).size();
                }
            }
        }

        // --- time-series profiles ----------------------------------------
        if (config.mode == RunMode::time_series) {
            profiles::TimeSeriesDesign design{config.time_points, config.replicate_map};
            profiles::ClassifierConfig classifier;
            classifier.fc_threshold = config.fc_threshold;
            classifier.pseudocount = config.pseudocount;
            classifier.replicate_test = config.replicate_test;
            classifier.test_alpha = config.alpha;

            auto groups = profiles::group_profiles(matrix, design, classifier);
            report.profile_groups = groups.size();

            std::ostringstream out;
            out << "profile_key\tgene_id\n";
            for (const auto& group : groups) {
                for (const auto& gene : group.genes) {
                    out << group.profile_key << '\t' << gene << '\n';
                }
            }
            write_text(staging / "profiles.tsv", out.str());

            if (config.go_annotation_path) {
                auto per_profile =
                    profiles::profile_enrichment(groups, annotation, universe, config.alpha);
                for (const auto& [key, enrichment] : per_profile) {
                    for (const auto& [ns, results] : enrichment.full) {
                        report.go_tests += results.size();
                        std::string stem =
                            sanitize_filename(key) + "_" + sanitize_filename(ns);
                        write_enrichment_tsv(results, staging / "profile_go_enrichment" /
                                                          (stem + "_all.tsv"), "");
                        write_enrichment_tsv(enrichment.filtered.at(ns),
                                             staging / "profile_go_enrichment" /
                                                 (stem + "_significant.tsv"), "");
                        report.significant_go_terms += enrichment.filtered.at(ns).size();
                    }
                }
            }
        }

        // --- run report ---------------------------------------------------
        {
            // wall-clock time stays off the report file: output trees from
            // identical configs must be byte-identical
            std::ostringstream out;
            out << "key\tvalue\n";
            out << "pathways_rendered\t" << report.pathways_rendered << '\n';
            out << "pathway_tests\t" << report.pathway_tests << '\n';
            out << "go_tests\t" << report.go_tests << '\n';
            out << "significant_pathways\t" << report.significant_pathways << '\n';
            out << "significant_go_terms\t" << report.significant_go_terms << '\n';
            out << "profile_groups\t" << report.profile_groups << '\n';
            out << "warnings\t" << report.warnings.size() << '\n';
            write_text(staging / "run_report.tsv", out.str());
        }
    } catch (...) {
        // leave .partial for inspection; final paths stay untouched
        throw;
    }

    // --- promote staging into final paths --------------------------------
    for (const auto& entry : fs::directory_iterator(staging)) {
        fs::path target = config.out_dir / entry.path().filename();
        fs::remove_all(target);
        fs::rename(entry.path(), target);
    }
    fs::remove_all(staging);

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

} // namespace pathmap::pipeline
