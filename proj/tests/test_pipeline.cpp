#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pathmap/error.hpp"
#include "pathmap/pipeline.hpp"
#include "pathmap/tsv.hpp"
#include "pathmap/zipfile.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <map>
#include <sstream>

using namespace pathmap;
namespace fs = std::filesystem;

namespace {

pipeline::RunConfig toy_config(const fs::path& cache, const fs::path& out) {
    auto toy = testutil::fixture_dir() / "toy";
    pipeline::RunConfig config;
    config.expression_path = toy / "expr.tsv";
    config.ko_mapping_path = toy / "ko_map.tsv";
    config.candidates_path = toy / "candidates.tsv";
    config.go_annotation_path = toy / "go.tsv";
    config.org_code = "ko";
    config.cache_dir = cache;
    config.out_dir = out;
    config.offline = true;
    config.fixture_dir = testutil::fixture_dir() / "kegg";
    return config;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) {
            files[fs::relative(entry.path(), root).generic_string()] =
                testutil::read_file(entry.path());
        }
    }
    return files;
}

std::vector<std::vector<std::string>> parse_tsv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(tsv::split_fields(line));
    }
    return rows;
}

} // namespace

TEST_CASE("float serialization rules") {
    CHECK(tsv::format_value(1.0) == "1.000000");
    CHECK(tsv::format_value(0.0) == "0.000000");
    CHECK(tsv::format_value(3.2e-7) == "3.200000e-7");
    CHECK(tsv::format_value(0.6666666666) == "0.666667");
    CHECK(tsv::format_value(9.999999999e-5) == "1.000000e-4");
    CHECK(tsv::format_value(0.0001) == "0.000100");
}

TEST_CASE("write_enrichment_tsv") {
    testutil::TempDir tmp("tsv");
    SUBCASE("empty result list yields a header-only file") {
        pipeline::write_enrichment_tsv({}, tmp.path / "empty.tsv", "");
        auto rows = parse_tsv(testutil::read_file(tmp.path / "empty.tsv"));
        REQUIRE(rows.size() == 1);
        CHECK(rows[0][0] == "term_id");
    }
    SUBCASE("rows carry formatted p-values and hit genes") {
        stats::EnrichmentResult r;
        r.term_id = "GO:1";
        r.term_name = "one";
        r.table = {2, 1, 3, 4};
        r.p_value = 3.2e-7;
        r.p_adjusted = 1.0;
        r.hit_genes = {"g1", "g2"};
        pipeline::write_enrichment_tsv({r}, tmp.path / "one.tsv", "setA");
        auto rows = parse_tsv(testutil::read_file(tmp.path / "one.tsv"));
        REQUIRE(rows.size() == 2);
        CHECK(rows[0][0] == "candidate_set");
        CHECK(rows[1][0] == "setA");
        CHECK(rows[1][7] == "3.200000e-7");
        CHECK(rows[1][8] == "1.000000");
        CHECK(rows[1][9] == "g1,g2");
    }
}

TEST_CASE("toy pipeline run produces the expected output tree") {
    testutil::TempDir cache("pipe_cache");
    testutil::TempDir out("pipe_out");
    auto config = toy_config(cache.path, out.path);

    auto report = pipeline::run(config);
    CHECK(report.pathways_rendered == 1);
    CHECK(report.pathway_tests == 1);
    CHECK(report.profile_groups == 0);

    CHECK(fs::exists(out.path / "pathways/ko00010.png"));
    CHECK(fs::exists(out.path / "pathway_enrichment.tsv"));
    CHECK(fs::exists(out.path / "missing.tsv"));
    CHECK(fs::exists(out.path / "run_report.tsv"));
    CHECK(fs::exists(out.path / "go_enrichment"));
    CHECK_FALSE(fs::exists(out.path / ".partial"));

    // candidate set "c2" = {g1}; universe {g1,g2,g3}; pathway genes {g1,g2}
    // a=1 b=0 c=1 d=1 -> p = 2/3
    auto rows = parse_tsv(testutil::read_file(out.path / "pathway_enrichment.tsv"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == "c2");
    CHECK(rows[1][1] == "ko00010");
    CHECK(rows[1][3] == "1"); // a
    CHECK(rows[1][4] == "0"); // b
    CHECK(rows[1][5] == "1"); // c
    CHECK(rows[1][6] == "1"); // d
    CHECK(rows[1][7] == "0.666667");
    CHECK(rows[1][8] == "0.666667");
    CHECK(rows[1][9] == "g1");

    // g3 maps to K99999 which is not in the pathway; the pathway KOs with
    // no matrix gene are listed as missing
    auto missing = parse_tsv(testutil::read_file(out.path / "missing.tsv"));
    CHECK(missing.size() > 1);
    for (std::size_t i = 1; i < missing.size(); ++i) {
        CHECK(missing[i][0] == "ko00010");
        CHECK(missing[i][1] != "K00134");
        CHECK(missing[i][1] != "K00927");
    }

    // GO namespaces are data-driven: BP, CC, MF each get full + filtered
    for (const char* ns : {"BP", "CC", "MF"}) {
        CHECK(fs::exists(out.path / "go_enrichment" / ("c2_" + std::string(ns) + "_all.tsv")));
        CHECK(fs::exists(out.path / "go_enrichment" /
                         ("c2_" + std::string(ns) + "_significant.tsv")));
    }
    auto bp = parse_tsv(testutil::read_file(out.path / "go_enrichment/c2_BP_all.tsv"));
    REQUIRE(bp.size() == 2);
    CHECK(bp[1][0] == "GO:0008150");
    CHECK(bp[1][6] == "0.666667");
}

TEST_CASE("two offline runs are byte-identical and hit only the cache") {
    testutil::TempDir cache("pipe_cache2");
    testutil::TempDir out1("pipe_out1");
    testutil::TempDir out2("pipe_out2");

    auto inner = std::make_shared<kegg::FixtureFetcher>(testutil::fixture_dir() / "kegg");
    auto counter = std::make_shared<kegg::CountingFetcher>(inner);

    auto config1 = toy_config(cache.path, out1.path);
    config1.fetcher = counter;
    pipeline::run(config1);
    int cold_requests = counter->count();
    CHECK(cold_requests == 3); // listing + kgml + image

    auto config2 = toy_config(cache.path, out2.path);
    config2.fetcher = counter;
    pipeline::run(config2);
    CHECK(counter->count() == cold_requests); // warm cache: zero requests

    CHECK(read_tree(out1.path) == read_tree(out2.path));
}

TEST_CASE("pathway filter skips the listing") {
    testutil::TempDir cache("pipe_cache3");
    testutil::TempDir out("pipe_out3");
    auto inner = std::make_shared<kegg::FixtureFetcher>(testutil::fixture_dir() / "kegg");
    auto counter = std::make_shared<kegg::CountingFetcher>(inner);
    auto config = toy_config(cache.path, out.path);
    config.fetcher = counter;
    config.pathway_filter = {"ko00010"};
    pipeline::run(config);
    CHECK(counter->count() == 2); // kgml + image only, no listing
    CHECK(fs::exists(out.path / "pathways/ko00010.png"));
}

TEST_CASE("run without candidates: header-only enrichment, no outlines") {
    testutil::TempDir cache("pipe_cache4");
    testutil::TempDir out("pipe_out4");
    auto config = toy_config(cache.path, out.path);
    config.candidates_path.reset();
    pipeline::run(config);
    auto rows = parse_tsv(testutil::read_file(out.path / "pathway_enrichment.tsv"));
    CHECK(rows.size() == 1);

    // no red outline pixels anywhere
    auto png = testutil::read_file(out.path / "pathways/ko00010.png");
    auto image = img::decode_png(png);
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            REQUIRE(image.get(x, y) != render::kCandidateOutline);
        }
    }
}

TEST_CASE("candidate set disjoint from the universe gives p = 1 rows") {
    testutil::TempDir cache("pipe_cache5");
    testutil::TempDir out("pipe_out5");
    testutil::TempDir inputs("pipe_inputs");
    testutil::write_file(inputs.path / "candidates.tsv", "odd\tnot_in_matrix\n");

    auto config = toy_config(cache.path, out.path);
    config.candidates_path = inputs.path / "candidates.tsv";
    auto report = pipeline::run(config);
    CHECK_FALSE(report.warnings.empty());

    auto rows = parse_tsv(testutil::read_file(out.path / "pathway_enrichment.tsv"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][7] == "1.000000");
    CHECK(rows[1][8] == "1.000000");
}

TEST_CASE("time-series mode writes profiles and per-profile enrichment") {
    testutil::TempDir cache("pipe_cache6");
    testutil::TempDir out("pipe_out6");
    auto config = toy_config(cache.path, out.path);
    config.mode = pipeline::RunMode::time_series;
    config.time_points = {"c1", "c2"};
    config.pseudocount = 0.0;

    auto report = pipeline::run(config);
    CHECK(report.profile_groups > 0);
    REQUIRE(fs::exists(out.path / "profiles.tsv"));
    auto rows = parse_tsv(testutil::read_file(out.path / "profiles.tsv"));
    // g1: 1->8 Up; g2: 4->2 Down (exactly -1 -> boundary call); g3: 0->5 Up (eps 0 -> inf)
    std::map<std::string, std::string> profile;
    for (std::size_t i = 1; i < rows.size(); ++i) profile[rows[i][1]] = rows[i][0];
    CHECK(profile.at("g1") == "Up");
    CHECK(profile.at("g2") == "Down");
    CHECK(profile.at("g3") == "Up");
    CHECK(fs::exists(out.path / "profile_go_enrichment"));
}

TEST_CASE("failed runs leave no final outputs") {
    testutil::TempDir cache("pipe_cache7");
    testutil::TempDir out("pipe_out7");
    auto config = toy_config(cache.path, out.path);
    config.expression_path = "/nonexistent/expr.tsv";
    CHECK_THROWS_AS(pipeline::run(config), Error);
    CHECK_FALSE(fs::exists(out.path / "pathway_enrichment.tsv"));
    CHECK_FALSE(fs::exists(out.path / "run_report.tsv"));
}

TEST_CASE("config validation") {
    pipeline::RunConfig config;
    CHECK_THROWS_AS(config.validate(), Error);
    config = toy_config("/tmp/c", "/tmp/o");
    config.alpha = 0.0;
    CHECK_THROWS_AS(config.validate(), Error);
    config.alpha = 0.05;
    config.n_bins = 1;
    CHECK_THROWS_AS(config.validate(), Error);
    config.n_bins = 5;
    config.mode = pipeline::RunMode::time_series;
    CHECK_THROWS_AS(config.validate(), Error);
}

TEST_CASE("zip bundle packs the output tree deterministically") {
    testutil::TempDir tree("zip_tree");
    testutil::write_file(tree.path / "a.tsv", "hello\n");
    testutil::write_file(tree.path / "sub/b.txt", "world\n");
    testutil::TempDir dest("zip_dest");
    zipfile::pack_directory(tree.path, dest.path / "one.zip");
    zipfile::pack_directory(tree.path, dest.path / "two.zip");
    auto one = testutil::read_file(dest.path / "one.zip");
    CHECK(one == testutil::read_file(dest.path / "two.zip"));
    CHECK(one.substr(0, 2) == "PK");
    CHECK(one.find("a.tsv") != std::string::npos);
    CHECK(one.find("sub/b.txt") != std::string::npos);
}

TEST_CASE("universe closure: extra mapping genes never change p-values") {
    testutil::TempDir cache("pipe_cache8");
    testutil::TempDir out1("pipe_out8a");
    testutil::TempDir out2("pipe_out8b");
    testutil::TempDir inputs("pipe_inputs8");

    auto base_map = testutil::read_file(testutil::fixture_dir() / "toy/ko_map.tsv");
    testutil::write_file(inputs.path / "ko_map.tsv",
                         base_map + "ghost\tK00134\nphantom\tK00927\n");

    auto config1 = toy_config(cache.path, out1.path);
    pipeline::run(config1);
    auto config2 = toy_config(cache.path, out2.path);
    config2.ko_mapping_path = inputs.path / "ko_map.tsv";
    pipeline::run(config2);

    CHECK(testutil::read_file(out1.path / "pathway_enrichment.tsv") ==
          testutil::read_file(out2.path / "pathway_enrichment.tsv"));
}
