#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pathmap/error.hpp"
#include "pathmap/kegg.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <sstream>

using namespace pathmap;

TEST_CASE("pathway id parsing") {
    auto id = kegg::parse_pathway_id("ko00010");
    CHECK(id.org_code == "ko");
    CHECK(id.number == "00010");
    CHECK(id.str() == "ko00010");

    auto prefixed = kegg::parse_pathway_id("path:hsa04110");
    CHECK(prefixed.org_code == "hsa");
    CHECK(prefixed.number == "04110");

    CHECK_THROWS_AS(kegg::parse_pathway_id("ko10"), Error);
    CHECK_THROWS_AS(kegg::parse_pathway_id("KO00010"), Error);
    CHECK_THROWS_AS(kegg::parse_pathway_id("toolongorg00010"), Error);
}

TEST_CASE("parse_kgml matches the golden entry table") {
    auto xml = testutil::read_file(testutil::fixture_dir() / "kegg/ko/ko00010.kgml");
    auto pathway = kegg::parse_kgml(xml);
    CHECK(pathway.title == "Glycolysis / Gluconeogenesis");
    CHECK(pathway.id.str() == "ko00010");
    REQUIRE(pathway.entries.size() >= 10);

    // rebuild the golden table from the parsed pathway
    std::ostringstream got;
    got << "entry_id\tkind\tko_ids\tx\ty\twidth\theight\tshape\n";
    auto entries = pathway.entries;
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.entry_id < b.entry_id; });
    for (const auto& e : entries) {
        std::string kos;
        for (const auto& ko : e.ko_ids) {
            if (!kos.empty()) kos += ',';
            kos += ko;
        }
        got << e.entry_id << '\t' << e.kind_label << '\t' << kos << '\t';
        if (e.graphics.empty()) {
            got << "\t\t\t\t";
        } else {
            const auto& g = e.graphics.front();
            got << std::int64_t(g.center_x) << '\t' << std::int64_t(g.center_y) << '\t'
                << std::int64_t(g.width) << '\t' << std::int64_t(g.height) << '\t'
                << kegg::shape_name(g.shape);
        }
        got << '\n';
    }
    auto golden = testutil::read_file(testutil::fixture_dir() / "golden/kgml_entries.tsv");
    CHECK(got.str() == golden);
}

TEST_CASE("parse_kgml spec example entry") {
    auto xml = testutil::read_file(testutil::fixture_dir() / "kegg/ko/ko00010.kgml");
    auto pathway = kegg::parse_kgml(xml);
    const kegg::PathwayEntry* e18 = nullptr;
    for (const auto& e : pathway.entries) {
        if (e.entry_id == 18) e18 = &e;
    }
    REQUIRE(e18 != nullptr);
    CHECK(e18->ko_ids == std::set<std::string>{"K00134", "K00927"});
    CHECK(e18->kind == kegg::EntryKind::ortholog);
    REQUIRE(e18->graphics.size() == 1);
    CHECK(e18->graphics[0].center_x == 483);
    CHECK(e18->graphics[0].center_y == 407);
    CHECK(e18->graphics[0].width == 46);
    CHECK(e18->graphics[0].height == 17);
    CHECK(e18->graphics[0].shape == kegg::Shape::rectangle);
}

TEST_CASE("parse_kgml malformed variants") {
    auto dir = testutil::fixture_dir() / "kgml";
    SUBCASE("missing x attribute") {
        try {
            kegg::parse_kgml(testutil::read_file(dir / "missing_x.kgml"));
            FAIL("expected MissingAttribute");
        } catch (const Error& e) {
            CHECK(e.code() == errc::missing_attribute);
        }
    }
    SUBCASE("zero width") {
        try {
            kegg::parse_kgml(testutil::read_file(dir / "zero_width.kgml"));
            FAIL("expected BadCoordinate");
        } catch (const Error& e) {
            CHECK(e.code() == errc::bad_coordinate);
        }
    }
    SUBCASE("bad xml") {
        try {
            kegg::parse_kgml(testutil::read_file(dir / "bad_syntax.kgml"));
            FAIL("expected XmlSyntax");
        } catch (const Error& e) {
            CHECK(e.code() == errc::xml_syntax);
        }
    }
    SUBCASE("compound entries carry no KO ids") {
        auto pathway =
            kegg::parse_kgml(testutil::read_file(testutil::fixture_dir() / "kegg/ko/ko00010.kgml"));
        for (const auto& e : pathway.entries) {
            bool koish = e.kind == kegg::EntryKind::ortholog || e.kind == kegg::EntryKind::gene;
            CHECK(e.ko_ids.empty() == !koish);
        }
    }
}

TEST_CASE("png_dimensions") {
    auto png = testutil::read_file(testutil::fixture_dir() / "kegg/ko/ko00010.png");
    auto [w, h] = kegg::png_dimensions(png);
    CHECK(w == 600);
    CHECK(h == 500);

    SUBCASE("truncated blob") {
        auto truncated = png.substr(0, png.size() / 2);
        CHECK_THROWS_AS(kegg::png_dimensions(truncated), Error);
    }
    SUBCASE("garbage") {
        CHECK_THROWS_AS(kegg::png_dimensions("not a png at all, way too short?"), Error);
    }
}

TEST_CASE("fixture listing round-trip") {
    testutil::TempDir cache("kegg_list");
    auto fetcher = std::make_shared<kegg::FixtureFetcher>(testutil::fixture_dir() / "kegg");
    kegg::Client client(fetcher, cache.path);

    auto ids = client.list_pathways("ko");
    REQUIRE(ids.size() == 1);
    CHECK(ids[0].str() == "ko00010");
    CHECK(client.titles().at("ko00010") == "Glycolysis / Gluconeogenesis");
}

TEST_CASE("listing with several pathways is deduplicated and sorted") {
    testutil::TempDir fixtures("kegg_fixture");
    testutil::write_file(fixtures.path / "abc" / "pathways.list",
                         "abc00020\tB\nabc00010\tA\nabc00020\tB\n");
    testutil::TempDir cache("kegg_cache");
    auto fetcher = std::make_shared<kegg::FixtureFetcher>(fixtures.path);
    kegg::Client client(fetcher, cache.path);
    auto ids = client.list_pathways("abc");
    REQUIRE(ids.size() == 2);
    CHECK(ids[0].str() == "abc00010");
    CHECK(ids[1].str() == "abc00020");

    SUBCASE("empty listing is valid") {
        testutil::write_file(fixtures.path / "xyz" / "pathways.list", "");
        CHECK(client.list_pathways("xyz").empty());
    }
}

TEST_CASE("offline mode with no fixture raises FixtureMissing") {
    testutil::TempDir empty("kegg_empty");
    testutil::TempDir cache("kegg_cache2");
    auto fetcher = std::make_shared<kegg::FixtureFetcher>(empty.path);
    kegg::Client client(fetcher, cache.path);
    try {
        client.list_pathways("ko");
        FAIL("expected FixtureMissing");
    } catch (const Error& e) {
        CHECK(e.code() == errc::fixture_missing);
    }
}

TEST_CASE("cache contract: one fetch per artifact, then zero") {
    testutil::TempDir cache("kegg_cache3");
    auto inner = std::make_shared<kegg::FixtureFetcher>(testutil::fixture_dir() / "kegg");
    auto counter = std::make_shared<kegg::CountingFetcher>(inner);
    kegg::Client client(counter, cache.path);

    auto id = kegg::parse_pathway_id("ko00010");
    auto [pathway1, png1] = client.fetch_pathway(id);
    CHECK(counter->count() == 2); // kgml + image
    CHECK(pathway1.image_width == 600);
    CHECK(pathway1.image_height == 500);

    auto [pathway2, png2] = client.fetch_pathway(id);
    CHECK(counter->count() == 2); // warm cache: no further requests
    CHECK(png1 == png2);
    CHECK(pathway2.entries.size() == pathway1.entries.size());
}

TEST_CASE("truncated cached PNG raises ImageDecodeError") {
    testutil::TempDir cache("kegg_cache4");
    auto png = testutil::read_file(testutil::fixture_dir() / "kegg/ko/ko00010.png");
    auto kgml = testutil::read_file(testutil::fixture_dir() / "kegg/ko/ko00010.kgml");
    testutil::write_file(cache.path / "ko" / "ko00010.kgml", kgml);
    testutil::write_file(cache.path / "ko" / "ko00010.png", png.substr(0, 64));

    auto fetcher = std::make_shared<kegg::FixtureFetcher>(cache.path);
    kegg::Client client(fetcher, cache.path);
    try {
        client.fetch_pathway(kegg::parse_pathway_id("ko00010"));
        FAIL("expected ImageDecodeError");
    } catch (const Error& e) {
        CHECK(e.code() == errc::image_decode_error);
    }
}

TEST_CASE("boxes beyond image bounds raise DimensionMismatch") {
    testutil::TempDir root("kegg_dims");
    std::string kgml =
        "<?xml version=\"1.0\"?>\n"
        "<pathway name=\"path:ko99999\" title=\"t\">\n"
        "  <entry id=\"1\" name=\"ko:K00001\" type=\"ortholog\">\n"
        "    <graphics type=\"rectangle\" x=\"900\" y=\"10\" width=\"46\" height=\"17\"/>\n"
        "  </entry>\n"
        "</pathway>\n";
    auto png = testutil::read_file(testutil::fixture_dir() / "kegg/ko/ko00010.png");
    testutil::write_file(root.path / "ko" / "ko99999.kgml", kgml);
    testutil::write_file(root.path / "ko" / "ko99999.png", png);

    auto fetcher = std::make_shared<kegg::FixtureFetcher>(root.path);
    kegg::Client client(fetcher, root.path);
    try {
        client.fetch_pathway(kegg::parse_pathway_id("ko99999"));
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == errc::dimension_mismatch);
    }
}

TEST_CASE("determinism: cached artifacts are byte-stable across clients") {
    testutil::TempDir cache("kegg_cache5");
    auto inner = std::make_shared<kegg::FixtureFetcher>(testutil::fixture_dir() / "kegg");

    auto counter1 = std::make_shared<kegg::CountingFetcher>(inner);
    kegg::Client first(counter1, cache.path);
    auto [p1, png1] = first.fetch_pathway(kegg::parse_pathway_id("ko00010"));

    auto counter2 = std::make_shared<kegg::CountingFetcher>(inner);
    kegg::Client second(counter2, cache.path);
    auto [p2, png2] = second.fetch_pathway(kegg::parse_pathway_id("ko00010"));

    CHECK(counter2->count() == 0);
    CHECK(png1 == png2);
}
