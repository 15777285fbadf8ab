#include <benchmark/benchmark.h>

#include "pathmap/render.hpp"
#include "pathmap/stats.hpp"

#include <random>
#include <vector>

using namespace pathmap;

static void BM_FisherExactGreater(benchmark::State& state) {
    long n = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            stats::fisher_exact_greater({n / 7, n / 3, n / 5, n / 2}));
    }
}
BENCHMARK(BM_FisherExactGreater)->Arg(100)->Arg(10000);

static void BM_BhAdjust(benchmark::State& state) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> p(state.range(0));
    for (auto& x : p) x = unit(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats::bh_adjust(p));
    }
}
BENCHMARK(BM_BhAdjust)->Arg(100)->Arg(10000);

static void BM_QuantileScale(benchmark::State& state) {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> dist(0.0, 1e4);
    std::vector<double> values(state.range(0));
    for (auto& v : values) v = dist(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(render::build_quantile_scale(values, 5));
    }
}
BENCHMARK(BM_QuantileScale)->Arg(1000)->Arg(100000);

static void BM_RenderOverlay(benchmark::State& state) {
    kegg::Pathway pathway;
    pathway.id = {"ko", "99999"};
    for (int i = 0; i < 60; ++i) {
        kegg::PathwayEntry e;
        e.entry_id = i + 1;
        e.kind = kegg::EntryKind::ortholog;
        e.ko_ids = {"K" + std::string(5 - std::to_string(i).size(), '0') +
                    std::to_string(i)};
        e.graphics.push_back({40.0 + (i % 10) * 60, 40.0 + (i / 10) * 40, 46, 17,
                              kegg::Shape::rectangle, "rectangle"});
        pathway.entries.push_back(e);
    }
    auto base = img::encode_png(img::Image(640, 320));

    render::OverlaySpec spec;
    spec.pathway = &pathway;
    spec.base_image_png = &base;
    spec.condition_labels = {"c1", "c2", "c3"};
    std::vector<double> all;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 100.0);
    for (const auto& e : pathway.entries) {
        std::vector<double> vals = {dist(rng), dist(rng), dist(rng)};
        all.insert(all.end(), vals.begin(), vals.end());
        spec.ko_values[*e.ko_ids.begin()] = vals;
    }
    spec.scale = render::build_quantile_scale(all, 5);

    for (auto _ : state) {
        benchmark::DoNotOptimize(render::render_overlay(spec));
    }
}
BENCHMARK(BM_RenderOverlay);

BENCHMARK_MAIN();
