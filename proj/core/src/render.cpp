#include "pathmap/render.hpp"

#include "pathmap/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pathmap::render {

namespace {

struct PaletteDef {
    const char* name;
    std::vector<img::Rgb> stops;
};

const std::vector<PaletteDef>& palette_defs() {
    // ColorBrewer YlOrRd and a viridis ramp, light to dark
    static const std::vector<PaletteDef> defs = {
        {"ylorrd",
         {{255, 255, 178}, {254, 204, 92}, {253, 141, 60}, {240, 59, 32}, {189, 0, 38}}},
        {"viridis",
         {{253, 231, 37}, {94, 201, 98}, {33, 145, 140}, {59, 82, 139}, {68, 1, 84}}},
    };
    return defs;
}

img::Rgb lerp(img::Rgb a, img::Rgb b, double t) {
    auto mix = [t](std::uint8_t x, std::uint8_t y) {
        return std::uint8_t(std::lround(double(x) + t * (double(y) - double(x))));
    };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

// quantile-position label for the boundary after bin b; rank-based so
// rendered output is invariant under monotone value transforms
std::string quantile_label(int b, int n_bins) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%ld%%", std::lround(100.0 * (b + 1) / n_bins));
    return buf;
}

} // namespace

Aggregation parse_aggregation(const std::string& name) {
    if (name == "mean") return Aggregation::mean;
    if (name == "max") return Aggregation::max;
    if (name == "sum") return Aggregation::sum;
    throw Error(errc::config_error, "unknown aggregation '" + name + "'");
}

std::vector<img::Rgb> palette(const std::string& name, int n_bins) {
    for (const auto& def : palette_defs()) {
        if (def.name != name) continue;
        std::vector<img::Rgb> colors;
        colors.reserve(n_bins);
        if (n_bins == 1) return {def.stops.front()};
        for (int i = 0; i < n_bins; ++i) {
            double pos = double(i) / double(n_bins - 1) * double(def.stops.size() - 1);
            int lo = int(pos);
            int hi = std::min<int>(lo + 1, int(def.stops.size()) - 1);
            colors.push_back(lerp(def.stops[lo], def.stops[hi], pos - lo));
        }
        return colors;
    }
    throw Error(errc::config_error, "unknown palette '" + name + "'");
}

QuantileScale build_quantile_scale(const std::vector<double>& all_values, int n_bins,
                                   const std::string& palette_name) {
    if (n_bins < 2) throw Error(errc::domain_error, "n_bins must be >= 2");
    std::vector<double> sorted;
    sorted.reserve(all_values.size());
    for (double v : all_values) {
        if (std::isfinite(v)) sorted.push_back(v);
    }
    if (sorted.empty()) throw Error(errc::empty_values, "quantile scale needs values");
    std::sort(sorted.begin(), sorted.end());

    QuantileScale scale;
    scale.n_bins = n_bins;
    const std::size_t n = sorted.size();
    for (int j = 1; j < n_bins; ++j) {
        double pos = double(j) / double(n_bins) * double(n - 1);
        std::size_t lo = std::size_t(pos);
        double frac = pos - double(lo);
        double value = sorted[lo];
        if (lo + 1 < n) value += frac * (sorted[lo + 1] - sorted[lo]);
        scale.breakpoints.push_back(value);
    }
    scale.colors = palette(palette_name, n_bins);
    return scale;
}

int bin_of(double value, const QuantileScale& scale) {
    int bin = 0;
    for (double bp : scale.breakpoints) {
        if (bp < value) ++bin;
    }
    return bin;
}

double aggregate_ko_value(const std::vector<double>& gene_values, Aggregation strategy) {
    if (gene_values.empty()) {
        throw Error(errc::empty_values, "no contributing genes for KO");
    }
    switch (strategy) {
    case Aggregation::max:
        return *std::max_element(gene_values.begin(), gene_values.end());
    case Aggregation::sum: {
        double sum = 0.0;
        for (double v : gene_values) sum += v;
        return sum;
    }
    case Aggregation::mean: {
        double sum = 0.0;
        for (double v : gene_values) sum += v;
        return sum / double(gene_values.size());
    }
    }
    return gene_values.front();
}

RenderResult render_overlay(const OverlaySpec& spec) {
    const kegg::Pathway& pathway = *spec.pathway;
    img::Image base = img::decode_png(*spec.base_image_png);
    if (pathway.image_width > 0 &&
        (base.width() != pathway.image_width || base.height() != pathway.image_height)) {
        throw Error(errc::dimension_mismatch,
                    "diagram image does not match pathway dimensions");
    }

    const int width = base.width();
    const int height = base.height();
    const int n_conditions = int(spec.condition_labels.size());

    img::Image out(width, height + kLegendBandHeight);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) out.set(x, y, base.get(x, y));
    }

    RenderResult result;

    struct Outline {
        int x0, y0, x1, y1;
    };
    std::vector<Outline> outlines;

    for (const auto& entry : pathway.entries) {
        if (entry.kind != kegg::EntryKind::ortholog && entry.kind != kegg::EntryKind::gene) {
            continue;
        }
        // first KO with data decides the box colors
        const std::vector<double>* values = nullptr;
        for (const auto& ko : entry.ko_ids) {
            auto it = spec.ko_values.find(ko);
            if (it != spec.ko_values.end()) {
                values = &it->second;
                break;
            }
        }
        bool candidate = std::any_of(entry.ko_ids.begin(), entry.ko_ids.end(),
                                     [&](const std::string& ko) {
                                         return spec.candidate_kos.count(ko) > 0;
                                     });
        if (!values && !candidate) continue; // no data: box left untouched

        for (const auto& box : entry.graphics) {
            if (box.shape != kegg::Shape::rectangle) continue;
            int x0 = int(std::lround(box.center_x - box.width / 2));
            int x1 = int(std::lround(box.center_x + box.width / 2));
            int y0 = int(std::lround(box.center_y - box.height / 2));
            int y1 = int(std::lround(box.center_y + box.height / 2));

            if (values) {
                int box_width = x1 - x0 + 1;
                if (box_width < n_conditions) {
                    result.warnings.push_back(
                        "StripeTooNarrow: entry " + std::to_string(entry.entry_id) + " in " +
                        pathway.id.str() + " (" + std::to_string(box_width) + " px for " +
                        std::to_string(n_conditions) + " conditions)");
                }
                for (int c = 0; c < n_conditions; ++c) {
                    int sx0, sx1;
                    if (box_width >= n_conditions) {
                        sx0 = x0 + int(std::int64_t(c) * box_width / n_conditions);
                        sx1 = (c == n_conditions - 1)
                                  ? x1
                                  : x0 + int(std::int64_t(c + 1) * box_width / n_conditions) - 1;
                    } else {
                        sx0 = x0 + c; // degraded 1-px stripes, clipped at the box edge
                        sx1 = (c == n_conditions - 1) ? x1 : sx0;
                        if (sx0 > x1) break;
                    }
                    img::Rgb color = spec.scale.colors[bin_of((*values)[c], spec.scale)];
                    out.fill_rect(sx0, y0, sx1, y1, color);
                }
            }
            if (candidate) outlines.push_back({x0, y0, x1, y1});
        }
    }

    // outlines go last so fills never overpaint them
    for (const auto& o : outlines) {
        out.draw_rect_outline(o.x0 - 1, o.y0 - 1, o.x1 + 1, o.y1 + 1, kCandidateOutline);
        out.draw_rect_outline(o.x0 - 2, o.y0 - 2, o.x1 + 2, o.y1 + 2, kCandidateOutline);
    }

    // legend band: swatches labelled by quantile position, then condition order
    const img::Rgb black{0, 0, 0};
    const int band_top = height;
    const int swatch_w = 28;
    const int swatch_h = 12;
    int x = 8;
    int y = band_top + 6;
    for (int b = 0; b < spec.scale.n_bins; ++b) {
        out.fill_rect(x, y, x + swatch_w - 1, y + swatch_h - 1, spec.scale.colors[b]);
        if (b < int(spec.scale.breakpoints.size())) {
            out.draw_text(x + swatch_w - 2, y + swatch_h + 2,
                          quantile_label(b, spec.scale.n_bins), black);
        }
        x += swatch_w + 14;
    }
    std::string caption = "conditions (left to right): ";
    for (std::size_t i = 0; i < spec.condition_labels.size(); ++i) {
        if (i > 0) caption += ", ";
        caption += spec.condition_labels[i];
    }
    out.draw_text(8, band_top + kLegendBandHeight - 14, caption, black);

    result.png = img::encode_png(out);
    return result;
}

} // namespace pathmap::render
