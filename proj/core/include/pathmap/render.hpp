#pragma once

#include "pathmap/image.hpp"
#include "pathmap/kegg.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace pathmap::render {

/// Global rank-based value -> color-bin mapping.
struct QuantileScale {
    int n_bins = 5;
    std::vector<double> breakpoints; // n_bins - 1 ascending values
    std::vector<img::Rgb> colors;    // n_bins, light -> dark
};

enum class Aggregation { mean, max, sum };

Aggregation parse_aggregation(const std::string& name);

/// Sequential palettes sampled to n_bins colors.
/// Known names: "ylorrd" (default), "viridis" (colorblind-safe).
std::vector<img::Rgb> palette(const std::string& name, int n_bins);

/// Breakpoints at empirical quantiles j/n_bins of the global value
/// distribution, linearly interpolated between order statistics.
QuantileScale build_quantile_scale(const std::vector<double>& all_values, int n_bins,
                                   const std::string& palette_name = "ylorrd");

/// Number of breakpoints strictly below `value`; ties fall into the
/// lower bin.
int bin_of(double value, const QuantileScale& scale);

/// Collapses the abundances of all genes behind one KO box.
double aggregate_ko_value(const std::vector<double>& gene_values, Aggregation strategy);

struct OverlaySpec {
    const kegg::Pathway* pathway = nullptr;
    const std::string* base_image_png = nullptr;
    std::vector<std::string> condition_labels; // stripe order, left -> right
    // KO -> per-condition display value (same length as condition_labels)
    std::map<std::string, std::vector<double>> ko_values;
    std::set<std::string> candidate_kos; // outlined in red
    QuantileScale scale;
};

struct RenderResult {
    std::string png;
    std::vector<std::string> warnings; // e.g. stripes narrower than 1 px per condition
};

/// Paints per-condition quantile stripes into each KO box, red outlines
/// around candidate KOs, and a legend band appended below the diagram.
RenderResult render_overlay(const OverlaySpec& spec);

constexpr int kLegendBandHeight = 48;
constexpr img::Rgb kCandidateOutline{255, 0, 0};

} // namespace pathmap::render
