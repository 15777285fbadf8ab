#include "pathmap/profiles.hpp"

#include "pathmap/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pathmap::profiles {

const char* direction_name(Direction d) {
    switch (d) {
    case Direction::up: return "Up";
    case Direction::down: return "Down";
    case Direction::ee: return "EE";
    }
    return "EE";
}

std::string profile_key_of(const std::vector<TransitionCall>& calls) {
    std::string key;
    for (const auto& call : calls) {
        if (!key.empty()) key += '-';
        key += direction_name(call.direction);
    }
    return key;
}

double welch_p_value(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() < 2 || ys.size() < 2) return 1.0;
    auto mean_var = [](const std::vector<double>& v) {
        double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::pair{mean, ss / double(v.size() - 1)};
    };
    auto [mx, vx] = mean_var(xs);
    auto [my, vy] = mean_var(ys);
    double sx = vx / double(xs.size());
    double sy = vy / double(ys.size());
    if (sx + sy == 0.0) return mx == my ? 1.0 : 0.0;
    double t = (mx - my) / std::sqrt(sx + sy);
    double df = (sx + sy) * (sx + sy) /
                (sx * sx / double(xs.size() - 1) + sy * sy / double(ys.size() - 1));
    boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

ProfileAssignment classify_gene(const std::string& gene_id,
                                const std::vector<std::vector<double>>& values_by_timepoint,
                                const ClassifierConfig& config) {
    if (values_by_timepoint.size() < 2) {
        throw Error(errc::too_few_time_points, "gene '" + gene_id + "'");
    }
    for (const auto& group : values_by_timepoint) {
        if (group.empty()) {
            throw Error(errc::empty_replicate_group, "gene '" + gene_id + "'");
        }
    }

    auto mean_of = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    };

    ProfileAssignment assignment;
    assignment.gene_id = gene_id;
    for (std::size_t t = 0; t + 1 < values_by_timepoint.size(); ++t) {
        const auto& prev = values_by_timepoint[t];
        const auto& next = values_by_timepoint[t + 1];
        double eps = config.pseudocount;

        TransitionCall call;
        call.log2_fold_change = std::log2((mean_of(next) + eps) / (mean_of(prev) + eps));

        bool called = call.log2_fold_change >= config.fc_threshold ||
                      call.log2_fold_change <= -config.fc_threshold; // boundary inclusive
        if (called && config.replicate_test && prev.size() >= 2 && next.size() >= 2) {
            auto log_values = [eps](const std::vector<double>& v) {
                std::vector<double> out;
                out.reserve(v.size());
                for (double x : v) out.push_back(std::log2(x + eps));
                return out;
            };
            called = welch_p_value(log_values(prev), log_values(next)) < config.test_alpha;
        }

        call.passed_significance = called;
        call.direction = !called ? Direction::ee
                       : call.log2_fold_change > 0 ? Direction::up
                                                   : Direction::down;
        assignment.calls.push_back(call);
    }
    assignment.profile_key = profile_key_of(assignment.calls);
    return assignment;
}

std::vector<ProfileGroup> group_profiles(const ingest::ExpressionMatrix& matrix,
                                         const TimeSeriesDesign& design,
                                         const ClassifierConfig& config) {
    if (design.time_points.size() < 2) {
        throw Error(errc::too_few_time_points, "design needs >= 2 time points");
    }
    // column indices per time point, matrix column order within a point
    std::vector<std::vector<std::size_t>> columns(design.time_points.size());
    std::map<std::string, std::size_t> point_index;
    for (std::size_t i = 0; i < design.time_points.size(); ++i) {
        point_index[design.time_points[i]] = i;
    }
    for (std::size_t c = 0; c < matrix.n_conditions(); ++c) {
        const std::string& label = matrix.condition_labels[c];
        auto rep = design.replicates.find(label);
        std::string point = rep != design.replicates.end() ? rep->second : label;
        auto it = point_index.find(point);
        if (it != point_index.end()) columns[it->second].push_back(c);
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].empty()) {
            throw Error(errc::empty_replicate_group,
                        "time point '" + design.time_points[i] + "' has no matrix column");
        }
    }

    std::map<std::string, std::vector<std::string>> by_key;
    for (std::size_t g = 0; g < matrix.n_genes(); ++g) {
        std::vector<std::vector<double>> groups;
        groups.reserve(columns.size());
        for (const auto& cols : columns) {
            std::vector<double> values;
            values.reserve(cols.size());
            for (std::size_t c : cols) values.push_back(matrix.at(g, c));
            groups.push_back(std::move(values));
        }
        auto assignment = classify_gene(matrix.gene_ids[g], groups, config);
        bool all_ee = std::all_of(assignment.calls.begin(), assignment.calls.end(),
                                  [](const TransitionCall& c) {
                                      return c.direction == Direction::ee;
                                  });
        if (all_ee) continue; // membership needs one significant change
        by_key[assignment.profile_key].push_back(matrix.gene_ids[g]);
    }

    std::vector<ProfileGroup> groups;
    for (auto& [key, genes] : by_key) {
        std::sort(genes.begin(), genes.end());
        groups.push_back({key, std::move(genes)});
    }
    std::sort(groups.begin(), groups.end(), [](const ProfileGroup& x, const ProfileGroup& y) {
        if (x.genes.size() != y.genes.size()) return x.genes.size() > y.genes.size();
        return x.profile_key < y.profile_key;
    });
    return groups;
}

std::map<std::string, stats::GoEnrichment> profile_enrichment(
    const std::vector<ProfileGroup>& groups,
    const ingest::GoAnnotation& annotation,
    const std::set<std::string>& universe,
    double alpha) {
    std::map<std::string, stats::GoEnrichment> out;
    for (const auto& group : groups) {
        std::set<std::string> selected(group.genes.begin(), group.genes.end());
        out[group.profile_key] = stats::go_enrichment(selected, annotation, universe, alpha);
    }
    return out;
}

} // namespace pathmap::profiles
