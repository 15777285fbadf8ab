#pragma once

#include "pathmap/ingest.hpp"
#include "pathmap/stats.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace pathmap::profiles {

/// Ordered time points over matrix columns. When several columns are
/// replicates of one time point, `replicates` maps column label -> time
/// point label; otherwise each time point is a single column.
struct TimeSeriesDesign {
    std::vector<std::string> time_points;
    std::map<std::string, std::string> replicates;
};

enum class Direction { up, down, ee };

struct TransitionCall {
    Direction direction = Direction::ee;
    double log2_fold_change = 0.0;
    bool passed_significance = false; // false iff direction == ee
};

struct ProfileAssignment {
    std::string gene_id;
    std::vector<TransitionCall> calls;
    std::string profile_key; // e.g. "Up-Up-Down"
};

struct ClassifierConfig {
    double fc_threshold = 1.0; // |log2 FC| >= threshold calls a direction
    double pseudocount = 1.0;
    bool replicate_test = false; // Welch test on log2 replicate values
    double test_alpha = 0.05;
};

const char* direction_name(Direction d);
std::string profile_key_of(const std::vector<TransitionCall>& calls);

/// Calls one gene's consecutive-pair transitions from per-timepoint
/// replicate groups.
ProfileAssignment classify_gene(const std::string& gene_id,
                                const std::vector<std::vector<double>>& values_by_timepoint,
                                const ClassifierConfig& config);

struct ProfileGroup {
    std::string profile_key;
    std::vector<std::string> genes; // sorted
};

/// Groups genes by profile key; all-EE genes are excluded (membership
/// requires at least one significant change). Groups sorted by size
/// descending, then key.
std::vector<ProfileGroup> group_profiles(const ingest::ExpressionMatrix& matrix,
                                         const TimeSeriesDesign& design,
                                         const ClassifierConfig& config);

/// GO enrichment per profile group (each group is its own BH family).
std::map<std::string, stats::GoEnrichment> profile_enrichment(
    const std::vector<ProfileGroup>& groups,
    const ingest::GoAnnotation& annotation,
    const std::set<std::string>& universe,
    double alpha);

/// Two-sided Welch unequal-variance t-test p-value; 1.0 when either side
/// has fewer than two values or both variances vanish.
double welch_p_value(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace pathmap::profiles
