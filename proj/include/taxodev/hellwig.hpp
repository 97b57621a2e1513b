#pragma once

#include <string>
#include <vector>

#include "taxodev/normalize.hpp"

namespace taxodev {

/// The development pattern: per-variable maximum oriented z-score over every
/// entity and period.
struct PatternVector {
    std::vector<std::string> variables;
    std::vector<double> coordinates;
};

struct DistanceCell {
    std::string entity;
    int period = 0;
    double distance = 0.0;
};

struct DistanceTable {
    PatternVector pattern;
    /// Sorted by (entity, period).
    std::vector<DistanceCell> cells;
    std::vector<std::string> notices;
};

struct DevelopmentCell {
    std::string entity;
    int period = 0;
    double distance = 0.0;
    double g = 0.0;
    int rank = 0;  // 0 until rank_within_periods runs
};

/// Hellwig measure g = 1 - d / d0 per entity-period, with d0 = mean(d) + 2 sd(d)
/// pooled over the whole distance table.
struct DevelopmentSeries {
    PatternVector pattern;
    double distance_mean = 0.0;
    double distance_sd = 0.0;
    double d0 = 0.0;
    std::vector<DevelopmentCell> cells;
};

/// Throws NotOriented.
PatternVector development_pattern(const NormalizedPanel& normalized);

/// Euclidean distance from each complete entity-period z-vector to the pattern.
/// Incomplete vectors are omitted with a notice. Throws NotOriented or SchemaMismatch.
DistanceTable distances_to_pattern(const NormalizedPanel& normalized, const PatternVector& pattern);

/// Throws DegenerateSpread when fewer than two cells exist or d0 is zero.
DevelopmentSeries hellwig_measure(const DistanceTable& distances);

/// Rank 1 is the largest g in each period; ties go to the smaller entity id.
DevelopmentSeries rank_within_periods(DevelopmentSeries series);

struct PercentChange {
    std::string entity;
    double g_from = 0.0;
    double g_to = 0.0;
    double percent = 0.0;
};

struct ChangeTable {
    int from = 0;
    int to = 0;
    std::vector<PercentChange> rows;
    std::vector<std::string> notices;
};

/// 100 (g_to - g_from) / g_from per entity present in both periods.
/// Throws ZeroBaseline if any retained entity has g_from == 0.
ChangeTable percent_change(const DevelopmentSeries& series, int from, int to);

}  // namespace taxodev
