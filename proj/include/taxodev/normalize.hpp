#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "taxodev/matrix.hpp"
#include "taxodev/panel.hpp"

namespace taxodev {

/// Pooled z-scores on the same (entity, period, variable) grid as the source
/// panel. Keeps the per-variable pooled mean and population sd for audit.
struct NormalizedPanel {
    std::vector<std::string> entities;
    std::vector<int> periods;
    std::vector<VariableMeta> variables;
    std::vector<double> means;
    std::vector<double> sds;
    bool oriented = false;

    std::optional<double> z(std::size_t entity, std::size_t period, std::size_t variable) const {
        return values[(entity * periods.size() + period) * variables.size() + variable];
    }
    std::optional<double>& z(std::size_t entity, std::size_t period, std::size_t variable) {
        return values[(entity * periods.size() + period) * variables.size() + variable];
    }

    std::vector<std::optional<double>> values;
};

/// z = (x - mean) / sd with mean and population sd pooled over every entity
/// and period of each variable. Throws DegenerateVariable for a variable with
/// fewer than two distinct values.
NormalizedPanel pooled_standardize(const IndicatorPanel& panel);

/// Negates destimulant z-scores. `catalog` supplies directions by name.
/// Throws DoubleOrientation or UnknownVariable.
NormalizedPanel orient(NormalizedPanel normalized, const std::vector<VariableMeta>& catalog);

/// Column-wise z-scores of a cross-section (population sd). Throws
/// DegenerateVariable naming the first constant column.
PointSet standardize_columns(const PointSet& points, const std::vector<std::string>& column_names);

}  // namespace taxodev
