#pragma once

#include <string>
#include <vector>

#include "taxodev/cluster.hpp"
#include "taxodev/hellwig.hpp"

namespace taxodev::svg {

/// Line chart of every entity's g over the periods.
std::string development_paths(const DevelopmentSeries& series);

/// Dendrogram drawn in leaf order with merge heights on the y axis.
std::string dendrogram(const Dendrogram& tree);

struct SilhouetteBar {
    std::string entity;
    int cluster = 0;
    double width = 0.0;
};

/// Horizontal bars, one per object, in the order given.
std::string silhouette_bars(const std::vector<SilhouetteBar>& bars, double average);

}  // namespace taxodev::svg
