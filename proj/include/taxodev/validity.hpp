#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "taxodev/cluster.hpp"

namespace taxodev {

enum class Method { Ward, KMeans, Pam };
enum class Index { Silhouette, CalinskiHarabasz, Dunn, XieBeni };

std::string to_string(Method method);
std::string to_string(Index index);
std::optional<Method> parse_method(const std::string& name);

inline constexpr Index kAllIndices[] = {Index::Silhouette, Index::CalinskiHarabasz, Index::Dunn, Index::XieBeni};

/// Xie-Beni is minimized; the other three are maximized.
bool lower_is_better(Index index);

struct SilhouetteResult {
    std::vector<double> widths;  // parallel to the partition's ids
    double average = 0.0;
};

/// Kaufman-Rousseeuw silhouette; members of singleton clusters get width 0.
/// Throws IndexUndefined unless 2 <= k <= n-1.
SilhouetteResult silhouette(const DistanceMatrix& dist, const Partition& partition);

/// Pseudo-F [B/(k-1)] / [W/(n-k)]. Throws IndexUndefined for W = 0 or k outside [2, n-1].
double calinski_harabasz(const PointSet& points, const Partition& partition);

/// Smallest single-linkage separation over largest complete diameter.
/// Throws IndexUndefined when every diameter is zero.
double dunn(const DistanceMatrix& dist, const Partition& partition);

/// Crisp Xie-Beni: W / (n * min squared centroid separation).
/// Throws IndexUndefined for coincident centroids.
double xie_beni(const PointSet& points, const Partition& partition);

struct GridCell {
    Method method = Method::Ward;
    Index index = Index::Silhouette;
    int k = 0;
    std::optional<double> value;
    std::string error;  // error tag when value is empty
    bool optimal = false;
};

struct ValidityReport {
    std::vector<Method> methods;
    std::vector<int> ks;
    /// methods x indices x ks, in that nesting order.
    std::vector<GridCell> cells;
    std::map<std::pair<Method, Index>, int> optima;

    std::map<std::pair<Method, int>, Partition> partitions;
    std::map<std::pair<Method, int>, SilhouetteResult> silhouettes;
    std::optional<Dendrogram> dendrogram;

    const GridCell* find(Method method, Index index, int k) const;
};

/// Marks, per (method, index), the best k among defined cells: largest value
/// for maximized indices, smallest for Xie-Beni, smaller k on ties.
void flag_optima(ValidityReport& report);

/// Seed used for the k-means run of one grid cell.
std::uint64_t cell_seed(std::uint64_t seed, Method method, int k);

/// Partitions every (method, k) and scores all four indices. Infeasible k
/// (k >= n) and undefined indices become failed cells. Throws NoMethods or
/// InvalidK (k_min < 2 or k_max < k_min).
ValidityReport validity_grid(const PointSet& points, const DistanceMatrix& dist, const std::vector<Method>& methods,
                             int k_min, int k_max, std::uint64_t seed, int restarts);

}  // namespace taxodev
