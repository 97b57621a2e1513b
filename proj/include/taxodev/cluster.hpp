#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taxodev/matrix.hpp"

namespace taxodev {

/// Symmetric dissimilarities with a zero diagonal.
struct DistanceMatrix {
    std::vector<std::string> ids;
    Matrix d;

    std::size_t size() const noexcept { return ids.size(); }
    double operator()(std::size_t i, std::size_t j) const { return d(i, j); }
};

/// Pairwise Euclidean distances. Throws TooFewObjects for fewer than two rows.
DistanceMatrix euclidean_matrix(const PointSet& points);

/// One agglomeration step. Leaves are nodes 0..n-1; merge i creates node n+i.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;
};

struct Dendrogram {
    std::vector<std::string> leaves;
    std::vector<Merge> merges;
    /// Leaves in left-to-right plotting order.
    std::vector<std::size_t> leaf_order;
};

/// Ward agglomeration on squared-Euclidean merge costs with Lance-Williams
/// updates. Heights are the merge costs. Throws TooFewObjects.
Dendrogram ward_linkage(const DistanceMatrix& dist);

/// Flat assignment with canonical labels: cluster 1 holds the smallest id,
/// cluster 2 the smallest id not in cluster 1, and so on.
struct Partition {
    std::vector<std::string> ids;
    std::vector<int> labels;  // 1..k, parallel to ids
    int k = 0;
    std::optional<double> objective;
    /// k-means: one centroid row per cluster.
    std::optional<Matrix> centroids;
    /// PAM: object index of each cluster's medoid.
    std::vector<std::size_t> medoids;

    std::vector<std::vector<std::size_t>> members() const;
};

/// Relabels clusters into canonical order, permuting representatives along.
/// `raw` labels may be any values in [0, k).
Partition canonical_partition(std::vector<std::string> ids, const std::vector<int>& raw, int k);

/// Undoes the last k-1 merges. Throws InvalidK unless 1 <= k <= n.
Partition cut_dendrogram(const Dendrogram& dendrogram, int k);

struct LloydResult {
    std::vector<int> labels;  // 0-based cluster index per point
    Matrix centers;
    double wcss = 0.0;
    /// WCSS after every update step, starting with the initial assignment.
    std::vector<double> history;
    std::size_t iterations = 0;
};

/// Lloyd iterations from the given centers until assignments stop changing.
/// Assignment ties go to the lowest cluster index; an empty cluster is
/// reseeded with the point farthest from its centroid.
LloydResult lloyd(const PointSet& points, Matrix centers, std::size_t max_iterations = 1000);

/// k-means++ style D^2 seeding driven by a seeded generator.
Matrix seed_centers(const PointSet& points, int k, std::uint64_t seed);

/// Best of `restarts` seeded Lloyd runs by WCSS; restart r uses seed + r.
/// Throws InvalidK unless 2 <= k <= n.
Partition kmeans(const PointSet& points, int k, std::uint64_t seed, int restarts);

/// Detail of a PAM run: BUILD cost and the objective after each applied swap.
struct PamTrace {
    double build_objective = 0.0;
    std::vector<double> swap_objectives;
};

/// Kaufman-Rousseeuw BUILD + SWAP on the dissimilarities, repeated with each
/// object as the first BUILD medoid; the classical start wins ties. Throws InvalidK
/// unless 2 <= k <= n.
Partition pam(const DistanceMatrix& dist, int k, PamTrace* trace = nullptr);

double within_cluster_ss(const PointSet& points, const Partition& partition);

}  // namespace taxodev
