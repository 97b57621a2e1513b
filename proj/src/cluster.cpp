#include "taxodev/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "taxodev/error.hpp"

namespace taxodev {

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
    return ss;
}

DistanceMatrix euclidean_matrix(const PointSet& points) {
    const std::size_t n = points.size();
    if (n < 2) throw Error(ErrorKind::TooFewObjects, "need at least two objects, got " + std::to_string(n));
    DistanceMatrix out{points.ids, Matrix(n, n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.d(i, j) = out.d(j, i) = std::sqrt(squared_euclidean(points.coords.row(i), points.coords.row(j)));
    return out;
}

Dendrogram ward_linkage(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    if (n < 2) throw Error(ErrorKind::TooFewObjects, "need at least two objects, got " + std::to_string(n));

    // Slot s holds one active cluster; its node id changes when it absorbs another.
    Matrix cost(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost(i, j) = 0.5 * dist(i, j) * dist(i, j);
    std::vector<std::size_t> node(n), size(n, 1);
    std::iota(node.begin(), node.end(), 0);
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), 0);

    Dendrogram out;
    out.leaves = dist.ids;
    out.merges.reserve(n - 1);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        // Scan pairs in ascending (node, node) order so the first minimum wins ties.
        std::sort(active.begin(), active.end(), [&](std::size_t a, std::size_t b) { return node[a] < node[b]; });
        std::size_t best_a = active[0], best_b = active[1];
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < active.size(); ++x)
            for (std::size_t y = x + 1; y < active.size(); ++y)
                if (cost(active[x], active[y]) < best) {
                    best = cost(active[x], active[y]);
                    best_a = active[x];
                    best_b = active[y];
                }

        const double na = static_cast<double>(size[best_a]);
        const double nb = static_cast<double>(size[best_b]);
        for (std::size_t c : active) {
            if (c == best_a || c == best_b) continue;
            const double nc = static_cast<double>(size[c]);
            const double updated =
                ((na + nc) * cost(best_a, c) + (nb + nc) * cost(best_b, c) - nc * best) / (na + nb + nc);
            cost(best_a, c) = cost(c, best_a) = updated;
        }

        out.merges.push_back({node[best_a], node[best_b], best, size[best_a] + size[best_b]});
        size[best_a] += size[best_b];
        node[best_a] = n + step;
        active.erase(std::find(active.begin(), active.end(), best_b));
    }

    std::vector<std::size_t> stack{2 * n - 2};
    while (!stack.empty()) {
        const std::size_t id = stack.back();
        stack.pop_back();
        if (id < n) {
            out.leaf_order.push_back(id);
        } else {
            const auto& m = out.merges[id - n];
            stack.push_back(m.right);
            stack.push_back(m.left);
        }
    }
    return out;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < labels.size(); ++i) out[static_cast<std::size_t>(labels[i] - 1)].push_back(i);
    return out;
}

namespace {

// Returns raw -> canonical (0-based) label mapping.
std::vector<int> canonical_order(const std::vector<std::string>& ids, const std::vector<int>& raw, int k) {
    std::vector<std::size_t> smallest(static_cast<std::size_t>(k), ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto& s = smallest[static_cast<std::size_t>(raw[i])];
        if (s == ids.size() || ids[i] < ids[s]) s = i;
    }
    for (auto s : smallest)
        if (s == ids.size()) throw std::logic_error("partition has an empty cluster");

    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return ids[smallest[static_cast<std::size_t>(a)]] < ids[smallest[static_cast<std::size_t>(b)]];
    });
    std::vector<int> mapping(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) mapping[static_cast<std::size_t>(order[static_cast<std::size_t>(c)])] = c;
    return mapping;
}

Partition relabel(std::vector<std::string> ids, const std::vector<int>& raw, int k, std::vector<int>& mapping) {
    mapping = canonical_order(ids, raw, k);
    Partition p;
    p.k = k;
    p.labels.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) p.labels[i] = mapping[static_cast<std::size_t>(raw[i])] + 1;
    p.ids = std::move(ids);
    return p;
}

void check_k(int k, std::size_t n) {
    if (k < 2 || static_cast<std::size_t>(k) > n)
        throw Error(ErrorKind::InvalidK, "k = " + std::to_string(k) + " outside [2, " + std::to_string(n) + "]");
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Partition canonical_partition(std::vector<std::string> ids, const std::vector<int>& raw, int k) {
    std::vector<int> mapping;
    return relabel(std::move(ids), raw, k, mapping);
}

Partition cut_dendrogram(const Dendrogram& dendrogram, int k) {
    const std::size_t n = dendrogram.leaves.size();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw Error(ErrorKind::InvalidK, "k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");

    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), 0);
    const std::size_t kept = n - static_cast<std::size_t>(k);
    for (std::size_t i = 0; i < kept; ++i) parent[dendrogram.merges[i].left] = parent[dendrogram.merges[i].right] = n + i;

    std::vector<int> raw(n);
    std::vector<std::size_t> roots;
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
        std::size_t r = leaf;
        while (parent[r] != r) r = parent[r];
        auto it = std::find(roots.begin(), roots.end(), r);
        if (it == roots.end()) {
            roots.push_back(r);
            it = roots.end() - 1;
        }
        raw[leaf] = static_cast<int>(it - roots.begin());
    }
    return canonical_partition(dendrogram.leaves, raw, k);
}

namespace {

std::vector<int> assign_nearest(const PointSet& points, const Matrix& centers, std::vector<double>& dist2) {
    std::vector<int> labels(points.size());
    dist2.assign(points.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centers.rows(); ++c) {
            const double d = squared_euclidean(points.coords.row(i), centers.row(c));
            if (d < best) {
                best = d;
                labels[i] = static_cast<int>(c);
            }
        }
        dist2[i] = best;
    }
    return labels;
}

void repair_empty(const PointSet& points, std::vector<int>& labels, Matrix& centers, std::vector<double>& dist2) {
    const std::size_t k = centers.rows();
    std::vector<std::size_t> counts(k, 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    for (std::size_t empty = 0; empty < k; ++empty) {
        if (counts[empty] != 0) continue;
        std::size_t far = points.size();
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (counts[static_cast<std::size_t>(labels[i])] < 2) continue;
            if (far == points.size() || dist2[i] > dist2[far]) far = i;
        }
        --counts[static_cast<std::size_t>(labels[far])];
        labels[far] = static_cast<int>(empty);
        ++counts[empty];
        dist2[far] = 0.0;
        std::copy(points.coords.row(far).begin(), points.coords.row(far).end(), centers.row(empty).begin());
    }
}

Matrix cluster_means(const PointSet& points, const std::vector<int>& labels, std::size_t k) {
    Matrix means(k, points.dims());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        ++counts[c];
        for (std::size_t j = 0; j < points.dims(); ++j) means(c, j) += points.coords(i, j);
    }
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t j = 0; j < points.dims(); ++j) means(c, j) /= static_cast<double>(counts[c]);
    return means;
}

double wcss_of(const PointSet& points, const std::vector<int>& labels, const Matrix& centers) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        total += squared_euclidean(points.coords.row(i), centers.row(static_cast<std::size_t>(labels[i])));
    return total;
}

}  // namespace

LloydResult lloyd(const PointSet& points, Matrix centers, std::size_t max_iterations) {
    const std::size_t k = centers.rows();
    LloydResult out;
    std::vector<double> dist2;

    out.labels = assign_nearest(points, centers, dist2);
    repair_empty(points, out.labels, centers, dist2);
    out.centers = cluster_means(points, out.labels, k);
    out.history.push_back(wcss_of(points, out.labels, out.centers));

    while (out.iterations < max_iterations) {
        ++out.iterations;
        auto labels = assign_nearest(points, out.centers, dist2);
        repair_empty(points, labels, out.centers, dist2);
        if (labels == out.labels) break;
        out.labels = std::move(labels);
        out.centers = cluster_means(points, out.labels, k);
        out.history.push_back(wcss_of(points, out.labels, out.centers));
    }
    out.wcss = out.history.back();
    return out;
}

Matrix seed_centers(const PointSet& points, int k, std::uint64_t seed) {
    const std::size_t n = points.size();
    check_k(k, n);
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> chosen;
    std::vector<bool> taken(n, false);

    auto first = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    first = std::min(first, n - 1);
    chosen.push_back(first);
    taken[first] = true;

    std::vector<double> nearest(n);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_euclidean(points.coords.row(i), points.coords.row(first));

    while (chosen.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (!taken[i]) total += nearest[i];

        std::size_t pick = n;
        if (total > 0.0) {
            const double target = uniform01(rng) * total;
            double running = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (taken[i] || nearest[i] <= 0.0) continue;
                running += nearest[i];
                pick = i;
                if (running > target) break;
            }
        } else {
            // every remaining point coincides with a center
            for (std::size_t i = 0; i < n && pick == n; ++i)
                if (!taken[i]) pick = i;
        }
        chosen.push_back(pick);
        taken[pick] = true;
        for (std::size_t i = 0; i < n; ++i)
            nearest[i] = std::min(nearest[i], squared_euclidean(points.coords.row(i), points.coords.row(pick)));
    }

    Matrix centers(chosen.size(), points.dims());
    for (std::size_t c = 0; c < chosen.size(); ++c)
        std::copy(points.coords.row(chosen[c]).begin(), points.coords.row(chosen[c]).end(), centers.row(c).begin());
    return centers;
}

Partition kmeans(const PointSet& points, int k, std::uint64_t seed, int restarts) {
    check_k(k, points.size());
    if (restarts < 1) throw Error(ErrorKind::InvalidConfig, "restarts must be at least 1");

    std::optional<LloydResult> best;
    for (int r = 0; r < restarts; ++r) {
        auto run = lloyd(points, seed_centers(points, k, seed + static_cast<std::uint64_t>(r)));
        if (!best || run.wcss < best->wcss) best = std::move(run);
    }

    std::vector<int> mapping;
    Partition p = relabel(points.ids, best->labels, k, mapping);
    Matrix centroids(static_cast<std::size_t>(k), points.dims());
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
        const auto row = best->centers.row(c);
        std::copy(row.begin(), row.end(), centroids.row(static_cast<std::size_t>(mapping[c])).begin());
    }
    p.centroids = std::move(centroids);
    p.objective = best->wcss;
    return p;
}

namespace {

double medoid_cost(const DistanceMatrix& dist, const std::vector<std::size_t>& medoids) {
    double total = 0.0;
    for (std::size_t j = 0; j < dist.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (auto m : medoids) best = std::min(best, dist(j, m));
        total += best;
    }
    return total;
}

struct PamRun {
    std::vector<std::size_t> medoids;
    double objective = 0.0;
    PamTrace trace;
};

// BUILD from a given first medoid, then SWAP.
PamRun build_and_swap(const DistanceMatrix& dist, int k, std::size_t first) {
    const std::size_t n = dist.size();
    std::vector<std::size_t> medoids{first};
    std::vector<bool> is_medoid(n, false);
    is_medoid[first] = true;
    std::vector<double> nearest(n);
    for (std::size_t j = 0; j < n; ++j) nearest[j] = dist(j, first);

    while (medoids.size() < static_cast<std::size_t>(k)) {
        std::size_t pick = n;
        double best_gain = -1.0;
        for (std::size_t c = 0; c < n; ++c) {
            if (is_medoid[c]) continue;
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j) gain += std::max(0.0, nearest[j] - dist(j, c));
            if (gain > best_gain) {
                best_gain = gain;
                pick = c;
            }
        }
        medoids.push_back(pick);
        is_medoid[pick] = true;
        for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], dist(j, pick));
    }

    PamRun run;
    double current = medoid_cost(dist, medoids);
    run.trace.build_objective = current;

    // SWAP: apply the single best strictly improving exchange until none is left.
    for (;;) {
        std::sort(medoids.begin(), medoids.end());
        const double tolerance = 1e-12 * std::max(1.0, current);
        double best = current;
        std::size_t out_pos = medoids.size(), in_obj = n;
        for (std::size_t pos = 0; pos < medoids.size(); ++pos) {
            for (std::size_t h = 0; h < n; ++h) {
                if (is_medoid[h]) continue;
                auto candidate = medoids;
                candidate[pos] = h;
                const double cost = medoid_cost(dist, candidate);
                if (cost < best - tolerance) {
                    best = cost;
                    out_pos = pos;
                    in_obj = h;
                }
            }
        }
        if (in_obj == n) break;
        is_medoid[medoids[out_pos]] = false;
        is_medoid[in_obj] = true;
        medoids[out_pos] = in_obj;
        current = best;
        run.trace.swap_objectives.push_back(current);
    }
    std::sort(medoids.begin(), medoids.end());
    run.medoids = std::move(medoids);
    run.objective = current;
    return run;
}

}  // namespace

Partition pam(const DistanceMatrix& dist, int k, PamTrace* trace) {
    const std::size_t n = dist.size();
    check_k(k, n);

    // The classical start opens on the object with the least total
    // dissimilarity. Every other object is then tried as the first medoid and
    // replaces the incumbent only when strictly better.
    std::size_t classical = 0;
    double least = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) total += dist(i, j);
        if (total < least) {
            least = total;
            classical = i;
        }
    }
    PamRun best = build_and_swap(dist, k, classical);
    for (std::size_t first = 0; first < n; ++first) {
        if (first == classical) continue;
        PamRun run = build_and_swap(dist, k, first);
        if (run.objective < best.objective - 1e-12 * std::max(1.0, best.objective)) best = std::move(run);
    }
    if (trace) *trace = best.trace;

    const auto& medoids = best.medoids;
    std::vector<bool> is_medoid(n, false);
    for (auto m : medoids) is_medoid[m] = true;

    std::vector<int> raw(n);
    double objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (is_medoid[j]) {
            raw[j] = static_cast<int>(std::find(medoids.begin(), medoids.end(), j) - medoids.begin());
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < medoids.size(); ++c)
            if (dist(j, medoids[c]) < best) {
                best = dist(j, medoids[c]);
                raw[j] = static_cast<int>(c);
            }
        objective += best;
    }

    std::vector<int> mapping;
    Partition p = relabel(dist.ids, raw, k, mapping);
    p.medoids.resize(medoids.size());
    for (std::size_t c = 0; c < medoids.size(); ++c) p.medoids[static_cast<std::size_t>(mapping[c])] = medoids[c];
    p.objective = objective;
    return p;
}

double within_cluster_ss(const PointSet& points, const Partition& partition) {
    double total = 0.0;
    for (const auto& cluster : partition.members()) {
        std::vector<double> centroid(points.dims(), 0.0);
        for (auto i : cluster)
            for (std::size_t j = 0; j < points.dims(); ++j) centroid[j] += points.coords(i, j);
        for (auto& c : centroid) c /= static_cast<double>(cluster.size());
        for (auto i : cluster) total += squared_euclidean(points.coords.row(i), centroid);
    }
    return total;
}

}  // namespace taxodev
