#include "taxodev/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "taxodev/error.hpp"

namespace taxodev {

std::string to_string(Method method) {
    switch (method) {
        case Method::Ward: return "ward";
        case Method::KMeans: return "kmeans";
        case Method::Pam: return "pam";
    }
    return "?";
}

std::string to_string(Index index) {
    switch (index) {
        case Index::Silhouette: return "silhouette";
        case Index::CalinskiHarabasz: return "calinski_harabasz";
        case Index::Dunn: return "dunn";
        case Index::XieBeni: return "xie_beni";
    }
    return "?";
}

std::optional<Method> parse_method(const std::string& name) {
    if (name == "ward") return Method::Ward;
    if (name == "kmeans") return Method::KMeans;
    if (name == "pam") return Method::Pam;
    return std::nullopt;
}

bool lower_is_better(Index index) { return index == Index::XieBeni; }

namespace {

void require_k(const Partition& p, int lo, std::size_t hi, const char* what) {
    if (p.k < lo || static_cast<std::size_t>(p.k) > hi)
        throw Error(ErrorKind::IndexUndefined, std::string(what) + " is undefined for k = " + std::to_string(p.k) +
                                                   " with n = " + std::to_string(p.labels.size()));
}

Matrix centroids_of(const PointSet& points, const Partition& p) {
    Matrix c(static_cast<std::size_t>(p.k), points.dims());
    std::vector<std::size_t> counts(static_cast<std::size_t>(p.k), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto l = static_cast<std::size_t>(p.labels[i] - 1);
        ++counts[l];
        for (std::size_t j = 0; j < points.dims(); ++j) c(l, j) += points.coords(i, j);
    }
    for (std::size_t l = 0; l < counts.size(); ++l)
        for (std::size_t j = 0; j < points.dims(); ++j) c(l, j) /= static_cast<double>(counts[l]);
    return c;
}

double within_ss(const PointSet& points, const Partition& p, const Matrix& centroids) {
    double w = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        w += squared_euclidean(points.coords.row(i), centroids.row(static_cast<std::size_t>(p.labels[i] - 1)));
    return w;
}

}  // namespace

SilhouetteResult silhouette(const DistanceMatrix& dist, const Partition& partition) {
    const std::size_t n = dist.size();
    require_k(partition, 2, n - 1, "silhouette");
    const auto k = static_cast<std::size_t>(partition.k);
    std::vector<std::size_t> counts(k, 0);
    for (int l : partition.labels) ++counts[static_cast<std::size_t>(l - 1)];

    SilhouetteResult out;
    out.widths.assign(n, 0.0);
    std::vector<double> sums(k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(partition.labels[i] - 1);
        if (counts[own] < 2) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) sums[static_cast<std::size_t>(partition.labels[j] - 1)] += dist(i, j);
        const double a = sums[own] / static_cast<double>(counts[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c)
            if (c != own) b = std::min(b, sums[c] / static_cast<double>(counts[c]));
        const double scale = std::max(a, b);
        out.widths[i] = scale > 0.0 ? (b - a) / scale : 0.0;
    }
    for (double w : out.widths) out.average += w;
    out.average /= static_cast<double>(n);
    return out;
}

double calinski_harabasz(const PointSet& points, const Partition& partition) {
    const std::size_t n = points.size();
    require_k(partition, 2, n - 1, "Calinski-Harabasz");
    const Matrix centroids = centroids_of(points, partition);

    std::vector<double> grand(points.dims(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < points.dims(); ++j) grand[j] += points.coords(i, j);
    for (auto& g : grand) g /= static_cast<double>(n);

    std::vector<std::size_t> counts(static_cast<std::size_t>(partition.k), 0);
    for (int l : partition.labels) ++counts[static_cast<std::size_t>(l - 1)];
    double between = 0.0;
    for (std::size_t c = 0; c < counts.size(); ++c)
        between += static_cast<double>(counts[c]) * squared_euclidean(centroids.row(c), grand);
    const double within = within_ss(points, partition, centroids);
    if (!(within > 0.0))
        throw Error(ErrorKind::IndexUndefined, "Calinski-Harabasz is undefined with zero within-cluster scatter");

    const double k = partition.k;
    return (between / (k - 1.0)) / (within / (static_cast<double>(n) - k));
}

double dunn(const DistanceMatrix& dist, const Partition& partition) {
    const std::size_t n = dist.size();
    require_k(partition, 2, n, "Dunn index");
    double separation = std::numeric_limits<double>::infinity();
    double diameter = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (partition.labels[i] == partition.labels[j])
                diameter = std::max(diameter, dist(i, j));
            else
                separation = std::min(separation, dist(i, j));
        }
    if (!(diameter > 0.0))
        throw Error(ErrorKind::IndexUndefined, "Dunn index is undefined when every cluster diameter is zero");
    return separation / diameter;
}

double xie_beni(const PointSet& points, const Partition& partition) {
    const std::size_t n = points.size();
    require_k(partition, 2, n, "Xie-Beni index");
    const Matrix centroids = centroids_of(points, partition);
    double separation = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < centroids.rows(); ++a)
        for (std::size_t b = a + 1; b < centroids.rows(); ++b)
            separation = std::min(separation, squared_euclidean(centroids.row(a), centroids.row(b)));
    if (!(separation > 0.0))
        throw Error(ErrorKind::IndexUndefined, "Xie-Beni index is undefined for coincident centroids");
    return within_ss(points, partition, centroids) / (static_cast<double>(n) * separation);
}

const GridCell* ValidityReport::find(Method method, Index index, int k) const {
    for (const auto& cell : cells)
        if (cell.method == method && cell.index == index && cell.k == k) return &cell;
    return nullptr;
}

void flag_optima(ValidityReport& report) {
    report.optima.clear();
    std::map<std::pair<Method, Index>, GridCell*> best;
    for (auto& cell : report.cells) {
        cell.optimal = false;
        if (!cell.value) continue;
        auto& slot = best[{cell.method, cell.index}];
        if (!slot) {
            slot = &cell;
            continue;
        }
        const bool better = lower_is_better(cell.index) ? *cell.value < *slot->value : *cell.value > *slot->value;
        if (better || (*cell.value == *slot->value && cell.k < slot->k)) slot = &cell;
    }
    for (auto& [key, cell] : best) {
        cell->optimal = true;
        report.optima[key] = cell->k;
    }
}

std::uint64_t cell_seed(std::uint64_t seed, Method method, int k) {
    return seed ^ (static_cast<std::uint64_t>(method) << 32) ^ static_cast<std::uint64_t>(k);
}

ValidityReport validity_grid(const PointSet& points, const DistanceMatrix& dist, const std::vector<Method>& methods,
                             int k_min, int k_max, std::uint64_t seed, int restarts) {
    if (methods.empty()) throw Error(ErrorKind::NoMethods, "no clustering method requested");
    if (k_min < 2 || k_max < k_min)
        throw Error(ErrorKind::InvalidK,
                    "need 2 <= k_min <= k_max, got [" + std::to_string(k_min) + ", " + std::to_string(k_max) + "]");
    if (dist.size() != points.size()) throw Error(ErrorKind::SchemaMismatch, "distance matrix and points differ in size");

    ValidityReport report;
    report.methods = methods;
    for (int k = k_min; k <= k_max; ++k) report.ks.push_back(k);
    const std::size_t n = points.size();

    if (std::find(methods.begin(), methods.end(), Method::Ward) != methods.end() && n >= 2)
        report.dendrogram = ward_linkage(dist);

    for (Method method : methods) {
        // index -> k -> cell, so the grid nests methods x indices x ks
        std::map<Index, std::vector<GridCell>> rows;
        for (int k : report.ks) {
            std::optional<Partition> partition;
            std::string failure;
            if (static_cast<std::size_t>(k) >= n) {
                failure = "InvalidK";
            } else {
                try {
                    switch (method) {
                        case Method::Ward: partition = cut_dendrogram(*report.dendrogram, k); break;
                        case Method::KMeans: partition = kmeans(points, k, cell_seed(seed, method, k), restarts); break;
                        case Method::Pam: partition = pam(dist, k); break;
                    }
                } catch (const Error& e) {
                    failure = std::string(to_string(e.kind()));
                }
            }

            for (Index index : kAllIndices) {
                GridCell cell{method, index, k, std::nullopt, failure, false};
                if (partition) {
                    try {
                        switch (index) {
                            case Index::Silhouette: {
                                auto s = silhouette(dist, *partition);
                                cell.value = s.average;
                                report.silhouettes[{method, k}] = std::move(s);
                                break;
                            }
                            case Index::CalinskiHarabasz: cell.value = calinski_harabasz(points, *partition); break;
                            case Index::Dunn: cell.value = dunn(dist, *partition); break;
                            case Index::XieBeni: cell.value = xie_beni(points, *partition); break;
                        }
                    } catch (const Error& e) {
                        cell.error = std::string(to_string(e.kind()));
                    }
                }
                rows[index].push_back(std::move(cell));
            }
            if (partition) report.partitions.emplace(std::make_pair(method, k), std::move(*partition));
        }
        for (Index index : kAllIndices)
            for (auto& cell : rows[index]) report.cells.push_back(std::move(cell));
    }
    flag_optima(report);
    return report;
}

}  // namespace taxodev
