#pragma once

// Shared fixtures and brute-force oracles for the test suites. Nothing here
// calls into the clustering engines it is used to check.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "taxodev/error.hpp"
#include "taxodev/matrix.hpp"
#include "taxodev/panel.hpp"

namespace taxodev::testing {

/// Kind of the taxodev::Error thrown by fn, or nullopt if it returned normally.
template <typename Fn>
std::optional<ErrorKind> error_kind(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

inline std::string pad_id(std::size_t i) {
    std::string s = std::to_string(i);
    return std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

inline PointSet points_1d(const std::vector<double>& xs) {
    PointSet p{{}, Matrix(xs.size(), 1)};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        p.ids.push_back("p" + pad_id(i));
        p.coords(i, 0) = xs[i];
    }
    return p;
}

inline PointSet random_points(std::mt19937_64& rng, std::size_t n, std::size_t dims) {
    std::normal_distribution<double> normal(0.0, 1.0);
    PointSet p{{}, Matrix(n, dims)};
    for (std::size_t i = 0; i < n; ++i) {
        p.ids.push_back("p" + pad_id(i));
        for (std::size_t j = 0; j < dims; ++j) p.coords(i, j) = normal(rng);
    }
    return p;
}

/// Points drawn around `centers` well-separated blobs.
inline PointSet blobs(std::mt19937_64& rng, std::size_t per_blob, std::size_t centers, std::size_t dims,
                      double spread = 0.3) {
    std::normal_distribution<double> normal(0.0, spread);
    PointSet p{{}, Matrix(per_blob * centers, dims)};
    for (std::size_t c = 0; c < centers; ++c)
        for (std::size_t i = 0; i < per_blob; ++i) {
            const std::size_t row = c * per_blob + i;
            p.ids.push_back("p" + pad_id(row));
            for (std::size_t j = 0; j < dims; ++j) p.coords(row, j) = 6.0 * static_cast<double>((c + j) % centers) + normal(rng);
        }
    return p;
}

inline double sq(double x) { return x * x; }

/// Minimum WCSS over every assignment of n points to k non-empty clusters.
inline double exhaustive_wcss(const PointSet& points, int k) {
    const std::size_t n = points.size();
    std::vector<int> labels(n, 0);
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (int l : labels) ++counts[static_cast<std::size_t>(l)];
        if (std::all_of(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; })) {
            double total = 0.0;
            for (int c = 0; c < k; ++c) {
                for (std::size_t j = 0; j < points.dims(); ++j) {
                    double mean = 0.0;
                    for (std::size_t i = 0; i < n; ++i)
                        if (labels[i] == c) mean += points.coords(i, j);
                    mean /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
                    for (std::size_t i = 0; i < n; ++i)
                        if (labels[i] == c) total += sq(points.coords(i, j) - mean);
                }
            }
            best = std::min(best, total);
        }
        std::size_t pos = 0;
        while (pos < n && ++labels[pos] == k) labels[pos++] = 0;
        if (pos == n) break;
    }
    return best;
}

/// Minimum total dissimilarity to the nearest medoid over all k-subsets.
inline double exhaustive_medoid_cost(const Matrix& d, int k) {
    const std::size_t n = d.rows();
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m < n; ++m)
                if (pick[m]) nearest = std::min(nearest, d(j, m));
            total += nearest;
        }
        best = std::min(best, total);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

/// Country-like codes AA, AB, ... for synthetic panels.
inline std::string entity_code(std::size_t i) {
    std::string s(2, 'A');
    s[0] = static_cast<char>('A' + (i / 26) % 26);
    s[1] = static_cast<char>('A' + i % 26);
    return s;
}

/// entities x years x default-catalog variables, with three latent levels and a
/// slow trend so the panel has structure for both analyses.
inline IndicatorPanel synthetic_panel(std::size_t entities, int first_year, int years, std::uint64_t seed,
                                      std::vector<VariableMeta> catalog = default_catalog()) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> level(entities), growth(entities);
    for (std::size_t e = 0; e < entities; ++e) {
        level[e] = (e % 3 == 0 ? 8.0 : e % 3 == 1 ? 3.0 : -2.0) + noise(rng);
        growth[e] = 0.1 + 0.05 * noise(rng);
    }
    std::vector<Observation> obs;
    for (std::size_t e = 0; e < entities; ++e)
        for (int t = 0; t < years; ++t)
            for (std::size_t v = 0; v < catalog.size(); ++v) {
                const double sign = catalog[v].direction == Direction::Destimulant ? -1.0 : 1.0;
                const double base = 50.0 + 5.0 * static_cast<double>(v);
                const double x = base + sign * (level[e] + growth[e] * t) * (1.0 + 0.2 * static_cast<double>(v)) +
                                 0.8 * noise(rng);
                obs.push_back({entity_code(e), first_year + t, catalog[v].name, x});
            }
    return IndicatorPanel::build(std::move(catalog), obs);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("taxodev-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::size_t count_lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace taxodev::testing
