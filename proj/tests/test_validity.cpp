#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "taxodev/validity.hpp"

using namespace taxodev;
using namespace taxodev::testing;

namespace {

Partition labelled(const PointSet& points, std::vector<int> labels) {
    int k = *std::max_element(labels.begin(), labels.end());
    std::vector<int> raw;
    for (int l : labels) raw.push_back(l - 1);
    return canonical_partition(points.ids, raw, k);
}

PointSet scaled(PointSet p, double c) {
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.dims(); ++j) p.coords(i, j) *= c;
    return p;
}

}  // namespace

TEST_CASE("indices on {0,1,10,11} split in two") {
    const auto points = points_1d({0, 1, 10, 11});
    const auto dist = euclidean_matrix(points);
    const auto p = labelled(points, {1, 1, 2, 2});

    const auto s = silhouette(dist, p);
    // a = 1; b = 10.5 for the outer points and 9.5 for the inner ones
    CHECK(s.widths[0] == doctest::Approx(9.5 / 10.5).epsilon(1e-12));
    CHECK(s.widths[1] == doctest::Approx(8.5 / 9.5).epsilon(1e-12));
    CHECK(s.widths[2] == doctest::Approx(8.5 / 9.5).epsilon(1e-12));
    CHECK(s.widths[3] == doctest::Approx(9.5 / 10.5).epsilon(1e-12));
    CHECK(std::abs(s.average - 0.899749) <= 1e-6);

    CHECK(std::abs(calinski_harabasz(points, p) - 200.0) <= 1e-9);
    CHECK(std::abs(dunn(dist, p) - 9.0) <= 1e-12);
    CHECK(std::abs(xie_beni(points, p) - 0.0025) <= 1e-12);
}

TEST_CASE("Calinski-Harabasz with a three-way split") {
    const auto points = points_1d({0, 1, 10, 11});
    // B = 30.25 + 20.25 + 2*25 = 100.5, W = 0.5
    CHECK(calinski_harabasz(points, labelled(points, {1, 2, 3, 3})) == doctest::Approx(100.5).epsilon(1e-12));
    CHECK(error_kind([&] { calinski_harabasz(points, labelled(points, {1, 2, 3, 4})); }) == ErrorKind::IndexUndefined);
    const auto dup = points_1d({0, 0, 5, 5});
    CHECK(error_kind([&] { calinski_harabasz(dup, labelled(dup, {1, 1, 2, 2})); }) == ErrorKind::IndexUndefined);
}

TEST_CASE("silhouette conventions and guards") {
    const auto points = points_1d({0, 1, 10});
    const auto dist = euclidean_matrix(points);
    const auto s = silhouette(dist, labelled(points, {1, 1, 2}));
    CHECK(s.widths[2] == 0.0);
    CHECK(error_kind([&] { silhouette(dist, labelled(points, {1, 1, 1})); }) == ErrorKind::IndexUndefined);
    CHECK(error_kind([&] { silhouette(dist, labelled(points, {1, 2, 3})); }) == ErrorKind::IndexUndefined);
}

TEST_CASE("Dunn index") {
    const auto points = points_1d({0, 1, 2, 3});
    CHECK(dunn(euclidean_matrix(points), labelled(points, {1, 1, 2, 2})) == doctest::Approx(1.0));
    CHECK(error_kind([&] { dunn(euclidean_matrix(points), labelled(points, {1, 2, 3, 4})); }) == ErrorKind::IndexUndefined);
}

TEST_CASE("Xie-Beni index") {
    const auto two = points_1d({0, 10});
    CHECK(xie_beni(two, labelled(two, {1, 2})) == 0.0);
    const auto dup = points_1d({4, 4, 4, 4});
    CHECK(error_kind([&] { xie_beni(dup, labelled(dup, {1, 1, 2, 2})); }) == ErrorKind::IndexUndefined);
}

TEST_CASE("index ranges and scale invariance") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const auto points = random_points(rng, 6 + static_cast<std::size_t>(trial % 10), 3);
        const auto dist = euclidean_matrix(points);
        const int k = 2 + trial % 3;
        const auto p = kmeans(points, k, static_cast<std::uint64_t>(trial), 5);

        const auto s = silhouette(dist, p);
        CHECK(s.average >= -1.0);
        CHECK(s.average <= 1.0);
        for (double w : s.widths) {
            CHECK(w >= -1.0);
            CHECK(w <= 1.0);
        }
        const double ch = calinski_harabasz(points, p), dn = dunn(dist, p), xb = xie_beni(points, p);
        CHECK(ch >= 0.0);
        CHECK(dn >= 0.0);
        CHECK(xb >= 0.0);

        const double c = 0.1 + 5.0 * static_cast<double>(trial % 7);
        const auto big = scaled(points, c);
        const auto big_dist = euclidean_matrix(big);
        CHECK(std::abs(silhouette(big_dist, p).average - s.average) < 1e-9);
        CHECK(std::abs(dunn(big_dist, p) - dn) < 1e-9);
        CHECK(calinski_harabasz(big, p) == doctest::Approx(ch).epsilon(1e-9));
        CHECK(xie_beni(big, p) == doctest::Approx(xb).epsilon(1e-9));
    }
}

TEST_CASE("moving clusters apart improves silhouette, Dunn and Xie-Beni") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        auto points = blobs(rng, 6, 2, 2, 1.0);
        const auto p = cut_dendrogram(ward_linkage(euclidean_matrix(points)), 2);
        const auto members = p.members();
        // direction from centroid 1 to centroid 2
        std::vector<double> c1(2, 0.0), c2(2, 0.0);
        for (auto i : members[0])
            for (std::size_t j = 0; j < 2; ++j) c1[j] += points.coords(i, j) / static_cast<double>(members[0].size());
        for (auto i : members[1])
            for (std::size_t j = 0; j < 2; ++j) c2[j] += points.coords(i, j) / static_cast<double>(members[1].size());
        double len = std::hypot(c2[0] - c1[0], c2[1] - c1[1]);

        double sil = silhouette(euclidean_matrix(points), p).average;
        double dn = dunn(euclidean_matrix(points), p);
        double xb = xie_beni(points, p);
        for (int step = 0; step < 4; ++step) {
            for (auto i : members[1])
                for (std::size_t j = 0; j < 2; ++j) points.coords(i, j) += (c2[j] - c1[j]) / len;
            const auto d = euclidean_matrix(points);
            const double sil2 = silhouette(d, p).average, dn2 = dunn(d, p), xb2 = xie_beni(points, p);
            CHECK(sil2 > sil);
            CHECK(dn2 > dn);
            CHECK(xb2 < xb);
            sil = sil2;
            dn = dn2;
            xb = xb2;
        }
    }
}

TEST_CASE("optimum flagging picks max, or min for Xie-Beni") {
    ValidityReport r;
    r.methods = {Method::Pam};
    r.ks = {2, 3, 4};
    r.cells = {{Method::Pam, Index::Silhouette, 2, 0.3, "", false},
               {Method::Pam, Index::Silhouette, 3, 0.5, "", false},
               {Method::Pam, Index::Silhouette, 4, 0.5, "", false},
               {Method::Pam, Index::XieBeni, 2, 0.9, "", false},
               {Method::Pam, Index::XieBeni, 3, std::nullopt, "IndexUndefined", false},
               {Method::Pam, Index::XieBeni, 4, 0.7, "", false},
               {Method::Pam, Index::Dunn, 2, std::nullopt, "IndexUndefined", false}};
    flag_optima(r);
    CHECK(r.optima.at({Method::Pam, Index::Silhouette}) == 3);  // tie goes to the smaller k
    CHECK(r.optima.at({Method::Pam, Index::XieBeni}) == 4);
    CHECK(r.optima.count({Method::Pam, Index::Dunn}) == 0);
    CHECK(r.cells[1].optimal);
    CHECK_FALSE(r.cells[2].optimal);
    CHECK_FALSE(r.cells[4].optimal);
}

TEST_CASE("validity grid shape, failures and guards") {
    std::mt19937_64 rng(5);
    const auto points = blobs(rng, 4, 3, 3);
    const auto dist = euclidean_matrix(points);
    const std::vector<Method> all{Method::Ward, Method::KMeans, Method::Pam};

    const auto report = validity_grid(points, dist, all, 2, 6, 42, 10);
    CHECK(report.cells.size() == 60);
    CHECK(report.optima.size() == 12);
    for (const auto& cell : report.cells) CHECK((cell.value.has_value() || !cell.error.empty()));
    CHECK(report.dendrogram.has_value());
    CHECK(report.partitions.size() == 15);
    // three clean blobs
    CHECK(report.optima.at({Method::Ward, Index::Silhouette}) == 3);
    CHECK(report.optima.at({Method::Pam, Index::CalinskiHarabasz}) == 3);

    // k at or above n fails those cells and keeps going
    const auto small = points_1d({0, 1, 10, 11, 20});
    const auto tight = validity_grid(small, euclidean_matrix(small), all, 2, 6, 42, 10);
    CHECK(tight.cells.size() == 60);
    const auto* cell = tight.find(Method::Pam, Index::Dunn, 5);
    REQUIRE(cell);
    CHECK_FALSE(cell->value);
    CHECK(cell->error == "InvalidK");
    CHECK(tight.find(Method::Ward, Index::Silhouette, 4)->value.has_value());

    CHECK(error_kind([&] { validity_grid(points, dist, {}, 2, 6, 42, 10); }) == ErrorKind::NoMethods);
    CHECK(error_kind([&] { validity_grid(points, dist, all, 1, 6, 42, 10); }) == ErrorKind::InvalidK);
    CHECK(error_kind([&] { validity_grid(points, dist, all, 4, 3, 42, 10); }) == ErrorKind::InvalidK);
}

TEST_CASE("validity grid is deterministic") {
    std::mt19937_64 rng(6);
    const auto points = random_points(rng, 20, 4);
    const auto dist = euclidean_matrix(points);
    const std::vector<Method> all{Method::Ward, Method::KMeans, Method::Pam};
    const auto a = validity_grid(points, dist, all, 2, 6, 42, 20);
    const auto b = validity_grid(points, dist, all, 2, 6, 42, 20);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].value == b.cells[i].value);
        CHECK(a.cells[i].optimal == b.cells[i].optimal);
    }
}
