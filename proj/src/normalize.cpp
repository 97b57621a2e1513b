#include "taxodev/normalize.hpp"

#include <cmath>

#include "taxodev/error.hpp"

namespace taxodev {

namespace {

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

// Two-pass mean and population sd.
template <typename Values>
Moments moments(const Values& xs) {
    Moments m;
    for (double x : xs) {
        m.mean += x;
        ++m.n;
    }
    if (m.n == 0) return m;
    m.mean /= static_cast<double>(m.n);
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(m.n));
    return m;
}

bool has_two_distinct(const std::vector<double>& xs) {
    for (double x : xs)
        if (x != xs.front()) return true;
    return false;
}

}  // namespace

NormalizedPanel pooled_standardize(const IndicatorPanel& panel) {
    NormalizedPanel out;
    out.entities = panel.entities();
    out.periods = panel.periods();
    out.variables = panel.catalog();
    out.values.assign(out.entities.size() * out.periods.size() * out.variables.size(), std::nullopt);

    const std::size_t ne = out.entities.size();
    const std::size_t np = out.periods.size();
    for (std::size_t v = 0; v < out.variables.size(); ++v) {
        std::vector<double> pooled;
        for (std::size_t e = 0; e < ne; ++e)
            for (std::size_t p = 0; p < np; ++p)
                if (auto x = panel.value(e, p, v)) pooled.push_back(*x);

        if (pooled.size() < 2 || !has_two_distinct(pooled))
            throw Error(ErrorKind::DegenerateVariable,
                        "variable `" + out.variables[v].name + "` has fewer than two distinct values");
        const auto m = moments(pooled);
        if (!(m.sd > 0.0))
            throw Error(ErrorKind::DegenerateVariable, "variable `" + out.variables[v].name + "` has zero variance");
        out.means.push_back(m.mean);
        out.sds.push_back(m.sd);

        for (std::size_t e = 0; e < ne; ++e)
            for (std::size_t p = 0; p < np; ++p)
                if (auto x = panel.value(e, p, v)) out.z(e, p, v) = (*x - m.mean) / m.sd;
    }
    return out;
}

NormalizedPanel orient(NormalizedPanel normalized, const std::vector<VariableMeta>& catalog) {
    if (normalized.oriented) throw Error(ErrorKind::DoubleOrientation, "panel is already oriented");

    for (std::size_t v = 0; v < normalized.variables.size(); ++v) {
        const VariableMeta* meta = nullptr;
        for (const auto& candidate : catalog)
            if (candidate.name == normalized.variables[v].name) meta = &candidate;
        if (!meta)
            throw Error(ErrorKind::UnknownVariable,
                        "no direction given for variable `" + normalized.variables[v].name + "`");
        normalized.variables[v].direction = meta->direction;
        if (meta->direction != Direction::Destimulant) continue;
        for (std::size_t e = 0; e < normalized.entities.size(); ++e)
            for (std::size_t p = 0; p < normalized.periods.size(); ++p)
                if (auto& cell = normalized.z(e, p, v)) *cell = -*cell;
    }
    normalized.oriented = true;
    return normalized;
}

PointSet standardize_columns(const PointSet& points, const std::vector<std::string>& column_names) {
    PointSet out{points.ids, Matrix(points.size(), points.dims())};
    for (std::size_t c = 0; c < points.dims(); ++c) {
        std::vector<double> column(points.size());
        for (std::size_t r = 0; r < points.size(); ++r) column[r] = points.coords(r, c);
        const std::string name = c < column_names.size() ? column_names[c] : "#" + std::to_string(c);
        if (column.size() < 2 || !has_two_distinct(column))
            throw Error(ErrorKind::DegenerateVariable, "variable `" + name + "` is constant in this cross-section");
        const auto m = moments(column);
        for (std::size_t r = 0; r < points.size(); ++r) out.coords(r, c) = (column[r] - m.mean) / m.sd;
    }
    return out;
}

}  // namespace taxodev
