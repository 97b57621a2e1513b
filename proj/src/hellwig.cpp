#include "taxodev/hellwig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "taxodev/error.hpp"

namespace taxodev {

PatternVector development_pattern(const NormalizedPanel& normalized) {
    if (!normalized.oriented)
        throw Error(ErrorKind::NotOriented, "the development pattern needs destimulants converted first");

    PatternVector pattern;
    for (std::size_t v = 0; v < normalized.variables.size(); ++v) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < normalized.entities.size(); ++e)
            for (std::size_t p = 0; p < normalized.periods.size(); ++p)
                if (auto z = normalized.z(e, p, v)) best = std::max(best, *z);
        pattern.variables.push_back(normalized.variables[v].name);
        pattern.coordinates.push_back(best);
    }
    return pattern;
}

DistanceTable distances_to_pattern(const NormalizedPanel& normalized, const PatternVector& pattern) {
    if (!normalized.oriented)
        throw Error(ErrorKind::NotOriented, "distances are taken on the oriented panel");
    const std::size_t nv = normalized.variables.size();
    bool same = pattern.variables.size() == nv && pattern.coordinates.size() == nv;
    for (std::size_t v = 0; same && v < nv; ++v) same = pattern.variables[v] == normalized.variables[v].name;
    if (!same) throw Error(ErrorKind::SchemaMismatch, "pattern variables differ from the panel's variables");

    DistanceTable out;
    out.pattern = pattern;
    for (std::size_t e = 0; e < normalized.entities.size(); ++e) {
        for (std::size_t p = 0; p < normalized.periods.size(); ++p) {
            double ss = 0.0;
            std::size_t present = 0;
            for (std::size_t v = 0; v < nv; ++v) {
                if (auto z = normalized.z(e, p, v)) {
                    ss += (*z - pattern.coordinates[v]) * (*z - pattern.coordinates[v]);
                    ++present;
                }
            }
            if (present == 0) continue;  // entity not observed in this period at all
            if (present < nv) {
                out.notices.push_back(normalized.entities[e] + " " + std::to_string(normalized.periods[p]) +
                                      ": omitted, " + std::to_string(nv - present) + " variable(s) missing");
                continue;
            }
            out.cells.push_back({normalized.entities[e], normalized.periods[p], std::sqrt(ss)});
        }
    }
    return out;
}

DevelopmentSeries hellwig_measure(const DistanceTable& distances) {
    const auto& cells = distances.cells;
    if (cells.size() < 2)
        throw Error(ErrorKind::DegenerateSpread, "need at least two entity-period distances, got " +
                                                     std::to_string(cells.size()));

    DevelopmentSeries series;
    series.pattern = distances.pattern;
    double sum = 0.0;
    for (const auto& c : cells) sum += c.distance;
    const double n = static_cast<double>(cells.size());
    series.distance_mean = sum / n;
    double ss = 0.0;
    for (const auto& c : cells) ss += (c.distance - series.distance_mean) * (c.distance - series.distance_mean);
    series.distance_sd = std::sqrt(ss / n);
    series.d0 = series.distance_mean + 2.0 * series.distance_sd;
    if (!(series.d0 > 0.0))
        throw Error(ErrorKind::DegenerateSpread, "every entity-period sits on the pattern, d0 = 0");

    series.cells.reserve(cells.size());
    for (const auto& c : cells) series.cells.push_back({c.entity, c.period, c.distance, 1.0 - c.distance / series.d0, 0});
    return series;
}

DevelopmentSeries rank_within_periods(DevelopmentSeries series) {
    std::map<int, std::vector<std::size_t>> by_period;
    for (std::size_t i = 0; i < series.cells.size(); ++i) by_period[series.cells[i].period].push_back(i);

    for (auto& [period, members] : by_period) {
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            const auto& ca = series.cells[a];
            const auto& cb = series.cells[b];
            if (ca.g != cb.g) return ca.g > cb.g;
            return ca.entity < cb.entity;
        });
        for (std::size_t r = 0; r < members.size(); ++r) series.cells[members[r]].rank = static_cast<int>(r + 1);
    }
    return series;
}

ChangeTable percent_change(const DevelopmentSeries& series, int from, int to) {
    std::map<std::string, std::pair<const DevelopmentCell*, const DevelopmentCell*>> ends;
    for (const auto& cell : series.cells) {
        if (cell.period == from) ends[cell.entity].first = &cell;
        if (cell.period == to) ends[cell.entity].second = &cell;
    }

    ChangeTable table;
    table.from = from;
    table.to = to;
    for (const auto& [entity, pair] : ends) {
        const auto [start, end] = pair;
        if (!start || !end) {
            table.notices.push_back(entity + ": omitted from change table, no value for " +
                                    std::to_string(start ? to : from));
            continue;
        }
        if (start->g == 0.0)
            throw Error(ErrorKind::ZeroBaseline, entity + " has g = 0 in " + std::to_string(from));
        table.rows.push_back({entity, start->g, end->g, 100.0 * (end->g - start->g) / start->g});
    }
    return table;
}

}  // namespace taxodev
