#include "taxodev/panel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "taxodev/csv.hpp"
#include "taxodev/error.hpp"

namespace taxodev {

namespace {

template <typename T>
std::optional<std::size_t> find_sorted(const std::vector<T>& sorted, const T& key) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), key);
    if (it == sorted.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - sorted.begin());
}

void expect_header(const std::vector<std::string>& header, const std::vector<std::string>& expected,
                   const std::filesystem::path& path) {
    if (header.size() < expected.size() || !std::equal(expected.begin(), expected.end(), header.begin())) {
        std::string want;
        for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
        throw Error(ErrorKind::MalformedRow, path.string() + ":1: expected header `" + want + "`");
    }
}

std::string where(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

void atomic_write(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        out << text;
        if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

std::string to_string(Direction direction) {
    return direction == Direction::Stimulant ? "stimulant" : "destimulant";
}

std::vector<VariableMeta> default_catalog() {
    return {
        {"life_penetration", Direction::Stimulant, "% of GDP", "Life premiums written to GDP"},
        {"pc_penetration", Direction::Stimulant, "% of GDP", "Property & casualty premiums written to GDP"},
        {"life_density", Direction::Stimulant, "EUR per capita", "Life premiums per inhabitant"},
        {"pc_density", Direction::Stimulant, "EUR per capita", "Property & casualty premiums per inhabitant"},
        {"assets_per_insurer", Direction::Stimulant, "EUR m", "Total insurance assets per insurance company"},
        {"investment_to_gdp", Direction::Stimulant, "% of GDP", "Insurers' investment portfolio to GDP"},
        {"top5_share_life", Direction::Destimulant, "%", "Market share of the five largest life groups"},
        {"top5_share_pc", Direction::Destimulant, "%", "Market share of the five largest P&C groups"},
        {"insurers_per_million", Direction::Stimulant, "companies per 1m inhabitants",
         "Number of insurance companies per million inhabitants"},
    };
}

IndicatorPanel IndicatorPanel::build(std::vector<VariableMeta> catalog, const std::vector<Observation>& observations) {
    {
        std::set<std::string> names;
        for (const auto& meta : catalog) {
            if (meta.name.empty()) throw Error(ErrorKind::MalformedRow, "empty variable name in catalog");
            if (!names.insert(meta.name).second)
                throw Error(ErrorKind::MalformedRow, "variable `" + meta.name + "` listed twice in catalog");
        }
    }

    IndicatorPanel panel;
    panel.catalog_ = std::move(catalog);

    std::set<std::string> entities;
    std::set<int> periods;
    for (const auto& obs : observations) {
        entities.insert(obs.entity);
        periods.insert(obs.period);
    }
    panel.entities_.assign(entities.begin(), entities.end());
    panel.periods_.assign(periods.begin(), periods.end());
    panel.values_.assign(panel.entities_.size() * panel.periods_.size() * panel.catalog_.size(), std::nullopt);

    for (const auto& obs : observations) {
        auto v = panel.variable_index(obs.variable);
        if (!v) throw Error(ErrorKind::UnknownVariable, "variable `" + obs.variable + "` is not in the catalog");
        if (!std::isfinite(obs.value))
            throw Error(ErrorKind::MalformedRow, "non-finite value for (" + obs.entity + "," +
                                                     std::to_string(obs.period) + "," + obs.variable + ")");
        auto& cell = panel.values_[panel.slot(*panel.entity_index(obs.entity), *panel.period_index(obs.period), *v)];
        if (cell)
            throw Error(ErrorKind::DuplicateObservation, "(" + obs.entity + "," + std::to_string(obs.period) + "," +
                                                             obs.variable + ") appears more than once");
        cell = obs.value;
        ++panel.count_;
    }
    return panel;
}

std::optional<std::size_t> IndicatorPanel::entity_index(const std::string& entity) const {
    return find_sorted(entities_, entity);
}

std::optional<std::size_t> IndicatorPanel::period_index(int period) const { return find_sorted(periods_, period); }

std::optional<std::size_t> IndicatorPanel::variable_index(const std::string& variable) const {
    for (std::size_t v = 0; v < catalog_.size(); ++v)
        if (catalog_[v].name == variable) return v;
    return std::nullopt;
}

std::optional<double> IndicatorPanel::value(const std::string& entity, int period, const std::string& variable) const {
    auto e = entity_index(entity);
    auto p = period_index(period);
    auto v = variable_index(variable);
    if (!e || !p || !v) return std::nullopt;
    return value(*e, *p, *v);
}

std::vector<Observation> IndicatorPanel::observations() const {
    std::vector<Observation> out;
    out.reserve(count_);
    for (std::size_t e = 0; e < entities_.size(); ++e)
        for (std::size_t p = 0; p < periods_.size(); ++p)
            for (std::size_t v = 0; v < catalog_.size(); ++v)
                if (auto x = value(e, p, v)) out.push_back({entities_[e], periods_[p], catalog_[v].name, *x});
    return out;
}

IndicatorPanel IndicatorPanel::select(const std::vector<std::string>& variables, int first_period,
                                      int last_period) const {
    std::set<std::string> wanted;
    for (const auto& name : variables) {
        if (!variable_index(name)) throw Error(ErrorKind::UnknownVariable, "variable `" + name + "` is not in the catalog");
        wanted.insert(name);
    }
    if (!period_index(first_period))
        throw Error(ErrorKind::UnknownPeriod, "period " + std::to_string(first_period) + " is not in the panel");
    if (!period_index(last_period))
        throw Error(ErrorKind::UnknownPeriod, "period " + std::to_string(last_period) + " is not in the panel");

    std::vector<VariableMeta> catalog;
    for (const auto& meta : catalog_)
        if (wanted.count(meta.name)) catalog.push_back(meta);

    std::vector<Observation> kept;
    for (auto& obs : observations())
        if (wanted.count(obs.variable) && obs.period >= first_period && obs.period <= last_period)
            kept.push_back(std::move(obs));
    return build(std::move(catalog), kept);
}

std::vector<VariableMeta> load_catalog(const std::filesystem::path& path) {
    std::vector<std::string> header;
    auto rows = csv::read_file(path, header);
    expect_header(header, {"variable", "direction", "units"}, path);
    const bool has_description = header.size() >= 4 && header[3] == "description";

    std::vector<VariableMeta> catalog;
    std::set<std::string> seen;
    for (const auto& row : rows) {
        if (row.fields.size() < 3)
            throw Error(ErrorKind::MalformedRow, where(path, row.line) + ": expected at least 3 fields");
        VariableMeta meta;
        meta.name = row.fields[0];
        if (row.fields[1] == "stimulant")
            meta.direction = Direction::Stimulant;
        else if (row.fields[1] == "destimulant")
            meta.direction = Direction::Destimulant;
        else
            throw Error(ErrorKind::MalformedRow,
                        where(path, row.line) + ": direction must be `stimulant` or `destimulant`, got `" +
                            row.fields[1] + "`");
        meta.units = row.fields[2];
        if (has_description && row.fields.size() >= 4) meta.description = row.fields[3];
        if (!seen.insert(meta.name).second)
            throw Error(ErrorKind::MalformedRow, where(path, row.line) + ": duplicate variable `" + meta.name + "`");
        catalog.push_back(std::move(meta));
    }
    return catalog;
}

void write_catalog(const std::vector<VariableMeta>& catalog, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "variable,direction,units,description\n";
    for (const auto& meta : catalog)
        out << csv::escape(meta.name) << ',' << to_string(meta.direction) << ',' << csv::escape(meta.units) << ','
            << csv::escape(meta.description) << '\n';
    atomic_write(path, out.str());
}

IndicatorPanel load_panel(const std::filesystem::path& panel_file, const std::vector<VariableMeta>& catalog) {
    std::vector<std::string> header;
    auto rows = csv::read_file(panel_file, header);
    expect_header(header, {"entity", "period", "variable", "value"}, panel_file);

    std::vector<Observation> observations;
    observations.reserve(rows.size());
    std::map<std::tuple<std::string, int, std::string>, std::size_t> first_seen;
    std::set<std::string> known;
    for (const auto& meta : catalog) known.insert(meta.name);

    for (const auto& row : rows) {
        if (row.fields.size() != 4)
            throw Error(ErrorKind::MalformedRow, where(panel_file, row.line) + ": expected 4 fields, got " +
                                                     std::to_string(row.fields.size()));
        Observation obs;
        obs.entity = row.fields[0];
        if (obs.entity.empty()) throw Error(ErrorKind::MalformedRow, where(panel_file, row.line) + ": empty entity");
        if (!csv::parse_int(row.fields[1], obs.period))
            throw Error(ErrorKind::MalformedRow,
                        where(panel_file, row.line) + ": period `" + row.fields[1] + "` is not an integer year");
        obs.variable = row.fields[2];
        if (!csv::parse_double(row.fields[3], obs.value))
            throw Error(ErrorKind::MalformedRow,
                        where(panel_file, row.line) + ": value `" + row.fields[3] + "` is not a finite number");
        if (!known.count(obs.variable))
            throw Error(ErrorKind::UnknownVariable,
                        where(panel_file, row.line) + ": variable `" + obs.variable + "` is not in the catalog");
        auto [it, inserted] = first_seen.emplace(std::make_tuple(obs.entity, obs.period, obs.variable), row.line);
        if (!inserted)
            throw Error(ErrorKind::DuplicateObservation,
                        where(panel_file, row.line) + ": (" + obs.entity + "," + row.fields[1] + "," + obs.variable +
                            ") already given on line " + std::to_string(it->second));
        observations.push_back(std::move(obs));
    }
    return IndicatorPanel::build(catalog, observations);
}

IndicatorPanel load_panel(const std::filesystem::path& panel_file, const std::filesystem::path& meta_file) {
    return load_panel(panel_file, load_catalog(meta_file));
}

std::string format_panel(const IndicatorPanel& panel) {
    std::ostringstream out;
    out << "entity,period,variable,value\n";
    for (const auto& obs : panel.observations())
        out << csv::escape(obs.entity) << ',' << obs.period << ',' << csv::escape(obs.variable) << ','
            << csv::roundtrip(obs.value) << '\n';
    return out.str();
}

void write_panel(const IndicatorPanel& panel, const std::filesystem::path& path) {
    atomic_write(path, format_panel(panel));
}

YearMatrix extract_year(const IndicatorPanel& panel, int period, const std::vector<std::string>& variables) {
    auto p = panel.period_index(period);
    if (!p) throw Error(ErrorKind::UnknownPeriod, "period " + std::to_string(period) + " is not in the panel");

    std::vector<std::size_t> columns;
    for (const auto& name : variables) {
        auto v = panel.variable_index(name);
        if (!v) throw Error(ErrorKind::UnknownVariable, "variable `" + name + "` is not in the catalog");
        columns.push_back(*v);
    }

    YearMatrix out;
    out.period = period;
    out.variables = variables;

    std::vector<std::size_t> retained;
    for (std::size_t e = 0; e < panel.entities().size(); ++e) {
        std::string missing;
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (!panel.value(e, *p, columns[c])) missing += (missing.empty() ? "" : ", ") + variables[c];
        if (missing.empty()) {
            retained.push_back(e);
        } else {
            out.dropped.push_back(panel.entities()[e]);
            out.notices.push_back("period " + std::to_string(period) + ": dropping " + panel.entities()[e] +
                                  " (missing " + missing + ")");
        }
    }
    if (retained.empty())
        throw Error(ErrorKind::EmptyCrossSection,
                    "period " + std::to_string(period) + ": no entity has every requested variable");

    out.rows.coords = Matrix(retained.size(), columns.size());
    for (std::size_t r = 0; r < retained.size(); ++r) {
        out.rows.ids.push_back(panel.entities()[retained[r]]);
        for (std::size_t c = 0; c < columns.size(); ++c) out.rows.coords(r, c) = *panel.value(retained[r], *p, columns[c]);
    }
    return out;
}

GroupSeries aggregate_groups(const IndicatorPanel& panel, const std::map<std::string, std::string>& grouping,
                             const std::string& variable, GroupStat stat) {
    auto v = panel.variable_index(variable);
    if (!v) throw Error(ErrorKind::UnknownVariable, "variable `" + variable + "` is not in the catalog");

    GroupSeries out;
    std::map<std::string, std::vector<std::size_t>> members;
    for (const auto& [entity, group] : grouping) {
        members.try_emplace(group);
        if (auto e = panel.entity_index(entity))
            members[group].push_back(*e);
        else
            out.notices.push_back("grouping lists " + entity + ", which is not in the panel");
    }
    for (const auto& entity : panel.entities())
        if (!grouping.count(entity))
            throw Error(ErrorKind::UnassignedEntity, "entity " + entity + " has no group");
    for (const auto& [group, list] : members)
        if (list.empty()) throw Error(ErrorKind::EmptyGroup, "group `" + group + "` has no panel entities");

    for (const auto& [group, list] : members) {
        for (std::size_t p = 0; p < panel.periods().size(); ++p) {
            double total = 0.0;
            bool complete = true;
            for (auto e : list) {
                auto x = panel.value(e, p, *v);
                if (!x) {
                    complete = false;
                    break;
                }
                total += *x;
            }
            if (!complete) {
                out.notices.push_back("group `" + group + "`, period " + std::to_string(panel.periods()[p]) +
                                      ": skipped, not every member has " + variable);
                continue;
            }
            out.values[{group, panel.periods()[p]}] =
                stat == GroupStat::Sum ? total : total / static_cast<double>(list.size());
        }
    }
    return out;
}

std::map<std::string, std::string> load_grouping(const std::filesystem::path& path) {
    std::vector<std::string> header;
    auto rows = csv::read_file(path, header);
    expect_header(header, {"entity", "group"}, path);
    std::map<std::string, std::string> grouping;
    for (const auto& row : rows) {
        if (row.fields.size() != 2)
            throw Error(ErrorKind::MalformedRow, where(path, row.line) + ": expected 2 fields");
        if (!grouping.emplace(row.fields[0], row.fields[1]).second)
            throw Error(ErrorKind::MalformedRow, where(path, row.line) + ": entity " + row.fields[0] + " grouped twice");
    }
    return grouping;
}

}  // namespace taxodev
