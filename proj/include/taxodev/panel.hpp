#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "taxodev/matrix.hpp"

namespace taxodev {

enum class Direction { Stimulant, Destimulant };

std::string to_string(Direction direction);

struct VariableMeta {
    std::string name;
    Direction direction = Direction::Stimulant;
    std::string units;
    std::string description;

    bool operator==(const VariableMeta&) const = default;
};

/// The nine insurance-market diagnostic variables. Both top-5 market-share
/// concentration measures are destimulants; everything else is a stimulant.
std::vector<VariableMeta> default_catalog();

struct Observation {
    std::string entity;
    int period = 0;
    std::string variable;
    double value = 0.0;

    bool operator==(const Observation&) const = default;
};

/// Sparse (entity, period, variable) -> value table with its variable catalog.
/// Entities and periods are kept sorted ascending; the catalog keeps its given
/// order. Immutable once built.
class IndicatorPanel {
  public:
    /// Validates and builds a panel. Throws DuplicateObservation,
    /// UnknownVariable, or MalformedRow (non-finite value, duplicate catalog name).
    static IndicatorPanel build(std::vector<VariableMeta> catalog, const std::vector<Observation>& observations);

    const std::vector<std::string>& entities() const noexcept { return entities_; }
    const std::vector<int>& periods() const noexcept { return periods_; }
    const std::vector<VariableMeta>& catalog() const noexcept { return catalog_; }

    std::optional<std::size_t> entity_index(const std::string& entity) const;
    std::optional<std::size_t> period_index(int period) const;
    std::optional<std::size_t> variable_index(const std::string& variable) const;

    std::optional<double> value(std::size_t entity, std::size_t period, std::size_t variable) const {
        return values_[slot(entity, period, variable)];
    }
    std::optional<double> value(const std::string& entity, int period, const std::string& variable) const;

    std::size_t observation_count() const noexcept { return count_; }

    /// All observations in (entity, period, catalog order) order.
    std::vector<Observation> observations() const;

    /// Restricts to a variable subset (catalog order preserved) and an
    /// inclusive period range. Throws UnknownVariable or UnknownPeriod.
    IndicatorPanel select(const std::vector<std::string>& variables, int first_period, int last_period) const;

  private:
    std::size_t slot(std::size_t e, std::size_t p, std::size_t v) const noexcept {
        return (e * periods_.size() + p) * catalog_.size() + v;
    }

    std::vector<std::string> entities_;
    std::vector<int> periods_;
    std::vector<VariableMeta> catalog_;
    std::vector<std::optional<double>> values_;
    std::size_t count_ = 0;
};

std::vector<VariableMeta> load_catalog(const std::filesystem::path& path);
void write_catalog(const std::vector<VariableMeta>& catalog, const std::filesystem::path& path);

IndicatorPanel load_panel(const std::filesystem::path& panel_file, const std::vector<VariableMeta>& catalog);
IndicatorPanel load_panel(const std::filesystem::path& panel_file, const std::filesystem::path& meta_file);

/// Long-format text with shortest round-trip reals; reloading gives an identical panel.
std::string format_panel(const IndicatorPanel& panel);
void write_panel(const IndicatorPanel& panel, const std::filesystem::path& path);

/// Dense cross-section of one period.
struct YearMatrix {
    int period = 0;
    std::vector<std::string> variables;
    PointSet rows;
    /// Entities left out because a requested variable was missing.
    std::vector<std::string> dropped;
    std::vector<std::string> notices;

    const std::vector<std::string>& entities() const noexcept { return rows.ids; }
};

/// Throws UnknownPeriod, UnknownVariable, or EmptyCrossSection.
YearMatrix extract_year(const IndicatorPanel& panel, int period, const std::vector<std::string>& variables);

enum class GroupStat { Sum, Mean };

struct GroupSeries {
    /// (group, period) -> aggregated value, only where every member has a value.
    std::map<std::pair<std::string, int>, double> values;
    std::vector<std::string> notices;
};

/// Throws UnassignedEntity, EmptyGroup, or UnknownVariable.
GroupSeries aggregate_groups(const IndicatorPanel& panel, const std::map<std::string, std::string>& grouping,
                             const std::string& variable, GroupStat stat);

/// Reads an `entity,group` file.
std::map<std::string, std::string> load_grouping(const std::filesystem::path& path);

}  // namespace taxodev
