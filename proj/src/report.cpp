#include "taxodev/report.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "taxodev/csv.hpp"
#include "taxodev/error.hpp"
#include "taxodev/normalize.hpp"
#include "taxodev/svg.hpp"

namespace taxodev {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void OutputTree::add(const fs::path& relative, std::string content) { files_[relative] = std::move(content); }

void OutputTree::merge(OutputTree other) {
    for (auto& [path, content] : other.files_) files_[path] = std::move(content);
}

void OutputTree::commit(const fs::path& root) const {
    const fs::path staging = root / ".taxodev-staging";
    try {
        fs::create_directories(root);
        fs::remove_all(staging);
        for (const auto& [relative, content] : files_) {
            const fs::path target = staging / relative;
            fs::create_directories(target.parent_path());
            std::ofstream out(target, std::ios::binary | std::ios::trunc);
            out << content;
            out.close();
            if (!out) throw Error(ErrorKind::Io, "cannot write " + target.string());
        }
        for (const auto& [relative, content] : files_) {
            const fs::path target = root / relative;
            fs::create_directories(target.parent_path());
            fs::rename(staging / relative, target);
        }
        fs::remove_all(staging);
    } catch (const fs::filesystem_error& e) {
        std::error_code ignored;
        fs::remove_all(staging, ignored);
        throw Error(ErrorKind::Io, e.what());
    } catch (...) {
        std::error_code ignored;
        fs::remove_all(staging, ignored);
        throw;
    }
}

std::string format_paths_csv(const DevelopmentSeries& series) {
    auto cells = series.cells;
    std::sort(cells.begin(), cells.end(), [](const DevelopmentCell& a, const DevelopmentCell& b) {
        return std::tie(a.entity, a.period) < std::tie(b.entity, b.period);
    });
    std::ostringstream out;
    out << "entity,period,distance,g,rank\n";
    for (const auto& c : cells)
        out << csv::escape(c.entity) << ',' << c.period << ',' << csv::fixed6(c.distance) << ',' << csv::fixed6(c.g)
            << ',' << c.rank << '\n';
    return out.str();
}

std::string format_change_csv(const ChangeTable& change) {
    std::ostringstream out;
    out << "entity,g_from,g_to,percent_change\n";
    for (const auto& row : change.rows)
        out << csv::escape(row.entity) << ',' << csv::fixed6(row.g_from) << ',' << csv::fixed6(row.g_to) << ','
            << csv::fixed6(row.percent) << '\n';
    return out.str();
}

std::string format_validity_csv(const ValidityReport& report) {
    std::ostringstream out;
    out << "method,index,k,value,optimal\n";
    for (const auto& cell : report.cells) {
        out << to_string(cell.method) << ',' << to_string(cell.index) << ',' << cell.k << ',';
        if (cell.value)
            out << csv::fixed6(*cell.value);
        else
            out << "failed:" << cell.error;
        out << ',' << (cell.optimal ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string format_clusters_csv(const Partition& partition) {
    std::vector<std::size_t> order(partition.ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return partition.ids[a] < partition.ids[b]; });
    std::ostringstream out;
    out << "entity,cluster\n";
    for (auto i : order) out << csv::escape(partition.ids[i]) << ',' << partition.labels[i] << '\n';
    return out.str();
}

std::string format_dendrogram_json(const Dendrogram& tree) {
    ordered_json doc;
    doc["leaves"] = tree.leaves;
    doc["merges"] = ordered_json::array();
    for (const auto& m : tree.merges)
        doc["merges"].push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
    doc["leaf_order"] = tree.leaf_order;
    return doc.dump(2) + "\n";
}

std::vector<SilhouetteRow> silhouette_rows(const Partition& partition, const SilhouetteResult& result) {
    std::vector<SilhouetteRow> rows;
    for (std::size_t i = 0; i < partition.ids.size(); ++i)
        rows.push_back({partition.ids[i], partition.labels[i], result.widths[i]});
    std::sort(rows.begin(), rows.end(), [](const SilhouetteRow& a, const SilhouetteRow& b) {
        if (a.cluster != b.cluster) return a.cluster < b.cluster;
        if (a.width != b.width) return a.width > b.width;
        return a.entity < b.entity;
    });
    return rows;
}

std::string format_silhouette_csv(const std::vector<SilhouetteRow>& rows) {
    std::ostringstream out;
    out << "entity,cluster,width\n";
    for (const auto& r : rows) out << csv::escape(r.entity) << ',' << r.cluster << ',' << csv::fixed6(r.width) << '\n';
    return out.str();
}

namespace {

std::vector<std::string> analysis_variables(const PipelineConfig& config, const IndicatorPanel& panel) {
    if (!config.variables.empty()) return config.variables;
    std::vector<std::string> names;
    for (const auto& meta : panel.catalog()) names.push_back(meta.name);
    return names;
}

std::pair<int, int> hellwig_range(const PipelineConfig& config, const IndicatorPanel& panel) {
    if (panel.periods().empty()) throw Error(ErrorKind::EmptyCrossSection, "panel has no observations");
    const int from = config.hellwig_from.value_or(panel.periods().front());
    const int to = config.hellwig_to.value_or(panel.periods().back());
    if (from > to)
        throw Error(ErrorKind::InvalidConfig,
                    "hellwig_from (" + std::to_string(from) + ") is after hellwig_to (" + std::to_string(to) + ")");
    return {from, to};
}

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
    to.insert(to.end(), from.begin(), from.end());
}

// Rejects anything the panel cannot satisfy before a single file is produced.
void check_against_panel(Command command, const PipelineConfig& config, const IndicatorPanel& panel) {
    for (const auto& name : analysis_variables(config, panel))
        if (!panel.variable_index(name)) throw Error(ErrorKind::UnknownVariable, "variable `" + name + "` is not in the catalog");
    if (command == Command::Hellwig || command == Command::Pipeline) {
        const auto [from, to] = hellwig_range(config, panel);
        for (int p : {from, to})
            if (!panel.period_index(p))
                throw Error(ErrorKind::UnknownPeriod, "period " + std::to_string(p) + " is not in the panel");
    }
    if ((command == Command::Similarity || command == Command::Pipeline) && config.years.empty())
        throw Error(ErrorKind::InvalidConfig, "no analysis years configured");
    for (int year : config.years)
        if (!panel.period_index(year))
            throw Error(ErrorKind::UnknownPeriod, "analysis year " + std::to_string(year) + " is not in the panel");
    for (const auto& name : config.describe_variables)
        if (!panel.variable_index(name)) throw Error(ErrorKind::UnknownVariable, "variable `" + name + "` is not in the catalog");
}

}  // namespace

RunResult run_hellwig(const PipelineConfig& config, const IndicatorPanel& panel) {
    const auto [from, to] = hellwig_range(config, panel);
    const IndicatorPanel window = panel.select(analysis_variables(config, panel), from, to);

    const NormalizedPanel z = pooled_standardize(window);
    const NormalizedPanel oriented = orient(z, window.catalog());
    const PatternVector pattern = development_pattern(oriented);
    const DistanceTable distances = distances_to_pattern(oriented, pattern);
    const DevelopmentSeries series = rank_within_periods(hellwig_measure(distances));
    const ChangeTable change = percent_change(series, from, to);

    RunResult result;
    append(result.notices, distances.notices);
    append(result.notices, change.notices);

    ordered_json audit;
    audit["periods"] = {from, to};
    audit["variables"] = ordered_json::array();
    for (std::size_t v = 0; v < z.variables.size(); ++v)
        audit["variables"].push_back({{"name", z.variables[v].name},
                                      {"direction", to_string(oriented.variables[v].direction)},
                                      {"mean", z.means[v]},
                                      {"sd", z.sds[v]},
                                      {"pattern", pattern.coordinates[v]}});
    audit["distance_mean"] = series.distance_mean;
    audit["distance_sd"] = series.distance_sd;
    audit["d0"] = series.d0;
    audit["cells"] = series.cells.size();
    audit["notices"] = result.notices;

    result.files.add("hellwig_paths.csv", format_paths_csv(series));
    result.files.add("hellwig_change.csv", format_change_csv(change));
    result.files.add("hellwig_audit.json", audit.dump(2) + "\n");
    if (config.emit_svg) result.files.add("hellwig_paths.svg", svg::development_paths(series));
    return result;
}

RunResult run_similarity(const PipelineConfig& config, const IndicatorPanel& panel) {
    const auto variables = analysis_variables(config, panel);
    RunResult result;

    for (int year : config.years) {
        const fs::path dir = std::to_string(year);
        try {
            const YearMatrix cross_section = extract_year(panel, year, variables);
            append(result.notices, cross_section.notices);
            const PointSet points = standardize_columns(cross_section.rows, variables);
            const DistanceMatrix dist = euclidean_matrix(points);
            const ValidityReport report =
                validity_grid(points, dist, config.methods, config.k_min, config.k_max, config.seed, config.restarts);

            OutputTree files;
            files.add(dir / "validity.csv", format_validity_csv(report));
            for (const auto& [key, partition] : report.partitions)
                files.add(dir / ("clusters_" + to_string(key.first) + "_k" + std::to_string(key.second) + ".csv"),
                          format_clusters_csv(partition));
            if (report.dendrogram) {
                files.add(dir / "dendrogram.json", format_dendrogram_json(*report.dendrogram));
                if (config.emit_svg) files.add(dir / "dendrogram.svg", svg::dendrogram(*report.dendrogram));
            }

            // Exported silhouette: the partition with the largest average width.
            const std::pair<Method, int>* chosen = nullptr;
            double chosen_width = 0.0;
            for (Method m : config.methods)
                for (int k : report.ks) {
                    auto it = report.silhouettes.find({m, k});
                    if (it == report.silhouettes.end()) continue;
                    if (!chosen || it->second.average > chosen_width) {
                        chosen = &it->first;
                        chosen_width = it->second.average;
                    }
                }

            ordered_json summary;
            summary["year"] = year;
            summary["entities"] = points.ids;
            summary["dropped"] = cross_section.dropped;
            summary["optima"] = ordered_json::array();
            for (const auto& [key, k] : report.optima)
                summary["optima"].push_back({{"method", to_string(key.first)}, {"index", to_string(key.second)}, {"k", k}});
            std::size_t failed = 0;
            for (const auto& cell : report.cells) failed += cell.value ? 0 : 1;
            summary["failed_cells"] = failed;

            if (chosen) {
                const auto& partition = report.partitions.at(*chosen);
                const auto rows = silhouette_rows(partition, report.silhouettes.at(*chosen));
                files.add(dir / "silhouette.csv", format_silhouette_csv(rows));
                if (config.emit_svg) {
                    std::vector<svg::SilhouetteBar> bars;
                    for (const auto& r : rows) bars.push_back({r.entity, r.cluster, r.width});
                    files.add(dir / "silhouette.svg", svg::silhouette_bars(bars, chosen_width));
                }
                summary["silhouette_partition"] = {
                    {"method", to_string(chosen->first)}, {"k", chosen->second}, {"average_width", chosen_width}};
            } else {
                result.notices.push_back("year " + std::to_string(year) + ": no partition has a defined silhouette");
                summary["silhouette_partition"] = nullptr;
            }
            files.add(dir / "selection.json", summary.dump(2) + "\n");
            result.files.merge(std::move(files));
        } catch (const Error& e) {
            result.failures.push_back("year " + std::to_string(year) + ": " + e.what());
            if (result.exit_code == 0) result.exit_code = exit_code(e.kind());
        }
    }
    return result;
}

RunResult run_describe(const PipelineConfig& config, const IndicatorPanel& panel,
                       const std::map<std::string, std::string>& grouping) {
    std::vector<std::string> variables = config.describe_variables;
    if (variables.empty())
        for (const auto& meta : panel.catalog()) variables.push_back(meta.name);

    RunResult result;
    for (const auto& variable : variables) {
        const GroupSeries series = aggregate_groups(panel, grouping, variable, config.describe_stat);
        append(result.notices, series.notices);
        std::ostringstream out;
        out << "group,period,value\n";
        for (const auto& [key, value] : series.values)
            out << csv::escape(key.first) << ',' << key.second << ',' << csv::fixed6(value) << '\n';
        result.files.add("series_" + variable + ".csv", out.str());
    }
    return result;
}

int run_command(Command command, const PipelineConfig& config, std::ostream& log) {
    try {
        validate(config);
        const auto catalog = config.catalog.empty() ? default_catalog() : load_catalog(config.catalog);
        const IndicatorPanel panel = load_panel(config.panel, catalog);
        check_against_panel(command, config, panel);

        std::map<std::string, std::string> grouping;
        const bool describe = command == Command::Describe || (command == Command::Pipeline && !config.grouping.empty());
        if (describe) {
            if (config.grouping.empty()) throw Error(ErrorKind::InvalidConfig, "describe needs a grouping file");
            grouping = load_grouping(config.grouping);
        }

        RunResult total;
        auto absorb = [&total](RunResult part) {
            total.files.merge(std::move(part.files));
            append(total.notices, part.notices);
            append(total.failures, part.failures);
            if (total.exit_code == 0) total.exit_code = part.exit_code;
        };
        if (describe) absorb(run_describe(config, panel, grouping));
        if (command == Command::Hellwig || command == Command::Pipeline) absorb(run_hellwig(config, panel));
        if (command == Command::Similarity || command == Command::Pipeline) absorb(run_similarity(config, panel));

        total.files.commit(config.out);
        for (const auto& notice : total.notices) log << "notice: " << notice << '\n';
        for (const auto& failure : total.failures) log << "error: " << failure << '\n';
        log << "wrote " << total.files.files().size() << " file(s) to " << config.out.string() << '\n';
        return total.exit_code;
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace taxodev
