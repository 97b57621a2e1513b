#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "taxodev/config.hpp"
#include "taxodev/hellwig.hpp"
#include "taxodev/panel.hpp"
#include "taxodev/validity.hpp"

namespace taxodev {

/// Output files held in memory until the whole run has succeeded.
class OutputTree {
  public:
    void add(const std::filesystem::path& relative, std::string content);
    void merge(OutputTree other);

    const std::map<std::filesystem::path, std::string>& files() const noexcept { return files_; }
    bool empty() const noexcept { return files_.empty(); }

    /// Writes every file under `root` through a staging directory and renames
    /// each into place. On failure the staging directory is removed and no
    /// file under `root` is replaced.
    void commit(const std::filesystem::path& root) const;

  private:
    std::map<std::filesystem::path, std::string> files_;
};

struct RunResult {
    OutputTree files;
    std::vector<std::string> notices;
    /// Isolated failures (per-year similarity runs) that did not stop the run.
    std::vector<std::string> failures;
    int exit_code = 0;
};

std::string format_paths_csv(const DevelopmentSeries& series);
std::string format_change_csv(const ChangeTable& change);
std::string format_validity_csv(const ValidityReport& report);
std::string format_clusters_csv(const Partition& partition);
std::string format_dendrogram_json(const Dendrogram& tree);

struct SilhouetteRow {
    std::string entity;
    int cluster = 0;
    double width = 0.0;
};

/// Rows sorted by cluster, then by descending width, then by entity.
std::vector<SilhouetteRow> silhouette_rows(const Partition& partition, const SilhouetteResult& result);
std::string format_silhouette_csv(const std::vector<SilhouetteRow>& rows);

/// Pooled standardize, orient, pattern, distances, measure, ranks, change.
RunResult run_hellwig(const PipelineConfig& config, const IndicatorPanel& panel);

/// Per analysis year: cross-section, within-year z-scores, distances, the
/// validity grid, and the partition exports under `<year>/`.
RunResult run_similarity(const PipelineConfig& config, const IndicatorPanel& panel);

/// Group aggregates written as `series_<variable>.csv`.
RunResult run_describe(const PipelineConfig& config, const IndicatorPanel& panel,
                       const std::map<std::string, std::string>& grouping);

enum class Command { Describe, Hellwig, Similarity, Pipeline };

/// Loads inputs, runs the command, and commits its outputs to config.out.
/// Returns the process exit code; messages go to `log`.
int run_command(Command command, const PipelineConfig& config, std::ostream& log);

}  // namespace taxodev
