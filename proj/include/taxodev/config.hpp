#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taxodev/panel.hpp"
#include "taxodev/validity.hpp"

namespace taxodev {

struct PipelineConfig {
    std::filesystem::path panel;
    std::filesystem::path catalog;   // empty: built-in default catalog
    std::filesystem::path grouping;  // `entity,group` file for describe
    std::vector<int> years{2005, 2009, 2015, 2018};
    std::optional<int> hellwig_from;  // defaults to the first panel period
    std::optional<int> hellwig_to;    // defaults to the last panel period
    std::vector<std::string> variables;  // empty: every catalog variable
    std::vector<std::string> describe_variables;
    GroupStat describe_stat = GroupStat::Sum;
    std::vector<Method> methods{Method::Ward, Method::KMeans, Method::Pam};
    int k_min = 2;
    int k_max = 6;
    std::uint64_t seed = 42;
    int restarts = 50;
    std::filesystem::path out = "out";
    bool emit_svg = false;
};

/// Reads a TOML-style `key = value` file. Section headers are accepted and
/// ignored. Relative paths are resolved against `base_dir`. Throws
/// InvalidConfig.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

std::vector<Method> parse_methods(const std::vector<std::string>& names);

/// Checks the config on its own: k range, restarts, methods, paths present.
void validate(const PipelineConfig& config);

}  // namespace taxodev
