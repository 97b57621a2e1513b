#include "taxodev/config.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "taxodev/csv.hpp"
#include "taxodev/error.hpp"

namespace taxodev {

namespace {

using Inputs = std::vector<std::string>;

const std::string& single(const std::string& key, const Inputs& inputs) {
    if (inputs.size() != 1) throw Error(ErrorKind::InvalidConfig, key + ": expected a single value");
    return inputs.front();
}

int to_int(const std::string& key, const Inputs& inputs) {
    const auto& value = single(key, inputs);
    int out = 0;
    if (!csv::parse_int(value, out)) throw Error(ErrorKind::InvalidConfig, key + ": `" + value + "` is not an integer");
    return out;
}

bool to_bool(const std::string& key, const Inputs& inputs) {
    const auto& value = single(key, inputs);
    if (value == "true") return true;
    if (value == "false") return false;
    throw Error(ErrorKind::InvalidConfig, key + ": expected true or false, got `" + value + "`");
}

std::filesystem::path to_path(const std::string& key, const Inputs& inputs, const std::filesystem::path& base) {
    std::filesystem::path p = single(key, inputs);
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return base / p;
}

}  // namespace

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> methods;
    for (const auto& name : names) {
        auto m = parse_method(name);
        if (!m) throw Error(ErrorKind::InvalidConfig, "unknown method `" + name + "` (expected ward, kmeans, pam)");
        methods.push_back(*m);
    }
    return methods;
}

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    std::vector<CLI::ConfigItem> items;
    try {
        std::istringstream in{std::string(text)};
        items = CLI::ConfigTOML{}.from_config(in);
    } catch (const CLI::Error& e) {
        throw Error(ErrorKind::InvalidConfig, e.what());
    }

    PipelineConfig config;
    for (const auto& item : items) {
        const auto& key = item.name;
        const auto& v = item.inputs;
        if (key == "++" || key == "--") continue;  // section markers

        if (key == "panel") config.panel = to_path(key, v, base_dir);
        else if (key == "catalog") config.catalog = to_path(key, v, base_dir);
        else if (key == "grouping") config.grouping = to_path(key, v, base_dir);
        else if (key == "out") config.out = to_path(key, v, base_dir);
        else if (key == "years") {
            config.years.clear();
            for (const auto& year : v) config.years.push_back(to_int(key, {year}));
        }
        else if (key == "hellwig_from") config.hellwig_from = to_int(key, v);
        else if (key == "hellwig_to") config.hellwig_to = to_int(key, v);
        else if (key == "variables") config.variables = v;
        else if (key == "describe_variables") config.describe_variables = v;
        else if (key == "describe_stat") {
            const auto& stat = single(key, v);
            if (stat == "sum") config.describe_stat = GroupStat::Sum;
            else if (stat == "mean") config.describe_stat = GroupStat::Mean;
            else throw Error(ErrorKind::InvalidConfig, "describe_stat must be sum or mean, got `" + stat + "`");
        }
        else if (key == "methods") config.methods = parse_methods(v);
        else if (key == "k_min") config.k_min = to_int(key, v);
        else if (key == "k_max") config.k_max = to_int(key, v);
        else if (key == "seed") {
            const int seed = to_int(key, v);
            if (seed < 0) throw Error(ErrorKind::InvalidConfig, "seed must be non-negative");
            config.seed = static_cast<std::uint64_t>(seed);
        }
        else if (key == "restarts") config.restarts = to_int(key, v);
        else if (key == "svg") config.emit_svg = to_bool(key, v);
        else throw Error(ErrorKind::InvalidConfig, "unknown key `" + key + "`");
    }
    return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path());
}

void validate(const PipelineConfig& config) {
    if (config.panel.empty()) throw Error(ErrorKind::InvalidConfig, "no panel file configured");
    if (config.k_min < 2) throw Error(ErrorKind::InvalidK, "k_min must be at least 2");
    if (config.k_max < config.k_min) throw Error(ErrorKind::InvalidK, "k_max must be at least k_min");
    if (config.restarts < 1) throw Error(ErrorKind::InvalidConfig, "restarts must be at least 1");
    if (config.methods.empty()) throw Error(ErrorKind::NoMethods, "no clustering method configured");
    if (config.out.empty()) throw Error(ErrorKind::InvalidConfig, "no output directory configured");
}

}  // namespace taxodev
