// taxodev: development measures and cluster validity for indicator panels.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "taxodev/config.hpp"
#include "taxodev/error.hpp"
#include "taxodev/report.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<std::vector<int>> years;
    std::optional<int> k_min;
    std::optional<int> k_max;
    std::optional<std::vector<std::string>> methods;
    std::optional<int> seed;
    std::optional<int> restarts;
    std::optional<std::string> out;
    bool svg = false;
};

void add_options(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--config", o.config, "key = value configuration file")->required();
    cmd.add_option("--years", o.years, "analysis years, e.g. 2005,2009,2015,2018")->delimiter(',');
    cmd.add_option("--k-min", o.k_min, "smallest number of clusters");
    cmd.add_option("--k-max", o.k_max, "largest number of clusters");
    cmd.add_option("--methods", o.methods, "comma list of ward, kmeans, pam")->delimiter(',');
    cmd.add_option("--seed", o.seed, "k-means seed");
    cmd.add_option("--restarts", o.restarts, "k-means restarts");
    cmd.add_option("--out", o.out, "output directory");
    cmd.add_flag("--svg", o.svg, "also render SVG figures");
}

taxodev::PipelineConfig resolve(const Overrides& o) {
    auto config = taxodev::load_config(o.config);
    if (o.years) config.years = *o.years;
    if (o.k_min) config.k_min = *o.k_min;
    if (o.k_max) config.k_max = *o.k_max;
    if (o.methods) config.methods = taxodev::parse_methods(*o.methods);
    if (o.seed) {
        if (*o.seed < 0) throw taxodev::Error(taxodev::ErrorKind::InvalidConfig, "seed must be non-negative");
        config.seed = static_cast<std::uint64_t>(*o.seed);
    }
    if (o.restarts) config.restarts = *o.restarts;
    if (o.out) config.out = *o.out;
    if (o.svg) config.emit_svg = true;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hellwig development measures and cluster validity for entity x period indicator panels"};
    app.require_subcommand(1);

    Overrides overrides;
    std::optional<taxodev::Command> command;
    const std::pair<const char*, taxodev::Command> commands[] = {
        {"describe", taxodev::Command::Describe},
        {"hellwig", taxodev::Command::Hellwig},
        {"similarity", taxodev::Command::Similarity},
        {"pipeline", taxodev::Command::Pipeline},
    };
    const char* help[] = {
        "group aggregates per period",
        "development measures, paths, ranks and change",
        "Ward, k-means and PAM partitions with validity indices",
        "describe (when a grouping is configured), hellwig and similarity",
    };
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        auto* sub = app.add_subcommand(commands[i].first, help[i]);
        add_options(*sub, overrides);
        sub->callback([&command, c = commands[i].second] { command = c; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    taxodev::PipelineConfig config;
    try {
        config = resolve(overrides);
    } catch (const taxodev::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return taxodev::exit_code(e.kind());
    }
    return taxodev::run_command(*command, config, std::cerr);
}
