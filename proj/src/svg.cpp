#include "taxodev/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace taxodev::svg {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* colour(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string header(double width, double height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
           "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"sans-serif\" font-size=\"10\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string development_paths(const DevelopmentSeries& series) {
    std::set<int> periods;
    std::map<std::string, std::map<int, double>> paths;
    double lo = 0.0, hi = 1.0;
    for (const auto& c : series.cells) {
        periods.insert(c.period);
        paths[c.entity][c.period] = c.g;
        lo = std::min(lo, c.g);
        hi = std::max(hi, c.g);
    }
    const double width = 720, height = 420, left = 50, right = 110, top = 20, bottom = 40;
    const double plot_w = width - left - right, plot_h = height - top - bottom;
    const int first = periods.empty() ? 0 : *periods.begin();
    const int last = periods.empty() ? 1 : *periods.rbegin();
    auto x = [&](int p) { return left + (last == first ? 0.0 : plot_w * (p - first) / double(last - first)); };
    auto y = [&](double g) { return top + plot_h * (hi - g) / (hi - lo); };

    std::ostringstream out;
    out << header(width, height);
    out << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + plot_h) << "\" x2=\"" << num(left + plot_w)
        << "\" y2=\"" << num(top + plot_h) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\""
        << num(top + plot_h) << "\" stroke=\"black\"/>\n";
    for (int p : periods)
        out << "<text x=\"" << num(x(p)) << "\" y=\"" << num(height - bottom + 15) << "\" text-anchor=\"middle\">" << p
            << "</text>\n";
    for (double g : {lo, 0.0, hi})
        out << "<text x=\"" << num(left - 5) << "\" y=\"" << num(y(g) + 3) << "\" text-anchor=\"end\">" << num(g)
            << "</text>\n";

    std::size_t i = 0;
    for (const auto& [entity, path] : paths) {
        out << "<polyline fill=\"none\" stroke=\"" << colour(i) << "\" points=\"";
        bool first_point = true;
        for (const auto& [p, g] : path) {
            out << (first_point ? "" : " ") << num(x(p)) << ',' << num(y(g));
            first_point = false;
        }
        out << "\"/>\n";
        const auto& [lp, lg] = *path.rbegin();
        out << "<text x=\"" << num(x(lp) + 4) << "\" y=\"" << num(y(lg) + 3) << "\" fill=\"" << colour(i) << "\">"
            << escape(entity) << "</text>\n";
        ++i;
    }
    out << "</svg>\n";
    return out.str();
}

std::string dendrogram(const Dendrogram& tree) {
    const std::size_t n = tree.leaves.size();
    double max_height = 0.0;
    for (const auto& m : tree.merges) max_height = std::max(max_height, m.height);
    if (max_height <= 0.0) max_height = 1.0;

    const double step = 24, left = 50, top = 20, plot_h = 300, bottom = 60;
    const double width = left + step * static_cast<double>(n) + 20, height = top + plot_h + bottom;

    std::vector<double> xs(2 * n - 1, 0.0), ys(2 * n - 1, top + plot_h);
    for (std::size_t pos = 0; pos < tree.leaf_order.size(); ++pos)
        xs[tree.leaf_order[pos]] = left + step * (static_cast<double>(pos) + 0.5);

    std::ostringstream out;
    out << header(width, height);
    for (std::size_t i = 0; i < tree.merges.size(); ++i) {
        const auto& m = tree.merges[i];
        const std::size_t id = n + i;
        xs[id] = 0.5 * (xs[m.left] + xs[m.right]);
        ys[id] = top + plot_h * (1.0 - m.height / max_height);
        out << "<path fill=\"none\" stroke=\"black\" d=\"M" << num(xs[m.left]) << ',' << num(ys[m.left]) << " V"
            << num(ys[id]) << " H" << num(xs[m.right]) << " V" << num(ys[m.right]) << "\"/>\n";
    }
    for (std::size_t pos = 0; pos < tree.leaf_order.size(); ++pos) {
        const auto leaf = tree.leaf_order[pos];
        out << "<text x=\"" << num(xs[leaf]) << "\" y=\"" << num(top + plot_h + 12)
            << "\" text-anchor=\"end\" transform=\"rotate(-90 " << num(xs[leaf]) << ' ' << num(top + plot_h + 12)
            << ")\">" << escape(tree.leaves[leaf]) << "</text>\n";
    }
    out << "<text x=\"" << num(left - 5) << "\" y=\"" << num(top + 3) << "\" text-anchor=\"end\">" << num(max_height)
        << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::string silhouette_bars(const std::vector<SilhouetteBar>& bars, double average) {
    const double bar = 14, left = 70, top = 20, plot_w = 400, zero = left + plot_w / 2;
    const double width = left + plot_w + 20, height = top + bar * static_cast<double>(bars.size()) + 30;

    std::ostringstream out;
    out << header(width, height);
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& b = bars[i];
        const double y = top + bar * static_cast<double>(i);
        const double len = b.width * plot_w / 2;
        out << "<rect x=\"" << num(len >= 0 ? zero : zero + len) << "\" y=\"" << num(y) << "\" width=\""
            << num(len >= 0 ? len : -len) << "\" height=\"" << num(bar - 2) << "\" fill=\""
            << colour(static_cast<std::size_t>(b.cluster - 1)) << "\"/>\n";
        out << "<text x=\"" << num(left - 5) << "\" y=\"" << num(y + bar - 4) << "\" text-anchor=\"end\">"
            << escape(b.entity) << "</text>\n";
    }
    out << "<line x1=\"" << num(zero) << "\" y1=\"" << num(top) << "\" x2=\"" << num(zero) << "\" y2=\""
        << num(height - 30) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(left) << "\" y=\"" << num(height - 10) << "\">average silhouette width "
        << num(average) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace taxodev::svg
