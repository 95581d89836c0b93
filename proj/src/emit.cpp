#include "leaky/emit.hpp"

#include "leaky/rng.hpp"
#include "leaky/version.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace leaky {

namespace {

std::string fmt(double v, int precision = 4) {
    std::ostringstream out;
    out.precision(precision);
    out << v;
    return out.str();
}

// White -> steel blue ramp; t in [0, 1].
std::string ramp_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255.0 + t * (70.0 - 255.0)));
    const int g = static_cast<int>(std::lround(255.0 + t * (130.0 - 255.0)));
    const int b = static_cast<int>(std::lround(255.0 + t * (180.0 - 255.0)));
    std::ostringstream out;
    out << "rgb(" << r << ',' << g << ',' << b << ')';
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
}

}  // namespace

std::string heatmap_svg(const Table& table, int n_slice, const std::string& value_column) {
    const int col_n = column_index(table, "n");
    const int col_d = column_index(table, "d");
    const int col_l = column_index(table, "L");
    const int col_v = column_index(table, value_column);

    std::set<std::int64_t> d_set;
    std::set<double> l_set;
    std::map<std::pair<std::int64_t, double>, double> cells;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (static_cast<std::int64_t>(numeric_at(table, r, col_n)) != n_slice) continue;
        const auto d = static_cast<std::int64_t>(numeric_at(table, r, col_d));
        const double l = numeric_at(table, r, col_l);
        d_set.insert(d);
        l_set.insert(l);
        cells[{d, l}] = numeric_at(table, r, col_v);
    }
    if (cells.empty())
        throw std::invalid_argument("no rows with n = " + std::to_string(n_slice));

    const std::vector<std::int64_t> ds(d_set.begin(), d_set.end());
    const std::vector<double> ls(l_set.begin(), l_set.end());
    double vmin = cells.begin()->second, vmax = vmin;
    for (const auto& [key, v] : cells) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    const double span = vmax > vmin ? vmax - vmin : 1.0;

    const int cell_w = 86, cell_h = 46;
    const int left = 86, top = 46, legend_w = 26, pad = 56;
    const int width = left + cell_w * static_cast<int>(ls.size()) + pad + legend_w + 60;
    const int height = top + cell_h * static_cast<int>(ds.size()) + 50;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<text x=\"" << left << "\" y=\"18\" font-size=\"13\">" << value_column
        << ", n = " << n_slice << "</text>\n";

    // d rows are drawn bottom-up so depth increases upward.
    for (std::size_t yi = 0; yi < ds.size(); ++yi) {
        const std::int64_t d = ds[yi];
        const int y = top + cell_h * static_cast<int>(ds.size() - 1 - yi);
        svg << "<text x=\"" << left - 10 << "\" y=\"" << y + cell_h / 2 + 4
            << "\" text-anchor=\"end\">d=" << d << "</text>\n";
        for (std::size_t xi = 0; xi < ls.size(); ++xi) {
            const auto it = cells.find({d, ls[xi]});
            const int x = left + cell_w * static_cast<int>(xi);
            if (it == cells.end()) {
                svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w
                    << "\" height=\"" << cell_h << "\" fill=\"none\" stroke=\"#999\"/>\n";
                continue;
            }
            const double t = (it->second - vmin) / span;
            svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w
                << "\" height=\"" << cell_h << "\" fill=\"" << ramp_color(t)
                << "\" stroke=\"#666\"/>\n";
            svg << "<text x=\"" << x + cell_w / 2 << "\" y=\"" << y + cell_h / 2 + 4
                << "\" text-anchor=\"middle\">" << fmt(it->second, 3) << "</text>\n";
        }
    }
    for (std::size_t xi = 0; xi < ls.size(); ++xi) {
        const int x = left + cell_w * static_cast<int>(xi) + cell_w / 2;
        const int y = top + cell_h * static_cast<int>(ds.size()) + 16;
        svg << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"middle\">L="
            << fmt(ls[xi], 3) << "</text>\n";
    }

    // Legend: vertical gradient sampled in 32 bands.
    const int lx = left + cell_w * static_cast<int>(ls.size()) + pad;
    const int lh = cell_h * static_cast<int>(ds.size());
    const int bands = 32;
    for (int b = 0; b < bands; ++b) {
        const double t = 1.0 - static_cast<double>(b) / (bands - 1);
        const int y = top + b * lh / bands;
        svg << "<rect x=\"" << lx << "\" y=\"" << y << "\" width=\"" << legend_w << "\" height=\""
            << (lh + bands - 1) / bands << "\" fill=\"" << ramp_color(t) << "\"/>\n";
    }
    svg << "<rect x=\"" << lx << "\" y=\"" << top << "\" width=\"" << legend_w << "\" height=\""
        << lh << "\" fill=\"none\" stroke=\"#666\"/>\n";
    svg << "<text x=\"" << lx + legend_w + 6 << "\" y=\"" << top + 8 << "\">" << fmt(vmax, 3)
        << "</text>\n";
    svg << "<text x=\"" << lx + legend_w + 6 << "\" y=\"" << top + lh << "\">" << fmt(vmin, 3)
        << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void emit_heatmap(const Table& table, int n_slice, const std::string& value_column,
                  const std::string& path) {
    write_text_file(path, heatmap_svg(table, n_slice, value_column));
}

std::string loss_curve_svg(const LossCurve& curve) {
    if (curve.ideal_mean.empty() || curve.ideal_mean.size() != curve.leaky_mean.size())
        throw std::invalid_argument("loss curve needs equal nonempty traces");
    const int width = 560, height = 360, left = 64, top = 28, right = 24, bottom = 44;
    const int plot_w = width - left - right, plot_h = height - top - bottom;

    auto log_floor = [](double v) { return std::log10(std::max(v, 1e-16)); };
    double ymin = log_floor(curve.ideal_mean[0]), ymax = ymin;
    for (const auto* trace : {&curve.ideal_mean, &curve.leaky_mean})
        for (double v : *trace) {
            ymin = std::min(ymin, log_floor(v));
            ymax = std::max(ymax, log_floor(v));
        }
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
    const std::size_t epochs = curve.ideal_mean.size();

    auto x_of = [&](std::size_t e) {
        return left + static_cast<double>(e) / static_cast<double>(epochs - 1 ? epochs - 1 : 1) *
                          plot_w;
    };
    auto y_of = [&](double v) {
        return top + (ymax - log_floor(v)) / (ymax - ymin) * plot_h;
    };
    auto polyline = [&](const std::vector<double>& trace, const char* color) {
        std::ostringstream p;
        p << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t e = 0; e < trace.size(); ++e)
            p << fmt(x_of(e), 6) << ',' << fmt(y_of(trace[e]), 6) << ' ';
        p << "\"/>\n";
        return p.str();
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<text x=\"" << left << "\" y=\"16\" font-size=\"13\">training loss, n=" << curve.n
        << " d=" << curve.d << " L=" << fmt(curve.l_value, 4) << "</text>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg << polyline(curve.ideal_mean, "#4682b4");
    svg << polyline(curve.leaky_mean, "#b22222");
    svg << "<text x=\"" << left - 8 << "\" y=\"" << top + 10
        << "\" text-anchor=\"end\">" << fmt(ymax, 3) << "</text>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << top + plot_h
        << "\" text-anchor=\"end\">" << fmt(ymin, 3) << "</text>\n";
    svg << "<text x=\"14\" y=\"" << top + plot_h / 2
        << "\" transform=\"rotate(-90 14 " << top + plot_h / 2
        << ")\" text-anchor=\"middle\">log10(mean loss)</text>\n";
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\">epoch (1.." << epochs << ")</text>\n";
    svg << "<text x=\"" << left + plot_w - 120 << "\" y=\"" << top + 16
        << "\" fill=\"#4682b4\">noiseless</text>\n";
    svg << "<text x=\"" << left + plot_w - 120 << "\" y=\"" << top + 32
        << "\" fill=\"#b22222\">leaky</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void emit_loss_curve(const LossCurve& curve, const std::string& path) {
    write_text_file(path, loss_curve_svg(curve));
}

Table loss_curves_table(const std::vector<LossCurve>& curves) {
    Table t;
    t.columns = {"n", "d", "L", "epoch", "ideal_mean_loss", "leaky_mean_loss"};
    for (const LossCurve& c : curves)
        for (std::size_t e = 0; e < c.ideal_mean.size(); ++e)
            t.rows.push_back({std::int64_t{c.n}, std::int64_t{c.d}, c.l_value,
                              static_cast<std::int64_t>(e + 1), c.ideal_mean[e],
                              c.leaky_mean[e]});
    return t;
}

void write_manifest(const std::string& path, const ExperimentConfig& cfg,
                    const std::string& config_text) {
    std::ostringstream out;
    out << "tool = leakybench " << kVersion << "\n";
    out << "experiment = " << to_string(cfg.experiment) << "\n";
    out << "config_hash = 0x" << std::hex << fnv1a(config_text.data(), config_text.size())
        << std::dec << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "mode = " << to_string(cfg.mode) << "\n";
    out << "samples = " << cfg.samples << "\n";
    out << "reps = " << cfg.reps << "\n";
    out << "jobs = " << cfg.jobs << "\n";
    write_text_file(path, out.str());
}

}  // namespace leaky
