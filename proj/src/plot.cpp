#include "comp_isac/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace comp_isac {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

struct Point {
    double x;
    double y;
};

struct Series {
    std::vector<Point> line;
    std::vector<Point> markers;
};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double field_value(const std::string& text, std::size_t line)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line) + ": not a number: '" + text + "'");
    }
}

// Mean over the non-empty columns with the given prefix; nullopt if none.
std::optional<double> mean_columns(const CsvTable& t, const std::vector<std::string>& row, const std::string& prefix,
                                   std::size_t line)
{
    double sum = 0.0;
    int count = 0;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        const std::string& h = t.header[c];
        if (h.rfind(prefix, 0) == 0 && h.find_first_not_of("0123456789", prefix.size()) == std::string::npos &&
            !row[c].empty()) {
            sum += field_value(row[c], line);
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return sum / count;
}

}  // namespace

std::string render_svg(const CsvTable& table, const std::string& sweep)
{
    const std::size_t c_sweep = table.column("sweep");
    const std::size_t c_value = table.column("value");
    const std::size_t c_scheme = table.column("scheme");
    const std::size_t c_feasible = table.column("feasible");
    const std::size_t c_sum = table.column("sum_rate");
    const bool pod_plot = sweep == "pod_validation";

    std::map<std::string, Series> series;
    std::vector<std::string> order;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = r + 2;
        if (row[c_sweep] != sweep) continue;
        const std::string& scheme = row[c_scheme];
        if (!series.count(scheme)) {
            series[scheme];
            order.push_back(scheme);
        }
        if (row[c_feasible] != "1") continue;
        const double x = field_value(row[c_value], line);
        if (pod_plot) {
            if (auto y = mean_columns(table, row, "pod_cf_", line)) series[scheme].line.push_back({x, *y});
            if (auto y = mean_columns(table, row, "pod_mc_", line)) series[scheme].markers.push_back({x, *y});
        } else if (!row[c_sum].empty()) {
            series[scheme].line.push_back({x, field_value(row[c_sum], line)});
        }
    }

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool first = true;
    for (const auto& [name, s] : series) {
        for (const auto* pts : {&s.line, &s.markers}) {
            for (const Point& p : *pts) {
                if (first) {
                    xmin = xmax = p.x;
                    ymin = ymax = p.y;
                    first = false;
                }
                xmin = std::min(xmin, p.x);
                xmax = std::max(xmax, p.x);
                ymin = std::min(ymin, p.y);
                ymax = std::max(ymax, p.y);
            }
        }
    }
    if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight); };
    auto py = [&](double y) { return kHeight - kBottom - (y - ymin) / (ymax - ymin) * (kHeight - kTop - kBottom); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight) << "\" fill=\"white\"/>\n"
        << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
        << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\"" << num(kWidth - kRight)
        << "\" y2=\"" << num(kHeight - kBottom) << "\"/>\n"
        << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
        << num(kHeight - kBottom) << "\"/>\n"
        << "</g>\n";

    svg << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + k * (xmax - xmin) / 4.0;
        const double yv = ymin + k * (ymax - ymin) / 4.0;
        svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kHeight - kBottom + 16)
            << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
        svg << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">" << num(yv)
            << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 10)
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" << sweep << "</text>\n";
    svg << "<text x=\"16\" y=\"" << num((kTop + kHeight - kBottom) / 2)
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << num((kTop + kHeight - kBottom) / 2) << ")\">" << (pod_plot ? "probability of detection" : "sum rate (bit/s/Hz)")
        << "</text>\n";

    for (std::size_t k = 0; k < order.size(); ++k) {
        const Series& s = series[order[k]];
        const char* color = kColors[k % std::size(kColors)];
        svg << "<g class=\"series\" data-scheme=\"" << order[k] << "\" stroke=\"" << color << "\" fill=\"" << color
            << "\">\n";
        if (s.line.size() > 1) {
            svg << "<polyline fill=\"none\" stroke-width=\"2\" points=\"";
            for (std::size_t i = 0; i < s.line.size(); ++i) {
                svg << (i ? " " : "") << num(px(s.line[i].x)) << ',' << num(py(s.line[i].y));
            }
            svg << "\"/>\n";
        }
        for (const Point& p : s.line) {
            svg << "<circle cx=\"" << num(px(p.x)) << "\" cy=\"" << num(py(p.y)) << "\" r=\"3\"/>\n";
        }
        for (const Point& p : s.markers) {
            svg << "<rect x=\"" << num(px(p.x) - 3) << "\" y=\"" << num(py(p.y) - 3)
                << "\" width=\"6\" height=\"6\" fill=\"none\"/>\n";
        }
        svg << "<text x=\"" << num(kWidth - kRight - 60) << "\" y=\"" << num(kTop + 14 * (k + 1))
            << "\" font-family=\"sans-serif\" font-size=\"12\" stroke=\"none\">" << order[k] << "</text>\n";
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::vector<std::filesystem::path> render_plots(const std::filesystem::path& csv_path,
                                                const std::filesystem::path& output)
{
    const CsvTable table = read_csv(csv_path);
    const std::size_t c_sweep = table.column("sweep");
    std::vector<std::string> sweeps;
    for (const auto& row : table.rows) {
        if (std::find(sweeps.begin(), sweeps.end(), row[c_sweep]) == sweeps.end()) {
            sweeps.push_back(row[c_sweep]);
        }
    }

    std::vector<std::filesystem::path> written;
    for (const std::string& sweep : sweeps) {
        std::filesystem::path target = output;
        if (sweeps.size() > 1) {
            target.replace_filename(output.stem().string() + "_" + sweep + output.extension().string());
        }
        std::ofstream out(target, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot open " + target.string() + " for writing");
        }
        out << render_svg(table, sweep);
        written.push_back(target);
    }
    return written;
}

}  // namespace comp_isac
