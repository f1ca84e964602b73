#include "icecast_cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "icecast/error.hpp"

namespace icecast::cli {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// Day -> value, last one wins (input is expected to be deduplicated).
std::map<Day, double> by_day(const std::vector<IceObservation>& series) {
    std::map<Day, double> out;
    for (const auto& o : series) out[o.day()] = o.concentration;
    return out;
}

}  // namespace

std::string render_svg(const std::vector<IceObservation>& series) {
    if (series.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to plot");
    const auto days = by_day(series);
    const Day first = days.begin()->first;
    const Day last = days.rbegin()->first;
    const double span = static_cast<double>((last - first).count());
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    auto x_of = [&](Day d) {
        if (span == 0.0) return kLeft + plot_w / 2.0;
        return kLeft + plot_w * static_cast<double>((d - first).count()) / span;
    };
    auto y_of = [&](double v) { return kTop + plot_h * (1.0 - v); };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    svg += "<title>point " + std::to_string(series.front().point_id) + " ice concentration</title>\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes: y fixed to [0, 1].
    const double x0 = kLeft, x1 = kLeft + plot_w, y0 = y_of(0.0), y1 = y_of(1.0);
    svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) + "\"/>\n";
    svg += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y1) + "\"/>\n";
    svg += "</g>\n";
    svg += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = i / 4.0;
        svg += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(y_of(v) + 4) + "\" text-anchor=\"end\">" +
               num(v) + "</text>\n";
    }
    const Day mid = first + std::chrono::days((last - first).count() / 2);
    for (Day d : {first, mid, last}) {
        svg += "<text x=\"" + num(x_of(d)) + "\" y=\"" + num(y0 + 18) + "\" text-anchor=\"middle\">" +
               format_day(d) + "</text>\n";
        if (span == 0.0) break;
    }
    svg += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 12) +
           "\" text-anchor=\"middle\">date</text>\n";
    svg += "<text x=\"16\" y=\"" + num(kTop + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           num(kTop + plot_h / 2) + ")\">ice concentration</text>\n";
    svg += "</g>\n";

    // One polyline per run of consecutive days.
    std::vector<std::vector<std::pair<Day, double>>> runs;
    for (const auto& [d, v] : days) {
        if (runs.empty() || d - runs.back().back().first != std::chrono::days(1)) runs.emplace_back();
        runs.back().emplace_back(d, v);
    }
    for (const auto& run : runs) {
        if (run.size() == 1) {
            svg += "<circle cx=\"" + num(x_of(run[0].first)) + "\" cy=\"" + num(y_of(run[0].second)) +
                   "\" r=\"1.5\" fill=\"steelblue\"/>\n";
            continue;
        }
        svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < run.size(); ++i) {
            if (i) svg += ' ';
            svg += num(x_of(run[i].first)) + "," + num(y_of(run[i].second));
        }
        svg += "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_ascii(const std::vector<IceObservation>& series, int width) {
    if (series.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to plot");
    width = std::max(width, 8);
    const auto days = by_day(series);
    const Day first = days.begin()->first;
    const Day last = days.rbegin()->first;
    const long span = (last - first).count() + 1;
    const long cols = std::min<long>(span, width);

    std::vector<double> sum(static_cast<std::size_t>(cols), 0.0);
    std::vector<int> count(static_cast<std::size_t>(cols), 0);
    for (const auto& [d, v] : days) {
        const long col = (d - first).count() * cols / span;
        sum[col] += v;
        ++count[col];
    }

    constexpr int kRows = 11;  // 0.0, 0.1, ..., 1.0
    std::vector<std::string> grid(kRows, std::string(static_cast<std::size_t>(cols), ' '));
    for (long c = 0; c < cols; ++c) {
        if (count[c] == 0) continue;
        const int row = static_cast<int>(std::lround(sum[c] / count[c] * 10.0));
        grid[kRows - 1 - row][c] = '*';
    }

    std::string out = "point " + std::to_string(series.front().point_id) + " ice concentration\n";
    for (int r = 0; r < kRows; ++r) {
        char label[16];
        std::snprintf(label, sizeof label, "%4.1f |", (kRows - 1 - r) / 10.0);
        out += label + grid[r] + '\n';
    }
    out += "     +" + std::string(static_cast<std::size_t>(cols), '-') + '\n';
    const std::string a = format_day(first);
    const std::string b = format_day(last);
    std::string axis = "      " + a;
    const std::size_t right = 6 + static_cast<std::size_t>(cols);
    if (first != last && right >= axis.size() + 1 + b.size())
        axis += std::string(right - axis.size() - b.size(), ' ') + b;
    else if (first != last)
        axis += " .. " + b;
    out += axis + '\n';
    return out;
}

}  // namespace icecast::cli
