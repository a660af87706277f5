// Copyright 2026 The qemlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qemlab/plot.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <vector>

#include "qemlab/csv.h"
#include "qemlab/errors.h"

namespace qemlab {

PlotKind parse_plot_kind(std::string_view name) {
    if (name == "line") {
        return PlotKind::Line;
    }
    if (name == "box") {
        return PlotKind::Box;
    }
    throw ConfigError("unknown plot kind '" + std::string(name) + "' (known: line, box)");
}

namespace {

constexpr double kWidth = 760;
constexpr double kHeight = 460;
constexpr double kLeft = 70;
constexpr double kRight = 200;
constexpr double kTop = 30;
constexpr double kBottom = 50;

constexpr std::array<const char *, 10> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

std::string label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", x);
    return buf;
}

struct Point {
    double x = 0.0;
    double y = 0.0;
    double lo = std::numeric_limits<double>::quiet_NaN();
    double hi = std::numeric_limits<double>::quiet_NaN();
};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void settle() {
        if (!std::isfinite(lo)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

class Canvas {
   public:
    Canvas(Range x, Range y, std::string x_title, std::string y_title) : x_(x), y_(y) {
        x_.settle();
        y_.settle();
        out_ = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
               "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
        out_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        axes(x_title, y_title);
    }

    double px(double x) const {
        return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight);
    }
    double py(double y) const {
        return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
    }

    void raw(const std::string &s) {
        out_ += s;
    }

    void legend(std::size_t index, const std::string &name, const char *color) {
        double y = kTop + 16.0 * static_cast<double>(index);
        double x = kWidth - kRight + 15;
        out_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"12\" height=\"3\" fill=\"" + color + "\"/>\n";
        out_ += "<text x=\"" + num(x + 18) + "\" y=\"" + num(y + 5) + "\">" + name + "</text>\n";
    }

    std::string finish() {
        return out_ + "</svg>\n";
    }

   private:
    void axes(const std::string &x_title, const std::string &y_title) {
        double x0 = kLeft;
        double x1 = kWidth - kRight;
        double y0 = kHeight - kBottom;
        double y1 = kTop;
        out_ += "<g stroke=\"black\" stroke-width=\"1\">\n";
        out_ += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) + "\"/>\n";
        out_ += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y1) + "\"/>\n";
        out_ += "</g>\n";
        for (int i = 0; i <= 4; i++) {
            double xv = x_.lo + (x_.hi - x_.lo) * i / 4.0;
            double yv = y_.lo + (y_.hi - y_.lo) * i / 4.0;
            out_ += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(y0 + 16) + "\" text-anchor=\"middle\">" + label(xv) +
                    "</text>\n";
            out_ += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" + label(yv) +
                    "</text>\n";
            out_ += "<line x1=\"" + num(x0) + "\" y1=\"" + num(py(yv)) + "\" x2=\"" + num(x1) + "\" y2=\"" +
                    num(py(yv)) + "\" stroke=\"#dddddd\"/>\n";
        }
        out_ += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 12) + "\" text-anchor=\"middle\">" +
                x_title + "</text>\n";
        out_ += "<text x=\"16\" y=\"" + num((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
                num((y0 + y1) / 2) + ")\">" + y_title + "</text>\n";
    }

    Range x_;
    Range y_;
    std::string out_;
};

using SeriesMap = std::map<std::string, std::vector<Point>>;

std::string line_chart(const SeriesMap &series, const std::string &x_title, const std::string &y_title) {
    Range xr;
    Range yr;
    for (const auto &[name, pts] : series) {
        for (const auto &p : pts) {
            xr.add(p.x);
            yr.add(p.y);
            yr.add(p.lo);
            yr.add(p.hi);
        }
    }
    Canvas c(xr, yr, x_title, y_title);
    std::size_t k = 0;
    for (const auto &[name, unsorted] : series) {
        const char *color = kPalette[k % kPalette.size()];
        auto pts = unsorted;
        std::stable_sort(pts.begin(), pts.end(), [](const Point &a, const Point &b) { return a.x < b.x; });
        std::erase_if(pts, [](const Point &p) { return !std::isfinite(p.x) || !std::isfinite(p.y); });
        bool band = !pts.empty() && std::all_of(pts.begin(), pts.end(), [](const Point &p) {
            return std::isfinite(p.lo) && std::isfinite(p.hi);
        });
        if (band) {
            std::string d;
            for (const auto &p : pts) {
                d += (d.empty() ? "M" : " L") + num(c.px(p.x)) + " " + num(c.py(p.hi));
            }
            for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
                d += " L" + num(c.px(it->x)) + " " + num(c.py(it->lo));
            }
            c.raw("<path d=\"" + d + " Z\" fill=\"" + color + "\" fill-opacity=\"0.18\" stroke=\"none\"/>\n");
        }
        if (!pts.empty()) {
            std::string pl;
            for (const auto &p : pts) {
                pl += (pl.empty() ? "" : " ") + num(c.px(p.x)) + "," + num(c.py(p.y));
            }
            c.raw("<polyline points=\"" + pl + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.8\"/>\n");
            for (const auto &p : pts) {
                c.raw("<circle cx=\"" + num(c.px(p.x)) + "\" cy=\"" + num(c.py(p.y)) + "\" r=\"2.5\" fill=\"" + color +
                      "\"/>\n");
            }
        }
        c.legend(k, name, color);
        k++;
    }
    return c.finish();
}

double quantile(const std::vector<double> &sorted, double q) {
    double pos = q * static_cast<double>(sorted.size() - 1);
    auto i = static_cast<std::size_t>(std::floor(pos));
    std::size_t j = std::min(i + 1, sorted.size() - 1);
    return sorted[i] + (pos - static_cast<double>(i)) * (sorted[j] - sorted[i]);
}

std::string box_chart(const std::map<std::string, std::vector<double>> &groups, const std::string &y_title) {
    Range xr{0.0, static_cast<double>(std::max<std::size_t>(groups.size(), 1))};
    Range yr;
    for (const auto &[name, v] : groups) {
        for (double x : v) {
            yr.add(x);
        }
    }
    Canvas c(xr, yr, "method", y_title);
    std::size_t k = 0;
    for (const auto &[name, values] : groups) {
        const char *color = kPalette[k % kPalette.size()];
        auto v = values;
        std::erase_if(v, [](double x) { return !std::isfinite(x); });
        std::sort(v.begin(), v.end());
        double center = c.px(static_cast<double>(k) + 0.5);
        double half = 0.3 * (c.px(1.0) - c.px(0.0));
        if (!v.empty()) {
            double q1 = quantile(v, 0.25);
            double q2 = quantile(v, 0.5);
            double q3 = quantile(v, 0.75);
            double iqr = q3 - q1;
            double lo_fence = q1 - 1.5 * iqr;
            double hi_fence = q3 + 1.5 * iqr;
            double wlo = *std::find_if(v.begin(), v.end(), [&](double x) { return x >= lo_fence; });
            double whi = *std::find_if(v.rbegin(), v.rend(), [&](double x) { return x <= hi_fence; });
            auto vline = [&](double a, double b) {
                c.raw("<line x1=\"" + num(center) + "\" y1=\"" + num(c.py(a)) + "\" x2=\"" + num(center) + "\" y2=\"" +
                      num(c.py(b)) + "\" stroke=\"black\"/>\n");
            };
            auto hline = [&](double y, double w) {
                c.raw("<line x1=\"" + num(center - w) + "\" y1=\"" + num(c.py(y)) + "\" x2=\"" + num(center + w) +
                      "\" y2=\"" + num(c.py(y)) + "\" stroke=\"black\"/>\n");
            };
            vline(wlo, q1);
            vline(q3, whi);
            hline(wlo, half / 2);
            hline(whi, half / 2);
            c.raw("<rect x=\"" + num(center - half) + "\" y=\"" + num(c.py(q3)) + "\" width=\"" + num(2 * half) +
                  "\" height=\"" + num(c.py(q1) - c.py(q3)) + "\" fill=\"" + color +
                  "\" fill-opacity=\"0.6\" stroke=\"black\"/>\n");
            hline(q2, half);
            for (double x : v) {
                if (x < lo_fence || x > hi_fence) {
                    c.raw("<circle cx=\"" + num(center) + "\" cy=\"" + num(c.py(x)) + "\" r=\"1.8\" fill=\"black\"/>\n");
                }
            }
        }
        c.legend(k, name, color);
        k++;
    }
    return c.finish();
}

struct Table {
    std::vector<std::vector<std::string_view>> rows;
};

Table read_rows(const std::vector<std::string_view> &lines, std::size_t columns) {
    Table t;
    for (std::size_t i = 1; i < lines.size(); i++) {
        if (lines[i].empty()) {
            continue;
        }
        auto f = split_csv_fields(lines[i]);
        if (f.size() != columns) {
            throw FormatError("plot input line " + std::to_string(i + 1) + ": expected " + std::to_string(columns) +
                              " fields, got " + std::to_string(f.size()));
        }
        t.rows.push_back(std::move(f));
    }
    return t;
}

double field_number(std::string_view f, std::size_t line) {
    try {
        return parse_double(f);
    } catch (const std::invalid_argument &e) {
        throw FormatError("plot input line " + std::to_string(line + 2) + ": " + e.what());
    }
}

/// Series names drop tier/regime when they never vary.
std::vector<std::string> series_names(const Table &t) {
    bool tiers = false;
    bool regimes = false;
    for (const auto &r : t.rows) {
        tiers |= r[0] != t.rows.front()[0];
        regimes |= r[1] != t.rows.front()[1];
    }
    std::vector<std::string> out;
    for (const auto &r : t.rows) {
        std::string name;
        if (tiers) {
            name += std::string(r[0]) + "/";
        }
        if (regimes) {
            name += std::string(r[1]) + "/";
        }
        out.push_back(name + std::string(r[2]));
    }
    return out;
}

}  // namespace

std::string render_plot(std::string_view csv_text, PlotKind kind) {
    auto lines = split_lines(csv_text);
    if (lines.empty()) {
        throw FormatError("plot input is empty");
    }
    const std::string_view header = lines.front();
    if (header == kMetricsHeader) {
        if (kind == PlotKind::Box) {
            throw FormatError("box plots need a per-circuit error table, not a metric table");
        }
        Table t = read_rows(lines, 8);
        auto names = series_names(t);
        SeriesMap series;
        for (std::size_t i = 0; i < t.rows.size(); i++) {
            const auto &r = t.rows[i];
            series[names[i]].push_back(
                {field_number(r[3], i), field_number(r[4], i), field_number(r[5], i), field_number(r[6], i)});
        }
        return line_chart(series, "bucket", "mean L2 error");
    }
    if (header == kErrorsHeader) {
        Table t = read_rows(lines, 6);
        auto names = series_names(t);
        if (kind == PlotKind::Box) {
            std::map<std::string, std::vector<double>> groups;
            for (std::size_t i = 0; i < t.rows.size(); i++) {
                groups[names[i]].push_back(field_number(t.rows[i][5], i));
            }
            return box_chart(groups, "L2 error");
        }
        std::map<std::string, std::map<double, std::pair<double, int>>> acc;
        for (std::size_t i = 0; i < t.rows.size(); i++) {
            auto &cell = acc[names[i]][field_number(t.rows[i][3], i)];
            cell.first += field_number(t.rows[i][5], i);
            cell.second++;
        }
        SeriesMap series;
        for (const auto &[name, buckets] : acc) {
            for (const auto &[x, sum] : buckets) {
                series[name].push_back({x, sum.first / sum.second});
            }
        }
        return line_chart(series, "bucket", "mean L2 error");
    }
    if (header == kVqeHeader) {
        if (kind == PlotKind::Box) {
            throw FormatError("box plots need a per-circuit error table, not a VQE table");
        }
        Table t = read_rows(lines, 9);
        static constexpr std::array<const char *, 4> names = {"exact", "unmitigated", "zne", "rf"};
        SeriesMap series;
        for (std::size_t i = 0; i < t.rows.size(); i++) {
            double bond = field_number(t.rows[i][0], i);
            for (std::size_t k = 0; k < names.size(); k++) {
                series[names[k]].push_back({bond, field_number(t.rows[i][k + 1], i)});
            }
        }
        return line_chart(series, "bond length", "energy");
    }
    throw FormatError("unrecognized plot input header '" + std::string(header) + "'");
}

}  // namespace qemlab
