#include "lltk/svg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

namespace lltk::svg {

namespace {

constexpr double kW = 640.0, kH = 480.0, kPad = 48.0;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string timestamp_comment() {
    const std::time_t t =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[40];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string("<!-- generated ") + buf + " -->\n";
}

std::string header(const std::string& title) {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += timestamp_comment();
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kW) +
         "\" height=\"" + num(kH) + "\" viewBox=\"0 0 " + num(kW) + " " + num(kH) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(kW / 2) + "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         title + "</text>\n";
    return s;
}

std::string empty_svg(const std::string& title) {
    std::string s = header(title);
    s += "<text x=\"" + num(kW / 2) + "\" y=\"" + num(kH / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">no data</text>\n";
    s += "</svg>\n";
    return s;
}

struct Range {
    double lo = 0.0, hi = 1.0;
    double clamp01(double v) const { return hi > lo ? (v - lo) / (hi - lo) : 0.5; }
};

Range make_range(double lo, double hi) {
    if (!(hi > lo)) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

double px(const Range& r, double v) { return kPad + r.clamp01(v) * (kW - 2.0 * kPad); }
double py(const Range& r, double v) { return kH - kPad - r.clamp01(v) * (kH - 2.0 * kPad); }

// Blue -> yellow ramp; u in [0, 1].
std::string ramp_color(double u) {
    u = std::clamp(u, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(40 + 215 * u));
    const int g = static_cast<int>(std::lround(60 + 170 * u));
    const int b = static_cast<int>(std::lround(180 - 150 * u));
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

// Fixed palette for categorical keys (seed / weight-decay levels).
std::string category_color(std::size_t idx) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return palette[idx % 8];
}

}  // namespace

std::string embedding_scatter(const std::vector<ScatterPoint>& points, ColorBy coloring,
                              const std::string& title) {
    if (points.empty()) return empty_svg(title);

    double xlo = points[0].x, xhi = points[0].x, ylo = points[0].y, yhi = points[0].y;
    double clo = points[0].color_value, chi = points[0].color_value;
    for (const ScatterPoint& p : points) {
        xlo = std::min(xlo, p.x);
        xhi = std::max(xhi, p.x);
        ylo = std::min(ylo, p.y);
        yhi = std::max(yhi, p.y);
        clo = std::min(clo, p.color_value);
        chi = std::max(chi, p.color_value);
    }
    const Range xr = make_range(xlo, xhi), yr = make_range(ylo, yhi);

    auto color_for = [&](double v) {
        switch (coloring) {
            case ColorBy::seed:
                return category_color(static_cast<std::size_t>(v < 0 ? 0 : v));
            case ColorBy::loss_log: {
                const double lv = std::log10(std::max(v, 1e-300));
                const double llo = std::log10(std::max(clo, 1e-300));
                const double lhi = std::log10(std::max(chi, 1e-300));
                return ramp_color(lhi > llo ? (lv - llo) / (lhi - llo) : 0.5);
            }
            case ColorBy::epoch:
            case ColorBy::loss:
            default:
                return ramp_color(chi > clo ? (v - clo) / (chi - clo) : 0.5);
        }
    };

    std::string s = header(title);
    for (const ScatterPoint& p : points) {
        const double cx = px(xr, p.x), cy = py(yr, p.y);
        const std::string fill = color_for(p.color_value);
        if (p.highlighted) {
            s += "<path d=\"M " + num(cx) + " " + num(cy - 5) + " L " + num(cx + 5) + " " +
                 num(cy) + " L " + num(cx) + " " + num(cy + 5) + " L " + num(cx - 5) + " " +
                 num(cy) + " Z\" fill=\"" + fill + "\" stroke=\"black\" stroke-width=\"0.6\"/>\n";
        } else {
            s += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"2.5\" fill=\"" +
                 fill + "\" fill-opacity=\"0.85\"/>\n";
        }
    }
    s += "</svg>\n";
    return s;
}

std::string persistence_diagram(const std::vector<topo::PersistenceDiagram>& diagrams,
                                const std::string& title) {
    std::size_t total = 0;
    for (const auto& d : diagrams) total += d.pairs.size();
    if (total == 0) return empty_svg(title);

    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& d : diagrams)
        for (const auto& p : d.pairs) {
            if (first) {
                lo = p.birth;
                hi = p.death;
                first = false;
            }
            lo = std::min({lo, p.birth, p.death});
            hi = std::max({hi, p.birth, p.death});
        }
    const Range r = make_range(lo, hi);

    std::string s = header(title);
    // diagonal reference line
    s += "<line x1=\"" + num(px(r, r.lo)) + "\" y1=\"" + num(py(r, r.lo)) + "\" x2=\"" +
         num(px(r, r.hi)) + "\" y2=\"" + num(py(r, r.hi)) +
         "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
    for (const auto& d : diagrams) {
        const std::string color = d.dimension == 0 ? "#1f77b4" : "#d62728";
        for (const auto& p : d.pairs) {
            const double cx = px(r, p.birth), cy = py(r, p.death);
            if (p.essential) {
                s += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) +
                     "\" r=\"3.5\" fill=\"none\" stroke=\"" + color +
                     "\" stroke-width=\"1.2\"/>\n";
            } else {
                s += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"3\" fill=\"" +
                     color + "\" fill-opacity=\"0.8\"/>\n";
            }
        }
    }
    s += "</svg>\n";
    return s;
}

std::string total_persistence_scatter(const std::vector<PersScatterRow>& rows,
                                      const std::string& title) {
    if (rows.empty()) return empty_svg(title);

    double xlo = rows[0].test_loss, xhi = xlo, ylo = rows[0].total_persistence, yhi = ylo;
    std::vector<double> decays;
    for (const PersScatterRow& row : rows) {
        xlo = std::min(xlo, row.test_loss);
        xhi = std::max(xhi, row.test_loss);
        ylo = std::min(ylo, row.total_persistence);
        yhi = std::max(yhi, row.total_persistence);
        if (std::find(decays.begin(), decays.end(), row.weight_decay) == decays.end())
            decays.push_back(row.weight_decay);
    }
    std::sort(decays.begin(), decays.end());
    const Range xr = make_range(xlo, xhi), yr = make_range(ylo, yhi);

    std::string s = header(title);
    for (const PersScatterRow& row : rows) {
        const std::size_t key = static_cast<std::size_t>(
            std::find(decays.begin(), decays.end(), row.weight_decay) - decays.begin());
        s += "<circle cx=\"" + num(px(xr, row.test_loss)) + "\" cy=\"" +
             num(py(yr, row.total_persistence)) + "\" r=\"4\" fill=\"" + category_color(key) +
             "\" fill-opacity=\"0.85\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace lltk::svg
