#include "samevo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace samevo {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kLeft = 70;
constexpr int kRight = 24;
constexpr int kTop = 44;
constexpr int kBottom = 52;

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

std::string escape_xml(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Domain {
    double lo = 0.0;
    double hi = 1.0;
};

Domain y_domain(const std::vector<SvgSeries>& series) {
    double lo = 0.0, hi = 0.0;
    bool seen = false;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.mean.size(); ++i) {
            const double h = i < s.half_width.size() ? s.half_width[i] : 0.0;
            if (!std::isfinite(s.mean[i]) || !std::isfinite(h)) continue;
            lo = seen ? std::min(lo, s.mean[i] - h) : s.mean[i] - h;
            hi = seen ? std::max(hi, s.mean[i] + h) : s.mean[i] + h;
            seen = true;
        }
    }
    if (!seen) return {0.0, 1.0};
    if (hi - lo < 1e-12) {
        lo -= 1.0;
        hi += 1.0;
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    return {lo, hi};
}

} // namespace

std::string render_line_chart_svg(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<SvgSeries>& series) {
    std::size_t n = 0;
    for (const auto& s : series) n = std::max(n, s.mean.size());
    const Domain yd = y_domain(series);
    const double x_hi = n > 1 ? static_cast<double>(n - 1) : 1.0;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    auto px = [&](double x) { return kLeft + plot_w * (x / x_hi); };
    auto py = [&](double y) { return kTop + plot_h * (1.0 - (y - yd.lo) / (yd.hi - yd.lo)); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
           "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " +
           std::to_string(kWidth) + " " + std::to_string(kHeight) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(kWidth / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           escape_xml(title) + "</text>\n";

    for (int t = 0; t <= 5; ++t) {
        const double fx = x_hi * t / 5.0;
        const double gx = px(fx);
        svg += "<line x1=\"" + fmt("%.2f", gx) + "\" y1=\"" + std::to_string(kTop) + "\" x2=\"" +
               fmt("%.2f", gx) + "\" y2=\"" + std::to_string(kHeight - kBottom) +
               "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", gx) + "\" y=\"" + std::to_string(kHeight - kBottom + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt("%.4g", fx) + "</text>\n";
        const double fy = yd.lo + (yd.hi - yd.lo) * t / 5.0;
        const double gy = py(fy);
        svg += "<line x1=\"" + std::to_string(kLeft) + "\" y1=\"" + fmt("%.2f", gy) + "\" x2=\"" +
               std::to_string(kWidth - kRight) + "\" y2=\"" + fmt("%.2f", gy) +
               "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + std::to_string(kLeft - 8) + "\" y=\"" + fmt("%.2f", gy + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt("%.4g", fy) + "</text>\n";
    }

    svg += "<line x1=\"" + std::to_string(kLeft) + "\" y1=\"" + std::to_string(kHeight - kBottom) +
           "\" x2=\"" + std::to_string(kWidth - kRight) + "\" y2=\"" +
           std::to_string(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + std::to_string(kLeft) + "\" y1=\"" + std::to_string(kTop) + "\" x2=\"" +
           std::to_string(kLeft) + "\" y2=\"" + std::to_string(kHeight - kBottom) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + std::to_string(kLeft + static_cast<int>(plot_w) / 2) + "\" y=\"" +
           std::to_string(kHeight - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           escape_xml(x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + std::to_string(kTop + static_cast<int>(plot_h) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
           std::to_string(kTop + static_cast<int>(plot_h) / 2) + ")\">" + escape_xml(y_label) +
           "</text>\n";

    for (const auto& s : series) {
        if (s.mean.empty()) continue;
        if (!s.half_width.empty()) {
            std::string band = "<polygon fill=\"" + escape_xml(s.color) +
                               "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
            for (std::size_t i = 0; i < s.mean.size(); ++i) {
                const double h = i < s.half_width.size() ? s.half_width[i] : 0.0;
                band += fmt("%.2f", px(static_cast<double>(i))) + "," +
                        fmt("%.2f", py(s.mean[i] + h)) + " ";
            }
            for (std::size_t i = s.mean.size(); i-- > 0;) {
                const double h = i < s.half_width.size() ? s.half_width[i] : 0.0;
                band += fmt("%.2f", px(static_cast<double>(i))) + "," +
                        fmt("%.2f", py(s.mean[i] - h)) + " ";
            }
            band += "\"/>\n";
            svg += band;
        }
        std::string line = "<polyline fill=\"none\" stroke=\"" + escape_xml(s.color) +
                           "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < s.mean.size(); ++i) {
            line += fmt("%.2f", px(static_cast<double>(i))) + "," + fmt("%.2f", py(s.mean[i])) + " ";
        }
        line += "\"/>\n";
        svg += line;
    }

    int ly = kTop + 10;
    for (const auto& s : series) {
        svg += "<line x1=\"" + std::to_string(kWidth - kRight - 150) + "\" y1=\"" +
               std::to_string(ly - 4) + "\" x2=\"" + std::to_string(kWidth - kRight - 126) +
               "\" y2=\"" + std::to_string(ly - 4) + "\" stroke=\"" + escape_xml(s.color) +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + std::to_string(kWidth - kRight - 120) + "\" y=\"" +
               std::to_string(ly) + "\" font-family=\"sans-serif\" font-size=\"12\">" +
               escape_xml(s.label) + "</text>\n";
        ly += 18;
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace samevo
