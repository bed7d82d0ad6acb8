#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace arcspect::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 300.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 20.0, kBottom = 45.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double f : {1.0, 2.0, 5.0})
        if (raw <= f * mag) return f * mag;
    return 10.0 * mag;
}

std::string panel_svg(const Panel& p, double y0) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : p.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
    if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return y0 + kTop + (ymax - y) / (ymax - ymin) * ph; };

    std::string out;
    out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(y0 + kTop) + "\" width=\"" + num(pw) + "\" height=\"" +
           num(ph) + "\" fill=\"none\" stroke=\"#000\"/>\n";
    const double xs = nice_step(xmax - xmin), ys = nice_step(ymax - ymin);
    for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-12; t += xs) {
        out += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(y0 + kTop + ph) + "\" x2=\"" + num(px(t)) + "\" y2=\"" +
               num(y0 + kTop + ph + 5) + "\" stroke=\"#000\"/>\n";
        out += "<text x=\"" + num(px(t)) + "\" y=\"" + num(y0 + kTop + ph + 18) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
    }
    for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-12; t += ys) {
        out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
               num(py(t)) + "\" stroke=\"#000\"/>\n";
        out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py(t) + 4) +
               "\" font-size=\"11\" text-anchor=\"end\">" + tick_label(t) + "</text>\n";
    }
    out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(y0 + kHeight - 8) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + escape(p.x_label) + "</text>\n";
    out += "<text x=\"14\" y=\"" + num(y0 + kTop + ph / 2) + "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           num(y0 + kTop + ph / 2) + ")\">" + escape(p.y_label) + "</text>\n";
    for (double v : p.vertical_lines) {
        if (v < xmin || v > xmax) continue;
        out += "<line x1=\"" + num(px(v)) + "\" y1=\"" + num(y0 + kTop) + "\" x2=\"" + num(px(v)) + "\" y2=\"" +
               num(y0 + kTop + ph) + "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
    }
    double legend_y = y0 + kTop + 14;
    for (const auto& s : p.series) {
        std::string points;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            points += num(px(s.x[i])) + ',' + num(py(s.y[i])) + ' ';
            if (s.markers)
                out += "<circle cx=\"" + num(px(s.x[i])) + "\" cy=\"" + num(py(s.y[i])) + "\" r=\"2.5\" fill=\"" +
                       s.color + "\"/>\n";
        }
        if (!points.empty()) points.pop_back();
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        out += "<line x1=\"" + num(kLeft + pw - 150) + "\" y1=\"" + num(legend_y - 4) + "\" x2=\"" +
               num(kLeft + pw - 130) + "\" y2=\"" + num(legend_y - 4) + "\" stroke=\"" + s.color +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + num(kLeft + pw - 125) + "\" y=\"" + num(legend_y) + "\" font-size=\"11\">" +
               escape(s.label) + "</text>\n";
        legend_y += 15;
    }
    return out;
}

}  // namespace

std::string line_plot(const std::string& title, const std::vector<Panel>& panels) {
    const double total = 30.0 + kHeight * static_cast<double>(panels.size());
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(total) +
           "\" viewBox=\"0 0 " + num(kWidth) + ' ' + num(total) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    out += "<text x=\"" + num(kWidth / 2) + "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">" + escape(title) +
           "</text>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) out += panel_svg(panels[i], 30.0 + kHeight * static_cast<double>(i));
    out += "</svg>\n";
    return out;
}

}  // namespace arcspect::cli
