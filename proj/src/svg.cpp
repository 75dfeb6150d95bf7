#include "yfl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "yfl/field_io.hpp"

namespace yfl {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::vector<PlotLine>& lines, const std::string& comment, bool log_y) {
    const double W = 640, H = 400, left = 80, right = 20, top = 40, bottom = 50;
    auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    bool any = false;
    for (const auto& line : lines) {
        for (std::size_t i = 0; i < line.x.size() && i < line.y.size(); ++i) {
            const double x = line.x[i], y = line.y[i];
            if (!std::isfinite(x) || !std::isfinite(y) || (log_y && !(y > 0))) continue;
            const double yy = ty(y);
            if (!any) {
                x0 = x1 = x;
                y0 = y1 = yy;
                any = true;
            }
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, yy);
            y1 = std::max(y1, yy);
        }
    }
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) {
        const double pad = y0 == 0 ? 1 : std::abs(y0) * 1e-6;
        y0 -= pad;
        y1 += pad;
    }
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
    auto py = [&](double y) { return H - bottom - (ty(y) - y0) / (y1 - y0) * (H - top - bottom); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!comment.empty()) os << "<!-- " << escape(comment) << " -->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
       << escape(title) << "</text>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
       << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x0 + (x1 - x0) * k / 4.0;
        const double fy = y0 + (y1 - y0) * k / 4.0;
        const double sx = left + (W - left - right) * k / 4.0;
        const double sy = H - bottom - (H - top - bottom) * k / 4.0;
        os << "<text x=\"" << num(sx) << "\" y=\"" << H - bottom + 16
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << tick(fx) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << num(sy + 3)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
           << (log_y ? "1e" + tick(fy) : tick(fy)) << "</text>\n";
    }
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(x_label) << "</text>\n";
    for (std::size_t l = 0; l < lines.size(); ++l) {
        const auto& line = lines[l];
        const char* color = kColors[l % (sizeof kColors / sizeof *kColors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < line.x.size() && i < line.y.size(); ++i) {
            const double x = line.x[i], y = line.y[i];
            if (!std::isfinite(x) || !std::isfinite(y) || (log_y && !(y > 0))) continue;
            os << (first ? "" : " ") << num(px(x)) << "," << num(py(y));
            first = false;
        }
        os << "\"/>\n";
        os << "<text x=\"" << W - right - 4 << "\" y=\"" << top + 14 * (l + 1)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
           << escape(line.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace yfl
