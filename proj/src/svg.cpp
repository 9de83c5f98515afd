#include "mog3p/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mog3p/error.hpp"

namespace mog3p::svg {

namespace {

constexpr double kWidth = 480, kHeight = 400;
constexpr double kLeft = 60, kRight = 130, kTop = 40, kBottom = 50;

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void header(std::ostringstream& os, const PlotText& text) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    if (!text.comment.empty()) {
        std::string c = text.comment;
        for (std::size_t p; (p = c.find("--")) != std::string::npos;) c.replace(p, 2, "- -");
        os << "<!-- " << c << " -->\n";
    }
    os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(text.title) << "</text>\n";
}

}  // namespace

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string scatter(const Matrix& coords, std::span<const int> labels,
                    std::span<const std::string> class_names, const PlotText& text) {
    if (coords.cols() < 2) throw DimensionError("scatter: need 2 coordinate columns");
    if (labels.size() != coords.rows()) throw DimensionError("scatter: label count mismatch");
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    for (std::size_t i = 0; i < coords.rows(); ++i) {
        const double x = coords(i, 0), y = coords(i, 1);
        xmin = i ? std::min(xmin, x) : x;
        xmax = i ? std::max(xmax, x) : x;
        ymin = i ? std::min(ymin, y) : y;
        ymax = i ? std::max(ymax, y) : y;
    }
    auto widen = [](double& lo, double& hi) {
        const double span = hi - lo;
        const double pad = span > 0 ? 0.05 * span : std::max(1.0, std::abs(lo)) * 0.5;
        lo -= pad;
        hi += pad;
    };
    widen(xmin, xmax);
    widen(ymin, ymax);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return kTop + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream os;
    header(os, text);
    os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\""
       << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 4.0;
        const double fy = ymin + (ymax - ymin) * t / 4.0;
        os << "<text x=\"" << num(sx(fx)) << "\" y=\"" << num(kTop + ph + 16)
           << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt_tick(fx) << "</text>\n";
        os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy(fy) + 3)
           << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_tick(fy) << "</text>\n";
    }
    os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 12)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(text.x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
       << num(kTop + ph / 2) << ")\">" << escape(text.y_label) << "</text>\n";
    os << "<g>\n";
    for (std::size_t i = 0; i < coords.rows(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        os << "<circle class=\"point\" cx=\"" << num(sx(coords(i, 0))) << "\" cy=\"" << num(sy(coords(i, 1)))
           << "\" r=\"2.5\" fill=\"" << kPalette[c % kPalette.size()] << "\" fill-opacity=\"0.7\"/>\n";
    }
    os << "</g>\n";
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        const double y = kTop + 14 + 18.0 * static_cast<double>(c);
        os << "<rect x=\"" << num(kWidth - kRight + 14) << "\" y=\"" << num(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
           << kPalette[c % kPalette.size()] << "\"/>\n";
        os << "<text x=\"" << num(kWidth - kRight + 30) << "\" y=\"" << num(y) << "\" font-size=\"11\">"
           << escape(class_names[c]) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string bar_chart(std::span<const std::string> names, std::span<const std::size_t> values,
                      const PlotText& text) {
    if (names.size() != values.size()) throw DimensionError("bar_chart: name/value count mismatch");
    const double pw = kWidth - kLeft - 30, ph = kHeight - kTop - kBottom;
    std::size_t top = 1;
    for (auto v : values) top = std::max(top, v);
    std::ostringstream os;
    header(os, text);
    os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
       << num(kTop + ph) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
       << num(kTop + ph) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(kTop + 4) << "\" text-anchor=\"end\" font-size=\"10\">" << top
       << "</text>\n";
    os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(kTop + ph) << "\" text-anchor=\"end\" font-size=\"10\">0</text>\n";
    const double slot = values.empty() ? pw : pw / static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double h = ph * static_cast<double>(values[i]) / static_cast<double>(top);
        const double x = kLeft + slot * static_cast<double>(i) + slot * 0.15;
        os << "<rect class=\"bar\" x=\"" << num(x) << "\" y=\"" << num(kTop + ph - h) << "\" width=\"" << num(slot * 0.7)
           << "\" height=\"" << num(h) << "\" fill=\"#1f77b4\"/>\n";
        os << "<text x=\"" << num(x + slot * 0.35) << "\" y=\"" << num(kTop + ph + 14)
           << "\" text-anchor=\"middle\" font-size=\"10\">" << escape(names[i]) << "</text>\n";
    }
    os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 12)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(text.x_label) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace mog3p::svg
