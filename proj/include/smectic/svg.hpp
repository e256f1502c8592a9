#ifndef SMECTIC_SVG_HPP
#define SMECTIC_SVG_HPP

// Minimal static SVG line plots: one or more panels side by side, numeric
// ticks, solid or dashed polylines, markers for single points.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "smectic/energy1d.hpp"
#include "smectic/errors.hpp"
#include "smectic/sweep.hpp"

namespace smectic {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    /// Per segment (size x.size() - 1); empty means all solid.
    std::vector<bool> dashed;
};

struct Panel {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<Series> series;
};

namespace detail {

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 1e-300 ? 0.0 : v);
    return buf;
}

inline std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
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

/// Tick positions at 1, 2 or 5 times a power of ten covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int target = 5)
{
    const double span = hi - lo;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> t;
    for (double v = std::ceil(lo / step - 1e-9) * step; v <= hi + 1e-9 * step; v += step)
        t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
}

inline void padded_range(double& lo, double& hi)
{
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
        const double pad = std::max(1e-3, 0.1 * std::abs(hi));
        lo -= pad;
        hi += pad;
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
}

} // namespace detail

/// Standalone SVG document; identical input gives identical bytes.
inline std::string emit_svg(const std::vector<Panel>& panels)
{
    std::size_t points = 0;
    for (const auto& p : panels)
        for (const auto& s : p.series) {
            if (s.x.size() != s.y.size())
                throw InvalidInput("emit_svg: series '" + s.name + "' has mismatched x and y");
            if (!s.dashed.empty() && s.dashed.size() + 1 != s.x.size())
                throw InvalidInput("emit_svg: series '" + s.name + "' has wrong segment style count");
            for (std::size_t i = 0; i < s.x.size(); ++i)
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                    throw InvalidInput("emit_svg: non-finite data in series '" + s.name + "'");
            points += s.x.size();
        }
    if (panels.empty() || points == 0)
        throw InvalidInput("emit_svg: no data to plot");

    const double W = 480, H = 360, ml = 70, mr = 20, mt = 36, mb = 50;
    const double pw = W - ml - mr, ph = H - mt - mb;
    static const char* colors[] = {"#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::num(W * panels.size()) << "\" height=\""
      << detail::num(H) << "\" viewBox=\"0 0 " << detail::num(W * panels.size()) << ' ' << detail::num(H)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const Panel& p = panels[pi];
        double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
        for (const auto& s : p.series)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                xlo = std::min(xlo, s.x[i]);
                xhi = std::max(xhi, s.x[i]);
                ylo = std::min(ylo, s.y[i]);
                yhi = std::max(yhi, s.y[i]);
            }
        if (xlo > xhi) {
            xlo = ylo = 0.0;
            xhi = yhi = 1.0;
        }
        detail::padded_range(xlo, xhi);
        detail::padded_range(ylo, yhi);
        const double ox = W * pi + ml;
        auto X = [&](double x) { return ox + (x - xlo) / (xhi - xlo) * pw; };
        auto Y = [&](double y) { return mt + ph - (y - ylo) / (yhi - ylo) * ph; };

        o << "<g>\n";
        o << "<text x=\"" << detail::num(ox + pw / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
          << detail::xml_escape(p.title) << "</text>\n";
        o << "<rect x=\"" << detail::num(ox) << "\" y=\"" << detail::num(mt) << "\" width=\"" << detail::num(pw)
          << "\" height=\"" << detail::num(ph) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
        for (double t : detail::nice_ticks(xlo, xhi)) {
            o << "<line x1=\"" << detail::num(X(t)) << "\" y1=\"" << detail::num(mt + ph) << "\" x2=\""
              << detail::num(X(t)) << "\" y2=\"" << detail::num(mt + ph + 5) << "\" stroke=\"#000000\"/>\n";
            o << "<text x=\"" << detail::num(X(t)) << "\" y=\"" << detail::num(mt + ph + 18)
              << "\" text-anchor=\"middle\">" << detail::num(t) << "</text>\n";
        }
        for (double t : detail::nice_ticks(ylo, yhi)) {
            o << "<line x1=\"" << detail::num(ox - 5) << "\" y1=\"" << detail::num(Y(t)) << "\" x2=\""
              << detail::num(ox) << "\" y2=\"" << detail::num(Y(t)) << "\" stroke=\"#000000\"/>\n";
            o << "<text x=\"" << detail::num(ox - 8) << "\" y=\"" << detail::num(Y(t) + 4)
              << "\" text-anchor=\"end\">" << detail::num(t) << "</text>\n";
        }
        o << "<text x=\"" << detail::num(ox + pw / 2) << "\" y=\"" << detail::num(H - 10)
          << "\" text-anchor=\"middle\">" << detail::xml_escape(p.xlabel) << "</text>\n";
        o << "<text transform=\"translate(" << detail::num(ox - 52) << ',' << detail::num(mt + ph / 2)
          << ") rotate(-90)\" text-anchor=\"middle\">" << detail::xml_escape(p.ylabel) << "</text>\n";

        for (std::size_t si = 0; si < p.series.size(); ++si) {
            const Series& s = p.series[si];
            const char* col = colors[si % 5];
            const std::size_t n = s.x.size();
            if (n == 1) {
                o << "<circle cx=\"" << detail::num(X(s.x[0])) << "\" cy=\"" << detail::num(Y(s.y[0]))
                  << "\" r=\"3\" fill=\"" << col << "\"/>\n";
                continue;
            }
            // One polyline per run of equally styled segments.
            std::size_t start = 0;
            while (start + 1 < n) {
                const bool dash = !s.dashed.empty() && s.dashed[start];
                std::size_t end = start + 1;
                while (end + 1 < n && (!s.dashed.empty() && s.dashed[end]) == dash)
                    ++end;
                o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\"";
                if (dash)
                    o << " stroke-dasharray=\"6,4\"";
                o << " points=\"";
                for (std::size_t i = start; i <= end; ++i)
                    o << (i > start ? " " : "") << detail::num(X(s.x[i])) << ',' << detail::num(Y(s.y[i]));
                o << "\"/>\n";
                start = end;
            }
        }
        o << "</g>\n";
    }
    o << "</svg>\n";
    return o.str();
}

/// delta_rho_max(T) and theta_max(T) for one branch (the first record's).
/// Segments touching a record with positive Morse index are dashed.
inline std::vector<Panel> bifurcation_panels(const std::vector<SweepRecord>& records)
{
    if (records.empty())
        throw InvalidInput("bifurcation plot: no records");
    const int b = records.front().branch;
    Series rho{"delta_rho_max", {}, {}, {}}, th{"theta_max", {}, {}, {}};
    std::vector<bool> unstable;
    bool any_morse = false;
    for (const auto& r : records) {
        if (r.branch != b)
            continue;
        rho.x.push_back(r.T);
        rho.y.push_back(r.delta_rho_max);
        th.x.push_back(r.T);
        th.y.push_back(r.theta_max);
        unstable.push_back(r.morse_index && *r.morse_index > 0);
        any_morse = any_morse || r.morse_index.has_value();
    }
    if (any_morse)
        for (std::size_t i = 0; i + 1 < unstable.size(); ++i) {
            rho.dashed.push_back(unstable[i] || unstable[i + 1]);
            th.dashed.push_back(unstable[i] || unstable[i + 1]);
        }
    return {Panel{"smectic order", "T", "delta_rho_max", {rho}}, Panel{"tilt", "T", "theta_max", {th}}};
}

inline std::vector<Panel> profile_panels(const DirectorProfile& p)
{
    if (p.z.empty())
        throw InvalidInput("profile plot: no samples");
    return {Panel{"tilt profile", "z", "theta", {Series{"theta", p.z, p.theta, {}}}},
            Panel{"layer profile", "z", "delta_rho", {Series{"delta_rho", p.z, p.delta_rho, {}}}}};
}

} // namespace smectic

#endif
