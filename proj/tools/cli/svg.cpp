// SPDX-License-Identifier: Apache-2.0
//
// nfcrb - wideband compressed-domain Cramer-Rao bounds for near-field arrays
// Copyright (C) 2026 The nfcrb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace nfcrb::cli::svg {

namespace {

constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 18.0;
constexpr double kMarginTop = 34.0;
constexpr double kMarginBottom = 48.0;
constexpr double kColorbarSpace = 74.0;
constexpr double kFigureTitle = 28.0;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v)
{
    if (v == 0.0) {
        return "0";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string xml(const std::string &s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;
    double p0 = 0.0; ///< pixel at lo
    double p1 = 1.0; ///< pixel at hi

    double t(double v) const { return log ? std::log10(v) : v; }
    bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
    double map(double v) const
    {
        const double a = t(lo), b = t(hi);
        return p0 + (t(v) - a) / (b - a) * (p1 - p0);
    }
};

Axis fit_axis(const std::vector<double> &values, bool log)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values) {
        if (!std::isfinite(v) || (log && v <= 0.0)) {
            continue;
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    Axis ax;
    ax.log = log;
    if (!std::isfinite(lo)) {
        lo = log ? 1.0 : 0.0;
        hi = log ? 10.0 : 1.0;
    }
    double a = log ? std::log10(lo) : lo;
    double b = log ? std::log10(hi) : hi;
    if (b - a < 1e-12 * std::max(1.0, std::abs(a))) {
        const double w = log ? 0.5 : std::max(0.5 * std::abs(a), 0.5);
        a -= w;
        b += w;
    } else {
        const double pad = 0.04 * (b - a);
        a -= pad;
        b += pad;
    }
    ax.lo = log ? std::pow(10.0, a) : a;
    ax.hi = log ? std::pow(10.0, b) : b;
    return ax;
}

std::vector<double> axis_ticks(const Axis &ax)
{
    return ax.log ? log_ticks(ax.lo, ax.hi) : linear_ticks(ax.lo, ax.hi);
}

void draw_frame(std::ostringstream &o, const Axis &xa, const Axis &ya, const std::string &title,
                const std::string &xlabel, const std::string &ylabel, bool grid = true)
{
    const double left = xa.p0, right = xa.p1, bottom = ya.p0, top = ya.p1;
    for (double tx : axis_ticks(xa)) {
        const double px = xa.map(tx);
        if (grid) {
            o << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(px) << "\" y2=\""
              << fmt(bottom) << "\" stroke=\"#e4e4e4\"/>\n";
        }
        o << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(bottom) << "\" x2=\"" << fmt(px) << "\" y2=\""
          << fmt(bottom + 4) << "\" stroke=\"#333\"/>\n";
        o << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(bottom + 16) << "\" text-anchor=\"middle\">"
          << tick_label(tx) << "</text>\n";
    }
    for (double ty : axis_ticks(ya)) {
        const double py = ya.map(ty);
        if (grid) {
            o << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(right) << "\" y2=\""
              << fmt(py) << "\" stroke=\"#e4e4e4\"/>\n";
        }
        o << "<line x1=\"" << fmt(left - 4) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(left) << "\" y2=\""
          << fmt(py) << "\" stroke=\"#333\"/>\n";
        o << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(py + 4) << "\" text-anchor=\"end\">"
          << tick_label(ty) << "</text>\n";
    }
    o << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(right - left)
      << "\" height=\"" << fmt(bottom - top) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    o << "<text x=\"" << fmt(0.5 * (left + right)) << "\" y=\"" << fmt(top - 12)
      << "\" text-anchor=\"middle\" font-weight=\"bold\">" << xml(title) << "</text>\n";
    o << "<text x=\"" << fmt(0.5 * (left + right)) << "\" y=\"" << fmt(bottom + 36)
      << "\" text-anchor=\"middle\">" << xml(xlabel) << "</text>\n";
    const double ly = 0.5 * (top + bottom);
    const double lx = left - 56;
    o << "<text x=\"" << fmt(lx) << "\" y=\"" << fmt(ly) << "\" text-anchor=\"middle\" transform=\"rotate(-90 "
      << fmt(lx) << " " << fmt(ly) << ")\">" << xml(ylabel) << "</text>\n";
}

void clip_def(std::ostringstream &o, const std::string &id, const Axis &xa, const Axis &ya)
{
    o << "<clipPath id=\"" << id << "\"><rect x=\"" << fmt(xa.p0) << "\" y=\"" << fmt(ya.p1)
      << "\" width=\"" << fmt(xa.p1 - xa.p0) << "\" height=\"" << fmt(ya.p0 - ya.p1)
      << "\"/></clipPath>\n";
}

void render_line(std::ostringstream &o, const LinePanel &p, double ox, double oy, double w, double h,
                 int index)
{
    std::vector<double> xs, ys;
    for (const auto &s : p.series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
        ys.insert(ys.end(), s.band_lo.begin(), s.band_lo.end());
        ys.insert(ys.end(), s.band_hi.begin(), s.band_hi.end());
    }
    for (const auto &v : p.vlines) {
        xs.push_back(v.x);
    }
    Axis xa = fit_axis(xs, p.logx);
    Axis ya = fit_axis(ys, p.logy);
    xa.p0 = ox + kMarginLeft;
    xa.p1 = ox + w - kMarginRight;
    ya.p0 = oy + h - kMarginBottom;
    ya.p1 = oy + kMarginTop;

    const std::string clip = "clip" + std::to_string(index);
    clip_def(o, clip, xa, ya);
    draw_frame(o, xa, ya, p.title, p.xlabel, p.ylabel);
    o << "<g clip-path=\"url(#" << clip << ")\">\n";

    for (const auto &s : p.series) {
        if (s.band_lo.size() == s.x.size() && s.band_hi.size() == s.x.size() && !s.x.empty()) {
            std::string pts;
            std::string back;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!xa.usable(s.x[i]) || !ya.usable(s.band_lo[i]) || !ya.usable(s.band_hi[i])) {
                    continue;
                }
                pts += fmt(xa.map(s.x[i])) + "," + fmt(ya.map(s.band_hi[i])) + " ";
                back = fmt(xa.map(s.x[i])) + "," + fmt(ya.map(s.band_lo[i])) + " " + back;
            }
            o << "<polygon points=\"" << pts << back << "\" fill=\"" << s.color
              << "\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";
        }
    }
    for (const auto &s : p.series) {
        std::string d;
        bool pen = false;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!xa.usable(s.x[i]) || !ya.usable(s.y[i])) {
                pen = false;
                continue;
            }
            d += (pen ? "L" : "M") + fmt(xa.map(s.x[i])) + " " + fmt(ya.map(s.y[i])) + " ";
            pen = true;
        }
        o << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
        if (!s.dash.empty()) {
            o << " stroke-dasharray=\"" << s.dash << "\"";
        }
        o << "/>\n";
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (xa.usable(s.x[i]) && ya.usable(s.y[i])) {
                    o << "<circle cx=\"" << fmt(xa.map(s.x[i])) << "\" cy=\"" << fmt(ya.map(s.y[i]))
                      << "\" r=\"2.4\" fill=\"" << s.color << "\"/>\n";
                }
            }
        }
    }
    for (const auto &v : p.vlines) {
        if (!xa.usable(v.x)) {
            continue;
        }
        const double px = xa.map(v.x);
        o << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(ya.p1) << "\" x2=\"" << fmt(px) << "\" y2=\""
          << fmt(ya.p0) << "\" stroke=\"#555\" stroke-dasharray=\"2 3\"/>\n";
        o << "<text x=\"" << fmt(px + 4) << "\" y=\"" << fmt(ya.p1 + 14) << "\" fill=\"#555\">"
          << xml(v.label) << "</text>\n";
    }
    o << "</g>\n";

    // Legend, top right inside the frame.
    const double lw = 190.0;
    const double row = 15.0;
    const double lh = row * static_cast<double>(p.series.size()) + 6;
    const bool left_side = p.legend == Legend::BottomLeft;
    const double lx = left_side ? xa.p0 + 6 : xa.p1 - lw - 6;
    double ly = ya.p1 + 6;
    if (p.legend == Legend::CenterRight) {
        ly = 0.5 * (ya.p0 + ya.p1) - 0.5 * lh;
    } else if (p.legend == Legend::BottomRight || p.legend == Legend::BottomLeft) {
        ly = ya.p0 - lh - 6;
    }
    o << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly) << "\" width=\"" << fmt(lw) << "\" height=\""
      << fmt(lh)
      << "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#bbb\"/>\n";
    for (const auto &s : p.series) {
        ly += row;
        o << "<line x1=\"" << fmt(lx + 6) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\"" << fmt(lx + 30)
          << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
        if (!s.dash.empty()) {
            o << " stroke-dasharray=\"" << s.dash << "\"";
        }
        o << "/>\n<text x=\"" << fmt(lx + 36) << "\" y=\"" << fmt(ly) << "\">" << xml(s.label) << "</text>\n";
    }
}

std::vector<double> cell_edges(const std::vector<double> &c)
{
    std::vector<double> e(c.size() + 1);
    if (c.size() == 1) {
        e[0] = c[0] - 0.5;
        e[1] = c[0] + 0.5;
        return e;
    }
    for (std::size_t i = 1; i < c.size(); ++i) {
        e[i] = 0.5 * (c[i - 1] + c[i]);
    }
    e.front() = c.front() - 0.5 * (c[1] - c[0]);
    e.back() = c.back() + 0.5 * (c.back() - c[c.size() - 2]);
    return e;
}

void render_heat(std::ostringstream &o, const HeatPanel &p, double ox, double oy, double w, double h,
                 int index)
{
    if (p.x.empty() || p.y.empty() || p.z.size() != p.x.size()) {
        return;
    }
    // Work in transformed y so log cells have equal visual weight.
    std::vector<double> ty(p.y.size());
    for (std::size_t j = 0; j < p.y.size(); ++j) {
        ty[j] = p.logy ? std::log10(p.y[j]) : p.y[j];
    }
    const std::vector<double> ex = cell_edges(p.x);
    const std::vector<double> ey = cell_edges(ty);

    Axis xa;
    xa.lo = ex.front();
    xa.hi = ex.back();
    xa.p0 = ox + kMarginLeft;
    xa.p1 = ox + w - kMarginRight - kColorbarSpace;
    Axis ya;
    ya.log = p.logy;
    ya.lo = p.logy ? std::pow(10.0, ey.front()) : ey.front();
    ya.hi = p.logy ? std::pow(10.0, ey.back()) : ey.back();
    ya.p0 = oy + h - kMarginBottom;
    ya.p1 = oy + kMarginTop;
    auto map_ty = [&](double t) { return ya.p0 + (t - ey.front()) / (ey.back() - ey.front()) * (ya.p1 - ya.p0); };

    double zmin = std::numeric_limits<double>::infinity();
    double zmax = -zmin;
    for (const auto &col : p.z) {
        for (double v : col) {
            if (std::isfinite(v)) {
                zmin = std::min(zmin, v);
                zmax = std::max(zmax, v);
            }
        }
    }
    if (!std::isfinite(zmin)) {
        zmin = 0.0;
        zmax = 1.0;
    }
    if (zmax <= zmin) {
        zmax = zmin + 1.0;
    }
    constexpr int kLevels = 64;
    auto level_of = [&](double v) {
        const double t = (v - zmin) / (zmax - zmin);
        return std::clamp(static_cast<int>(t * kLevels), 0, kLevels - 1);
    };

    const std::string clip = "clip" + std::to_string(index);
    clip_def(o, clip, xa, ya);
    o << "<g clip-path=\"url(#" << clip << ")\" shape-rendering=\"crispEdges\">\n";
    for (std::size_t j = 0; j < p.y.size(); ++j) {
        const double y0 = map_ty(ey[j + 1]);
        const double y1 = map_ty(ey[j]);
        std::size_t i = 0;
        while (i < p.x.size()) {
            const double v = p.z[i][j];
            const bool finite = std::isfinite(v);
            const int lev = finite ? level_of(v) : -1;
            std::size_t k = i + 1;
            while (k < p.x.size() && (std::isfinite(p.z[k][j]) ? level_of(p.z[k][j]) : -1) == lev) {
                ++k;
            }
            const double x0 = xa.map(ex[i]);
            const double x1 = xa.map(ex[k]);
            o << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(x1 - x0 + 0.3)
              << "\" height=\"" << fmt(y1 - y0 + 0.3) << "\" fill=\""
              << (finite ? colormap((lev + 0.5) / kLevels) : std::string("#ffffff")) << "\"/>\n";
            i = k;
        }
    }
    o << "</g>\n";

    if (p.contour) {
        const auto segs = contour_segments(p.x, ty, p.z, *p.contour);
        o << "<path d=\"";
        for (const auto &s : segs) {
            o << "M" << fmt(xa.map(s.x0)) << " " << fmt(map_ty(s.y0)) << " L" << fmt(xa.map(s.x1)) << " "
              << fmt(map_ty(s.y1)) << " ";
        }
        o << "\" fill=\"none\" stroke=\"white\" stroke-width=\"1.6\" clip-path=\"url(#" << clip << ")\"/>\n";
    }
    draw_frame(o, xa, ya, p.title, p.xlabel, p.ylabel, false);

    // Colour bar.
    const double bx = xa.p1 + 14;
    const double bw = 14;
    for (int l = 0; l < kLevels; ++l) {
        const double yb = ya.p0 + (ya.p1 - ya.p0) * l / kLevels;
        const double yt = ya.p0 + (ya.p1 - ya.p0) * (l + 1) / kLevels;
        o << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(yt) << "\" width=\"" << fmt(bw) << "\" height=\""
          << fmt(yb - yt + 0.3) << "\" fill=\"" << colormap((l + 0.5) / kLevels) << "\"/>\n";
    }
    o << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(ya.p1) << "\" width=\"" << fmt(bw) << "\" height=\""
      << fmt(ya.p0 - ya.p1) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (double t : linear_ticks(zmin, zmax, 5)) {
        if (t < zmin || t > zmax) {
            continue;
        }
        const double py = ya.p0 + (t - zmin) / (zmax - zmin) * (ya.p1 - ya.p0);
        o << "<text x=\"" << fmt(bx + bw + 4) << "\" y=\"" << fmt(py + 4) << "\">" << tick_label(t)
          << "</text>\n";
    }
    if (p.contour && *p.contour >= zmin && *p.contour <= zmax) {
        const double py = ya.p0 + (*p.contour - zmin) / (zmax - zmin) * (ya.p1 - ya.p0);
        o << "<line x1=\"" << fmt(bx) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(bx + bw) << "\" y2=\""
          << fmt(py) << "\" stroke=\"white\" stroke-width=\"1.6\"/>\n";
    }
    const double cy = 0.5 * (ya.p0 + ya.p1);
    const double cx = bx + bw + 50;
    o << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(cy) << "\" text-anchor=\"middle\" transform=\"rotate(-90 "
      << fmt(cx) << " " << fmt(cy) << ")\">" << xml(p.colorbar_label) << "</text>\n";
}

} // namespace

std::vector<double> linear_ticks(double lo, double hi, int target)
{
    std::vector<double> out;
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        return out;
    }
    const double raw = (hi - lo) / std::max(target, 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) {
            break;
        }
    }
    const double first = std::ceil(lo / step - 1e-9) * step;
    for (double v = first; v <= hi + 1e-9 * step; v += step) {
        out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    }
    return out;
}

std::vector<double> log_ticks(double lo, double hi)
{
    std::vector<double> out;
    if (!(lo > 0.0) || !(hi > lo)) {
        return out;
    }
    const int a = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
    const int b = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
    if (b - a >= 1) {
        for (int e = a; e <= b; ++e) {
            out.push_back(std::pow(10.0, e));
        }
        return out;
    }
    const int base = static_cast<int>(std::floor(std::log10(lo)));
    for (int e = base; e <= base + 1; ++e) {
        for (double m : {1.0, 2.0, 5.0}) {
            const double v = m * std::pow(10.0, e);
            if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9)) {
                out.push_back(v);
            }
        }
    }
    if (out.size() < 2) {
        out = linear_ticks(lo, hi, 4);
    }
    return out;
}

std::vector<Segment> contour_segments(const std::vector<double> &x, const std::vector<double> &y,
                                      const std::vector<std::vector<double>> &z, double level)
{
    std::vector<Segment> segs;
    if (x.size() < 2 || y.size() < 2 || z.size() != x.size()) {
        return segs;
    }
    struct Pt {
        double x, y;
    };
    auto lerp = [level](double za, double zb, double a, double b) {
        return a + (level - za) / (zb - za) * (b - a);
    };
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        for (std::size_t j = 0; j + 1 < y.size(); ++j) {
            const std::array<double, 4> c{z[i][j], z[i + 1][j], z[i + 1][j + 1], z[i][j + 1]};
            if (!std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); })) {
                continue;
            }
            const std::array<Pt, 4> corner{Pt{x[i], y[j]}, Pt{x[i + 1], y[j]}, Pt{x[i + 1], y[j + 1]},
                                           Pt{x[i], y[j + 1]}};
            std::array<bool, 4> above{};
            for (int q = 0; q < 4; ++q) {
                above[q] = c[q] >= level;
            }
            std::array<Pt, 4> cross{};
            std::array<bool, 4> has{};
            int n = 0;
            for (int e = 0; e < 4; ++e) {
                const int a = e, b = (e + 1) % 4;
                if (above[a] != above[b]) {
                    has[e] = true;
                    cross[e] = {lerp(c[a], c[b], corner[a].x, corner[b].x),
                                lerp(c[a], c[b], corner[a].y, corner[b].y)};
                    ++n;
                }
            }
            if (n == 2) {
                std::array<Pt, 2> ends{};
                int m = 0;
                for (int e = 0; e < 4; ++e) {
                    if (has[e]) {
                        ends[m++] = cross[e];
                    }
                }
                segs.push_back({ends[0].x, ends[0].y, ends[1].x, ends[1].y});
            } else if (n == 4) {
                const bool centre_above = 0.25 * (c[0] + c[1] + c[2] + c[3]) >= level;
                if (above[0] != centre_above) {
                    segs.push_back({cross[3].x, cross[3].y, cross[0].x, cross[0].y});
                    segs.push_back({cross[1].x, cross[1].y, cross[2].x, cross[2].y});
                } else {
                    segs.push_back({cross[0].x, cross[0].y, cross[1].x, cross[1].y});
                    segs.push_back({cross[2].x, cross[2].y, cross[3].x, cross[3].y});
                }
            }
        }
    }
    return segs;
}

std::string colormap(double t)
{
    static constexpr std::array<std::array<double, 3>, 9> kStops{{
        {0.267, 0.005, 0.329},
        {0.283, 0.141, 0.458},
        {0.254, 0.265, 0.530},
        {0.207, 0.372, 0.553},
        {0.164, 0.471, 0.558},
        {0.128, 0.567, 0.551},
        {0.135, 0.659, 0.518},
        {0.478, 0.821, 0.318},
        {0.993, 0.906, 0.144},
    }};
    if (!std::isfinite(t)) {
        t = 0.0;
    }
    t = std::clamp(t, 0.0, 1.0) * (kStops.size() - 1);
    const std::size_t k = std::min(static_cast<std::size_t>(t), kStops.size() - 2);
    const double f = t - static_cast<double>(k);
    char buf[8];
    int rgb[3];
    for (int ch = 0; ch < 3; ++ch) {
        const double v = kStops[k][ch] + f * (kStops[k + 1][ch] - kStops[k][ch]);
        rgb[ch] = static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    }
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

std::string render(const Figure &fig)
{
    const double pw = fig.panel_width;
    const double ph = fig.panel_height;
    const double top = fig.title.empty() ? 0.0 : kFigureTitle;
    const double width = pw * static_cast<double>(std::max<std::size_t>(fig.panels.size(), 1));
    const double height = ph + top;

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height)
      << "\" font-family=\"DejaVu Sans, Helvetica, Arial, sans-serif\" font-size=\"11\">\n";
    if (!fig.metadata_json.empty()) {
        std::string meta = fig.metadata_json;
        for (std::size_t pos; (pos = meta.find("]]>")) != std::string::npos;) {
            meta.replace(pos, 3, "]]]]><![CDATA[>");
        }
        o << "<metadata><![CDATA[" << meta << "]]></metadata>\n";
    }
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!fig.title.empty()) {
        o << "<text x=\"" << fmt(0.5 * width) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
          << xml(fig.title) << "</text>\n";
    }
    for (std::size_t k = 0; k < fig.panels.size(); ++k) {
        const double ox = pw * static_cast<double>(k);
        const int id = static_cast<int>(k);
        std::visit(
            [&](const auto &panel) {
                using T = std::decay_t<decltype(panel)>;
                if constexpr (std::is_same_v<T, LinePanel>) {
                    render_line(o, panel, ox, top, pw, ph, id);
                } else {
                    render_heat(o, panel, ox, top, pw, ph, id);
                }
            },
            fig.panels[k]);
    }
    o << "</svg>\n";
    return o.str();
}

} // namespace nfcrb::cli::svg
