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

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nfcrb::cli::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    /// Optional shaded band (same length as x), e.g. min/max across seeds.
    std::vector<double> band_lo;
    std::vector<double> band_hi;
    std::string color = "#1f77b4";
    std::string dash; ///< SVG stroke-dasharray, empty for solid
    bool markers = true;
};

struct VLine {
    double x = 0.0;
    std::string label;
};

enum class Legend { TopRight, CenterRight, BottomRight, BottomLeft };

struct LinePanel {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool logx = false;
    bool logy = false;
    std::vector<Series> series;
    std::vector<VLine> vlines;
    Legend legend = Legend::TopRight;
};

/// z[i][j] is the value at (x[i], y[j]). Cells are drawn between midpoints of
/// neighbouring coordinates.
struct HeatPanel {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::vector<double>> z;
    bool logy = false;
    std::optional<double> contour;
    std::string colorbar_label;
};

using Panel = std::variant<LinePanel, HeatPanel>;

struct Figure {
    std::string title;
    std::vector<Panel> panels;
    int panel_width = 480;
    int panel_height = 360;
    /// Embedded verbatim in a <metadata> element.
    std::string metadata_json;
};

std::string render(const Figure &fig);

/// Round-number ticks (1, 2, 5 x 10^k) covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi, int target = 6);
/// Powers of ten inside [lo, hi]; falls back to 1-2-5 steps when the range
/// spans less than one decade.
std::vector<double> log_ticks(double lo, double hi);

struct Segment {
    double x0, y0, x1, y1;
};

/// Marching squares on the node grid (x[i], y[j], z[i][j]). Segment end points
/// are linearly interpolated in the given coordinates.
std::vector<Segment> contour_segments(const std::vector<double> &x, const std::vector<double> &y,
                                      const std::vector<std::vector<double>> &z, double level);

/// Viridis-like colour for t in [0, 1] as "#rrggbb".
std::string colormap(double t);

} // namespace nfcrb::cli::svg
