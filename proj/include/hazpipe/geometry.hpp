// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace hazpipe {

/// Axis-aligned box in pixel coordinates, origin top-left, continuous.
struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    bool valid() const { return x_min <= x_max && y_min <= y_max; }

    double center_x() const { return 0.5 * (x_min + x_max); }
    double center_y() const { return 0.5 * (y_min + y_max); }

    bool operator==(const BBox&) const = default;
};

/// Intersection of two boxes; degenerate (zero-area, valid) when disjoint.
BBox intersect(const BBox& a, const BBox& b);

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

/// Convex polygon, vertices in counter-clockwise order (positive signed area
/// under the shoelace formula on raw coordinates).
struct Polygon {
    std::vector<Point> vertices;
};

/// Row-major bit grid; data values are 0 or 1.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    void set(int x, int y, std::uint8_t v) { data[static_cast<std::size_t>(y) * width + x] = v; }

    std::size_t count() const {
        return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
    }
};

/// Intersection over union. Total: returns 0 for disjoint boxes and when both
/// boxes are degenerate (a zero-area detection must never suppress anything).
double iou(const BBox& a, const BBox& b);

/// Cross product of (a - origin) x (b - origin); > 0 means a counter-clockwise turn.
double cross(const Point& origin, const Point& a, const Point& b);

/// Minimal convex polygon containing every input point (monotone chain).
/// Vertices are a strictly convex subset of the input, CCW, starting at the
/// lexicographically smallest point; collinear boundary points are dropped.
/// Throws DegenerateInput for fewer than 3 points or an all-collinear set.
Polygon convex_hull(std::span<const Point> points);

bool point_in_convex_polygon(const Point& p, const Polygon& poly, double eps = 1e-9);

/// Shrinks the box by `fraction` of its width on each horizontal side and of
/// its height on each vertical side. Throws InvalidFraction outside [0, 0.45].
BBox pad_box_inward(const BBox& box, double fraction);

/// Centers (x+0.5, y+0.5) of every foreground cell, row-major.
/// Throws EmptyMask when the mask has no foreground pixels.
std::vector<Point> mask_to_points(const BinaryMask& mask);

}  // namespace hazpipe
