// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/geometry.hpp"

#include "hazpipe/errors.hpp"


namespace hazpipe {

BBox intersect(const BBox& a, const BBox& b) {
    BBox r{std::max(a.x_min, b.x_min), std::max(a.y_min, b.y_min),
           std::min(a.x_max, b.x_max), std::min(a.y_max, b.y_max)};
    if (r.x_min > r.x_max) r.x_max = r.x_min;
    if (r.y_min > r.y_max) r.y_max = r.y_min;
    return r;
}

double iou(const BBox& a, const BBox& b) {
    const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

double cross(const Point& origin, const Point& a, const Point& b) {
    return (a.x - origin.x) * (b.y - origin.y) - (a.y - origin.y) * (b.x - origin.x);
}

namespace {

bool lex_less(const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

}  // namespace

Polygon convex_hull(std::span<const Point> points) {
    if (points.size() < 3) throw DegenerateInput("convex hull needs at least 3 points");

    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) throw DegenerateInput("convex hull needs at least 3 distinct points");

    // Monotone chain; cross <= 0 pops collinear points, keeping the hull strictly convex.
    std::vector<Point> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0.0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k - 1);  // last point repeats the first

    if (hull.size() < 3) throw DegenerateInput("all points are collinear");
    return Polygon{std::move(hull)};
}

bool point_in_convex_polygon(const Point& p, const Polygon& poly, double eps) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (cross(v[i], v[(i + 1) % n], p) < -eps) return false;
    }
    return true;
}

BBox pad_box_inward(const BBox& box, double fraction) {
    if (!(fraction >= 0.0 && fraction <= 0.45)) {
        throw InvalidFraction("padding fraction must be in [0, 0.45]");
    }
    const double dx = fraction * box.width();
    const double dy = fraction * box.height();
    return BBox{box.x_min + dx, box.y_min + dy, box.x_max - dx, box.y_max - dy};
}

std::vector<Point> mask_to_points(const BinaryMask& mask) {
    std::vector<Point> out;
    out.reserve(mask.count());
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(x, y)) out.push_back(Point{x + 0.5, y + 0.5});
        }
    }
    if (out.empty()) throw EmptyMask("mask has no foreground pixels");
    return out;
}

}  // namespace hazpipe
