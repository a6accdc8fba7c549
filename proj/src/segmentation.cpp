// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/segmentation.hpp"

#include "hazpipe/errors.hpp"
#include "hazpipe/mincut.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>
#include <random>
#include <unordered_set>

namespace hazpipe {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t bounded_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

}  // namespace

void Gmm::finalize() {
    cache_.assign(components.size(), ComponentCache{});
    for (std::size_t k = 0; k < components.size(); ++k) {
        const auto& c = components[k];
        if (c.weight <= 0.0) continue;
        Eigen::LLT<Eigen::Matrix3d> llt(c.covariance);
        if (llt.info() != Eigen::Success) continue;  // regularization floor should prevent this
        auto& cached = cache_[k];
        cached.inverse = llt.solve(Eigen::Matrix3d::Identity());
        const double log_det =
            2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
        cached.cost_constant = -std::log(c.weight) + 0.5 * (3.0 * kLog2Pi + log_det);
        cached.usable = true;
    }
}

double Gmm::component_cost(int k, const Eigen::Vector3d& z) const {
    const auto& cached = cache_[static_cast<std::size_t>(k)];
    const Eigen::Vector3d d = z - components[static_cast<std::size_t>(k)].mean;
    return cached.cost_constant + 0.5 * d.dot(cached.inverse * d);
}

double Gmm::min_cost(const Eigen::Vector3d& z) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < components.size(); ++k) {
        if (!cache_[k].usable) continue;
        best = std::min(best, component_cost(static_cast<int>(k), z));
    }
    return best;
}

int Gmm::best_component(const Eigen::Vector3d& z) const {
    double best = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (std::size_t k = 0; k < components.size(); ++k) {
        if (!cache_[k].usable) continue;
        const double c = component_cost(static_cast<int>(k), z);
        if (c < best) {
            best = c;
            best_k = static_cast<int>(k);
        }
    }
    return best_k;
}

namespace {

std::size_t distinct_color_count(std::span<const Eigen::Vector3d> pixels, std::size_t cap) {
    std::unordered_set<std::uint64_t> seen;
    for (const auto& z : pixels) {
        // quantize back to 8-bit lattice for the distinctness test
        const auto r = static_cast<std::uint64_t>(std::lround(z.x() * 255.0)) & 0xffff;
        const auto g = static_cast<std::uint64_t>(std::lround(z.y() * 255.0)) & 0xffff;
        const auto b = static_cast<std::uint64_t>(std::lround(z.z() * 255.0)) & 0xffff;
        seen.insert((r << 32) | (g << 16) | b);
        if (seen.size() >= cap) break;
    }
    return seen.size();
}

std::vector<int> kmeans(std::span<const Eigen::Vector3d> samples, int k, std::mt19937_64& rng,
                        int lloyd_iterations = 10) {
    const std::size_t n = samples.size();
    std::vector<Eigen::Vector3d> centers;
    centers.reserve(static_cast<std::size_t>(k));

    // k-means++ seeding
    centers.push_back(samples[bounded_index(rng, n)]);
    std::vector<double> d2(n);
    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, (samples[i] - c).squaredNorm());
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            centers.push_back(samples[bounded_index(rng, n)]);
            continue;
        }
        const double r = uniform01(rng) * total;
        double acc = 0.0;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= r) {
                pick = i;
                break;
            }
        }
        centers.push_back(samples[pick]);
    }

    std::vector<int> assignment(n, 0);
    for (int iter = 0; iter < lloyd_iterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_k = 0;
            for (int c = 0; c < k; ++c) {
                const double d = (samples[i] - centers[static_cast<std::size_t>(c)]).squaredNorm();
                if (d < best) {
                    best = d;
                    best_k = c;
                }
            }
            if (assignment[i] != best_k) {
                assignment[i] = best_k;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
        std::vector<Eigen::Vector3d> sums(static_cast<std::size_t>(k), Eigen::Vector3d::Zero());
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums[static_cast<std::size_t>(assignment[i])] += samples[i];
            counts[static_cast<std::size_t>(assignment[i])] += 1;
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centers[static_cast<std::size_t>(c)] =
                    sums[static_cast<std::size_t>(c)] /
                    static_cast<double>(counts[static_cast<std::size_t>(c)]);
            }
        }
    }
    return assignment;
}

Gmm estimate_gmm(std::span<const Eigen::Vector3d> samples, std::span<const int> assignment,
                 int k, double regularization) {
    Gmm gmm;
    gmm.components.resize(static_cast<std::size_t>(k));
    std::vector<Eigen::Vector3d> sums(static_cast<std::size_t>(k), Eigen::Vector3d::Zero());
    std::vector<Eigen::Matrix3d> scatters(static_cast<std::size_t>(k), Eigen::Matrix3d::Zero());
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto c = static_cast<std::size_t>(assignment[i]);
        sums[c] += samples[i];
        scatters[c] += samples[i] * samples[i].transpose();
        counts[c] += 1;
    }
    for (int c = 0; c < k; ++c) {
        auto& comp = gmm.components[static_cast<std::size_t>(c)];
        const std::size_t n_c = counts[static_cast<std::size_t>(c)];
        comp.weight = static_cast<double>(n_c) / static_cast<double>(samples.size());
        if (n_c == 0) continue;
        comp.mean = sums[static_cast<std::size_t>(c)] / static_cast<double>(n_c);
        comp.covariance = scatters[static_cast<std::size_t>(c)] / static_cast<double>(n_c) -
                          comp.mean * comp.mean.transpose() +
                          regularization * Eigen::Matrix3d::Identity();
    }
    gmm.finalize();
    return gmm;
}

}  // namespace

Gmm fit_gmm(std::span<const Eigen::Vector3d> pixels, int component_count, std::uint64_t seed,
            double regularization) {
    if (component_count < 1) throw InsufficientSamples("component count must be >= 1");
    if (distinct_color_count(pixels, static_cast<std::size_t>(component_count)) <
        static_cast<std::size_t>(component_count)) {
        throw InsufficientSamples("need at least K distinct pixel colors");
    }
    std::mt19937_64 rng(seed);
    const auto assignment = kmeans(pixels, component_count, rng);
    return estimate_gmm(pixels, assignment, component_count, regularization);
}

BinaryMask GrabCutState::foreground_mask() const {
    BinaryMask mask(width, height);
    for (std::size_t i = 0; i < trimap.size(); ++i) {
        mask.data[i] = trimap[i] == TrimapLabel::ProbableForeground ? 1 : 0;
    }
    return mask;
}

namespace {

struct SmoothnessField {
    // weight to the left / up-left / up / up-right neighbor, 0 at borders
    std::vector<double> left, upleft, up, upright;
};

SmoothnessField compute_smoothness(const std::vector<Eigen::Vector3d>& z, int w, int h,
                                   double gamma) {
    // beta = 1 / (2 <|dz|^2>) over all neighbor pairs
    double sum_sq = 0.0;
    std::int64_t pairs = 0;
    auto accumulate = [&](int x, int y, int nx, int ny) {
        const std::size_t a = static_cast<std::size_t>(y) * w + x;
        const std::size_t b = static_cast<std::size_t>(ny) * w + nx;
        sum_sq += (z[a] - z[b]).squaredNorm();
        pairs += 1;
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (x > 0) accumulate(x, y, x - 1, y);
            if (x > 0 && y > 0) accumulate(x, y, x - 1, y - 1);
            if (y > 0) accumulate(x, y, x, y - 1);
            if (x + 1 < w && y > 0) accumulate(x, y, x + 1, y - 1);
        }
    }
    const double mean_sq = pairs > 0 ? sum_sq / static_cast<double>(pairs) : 0.0;
    const double beta = mean_sq > 0.0 ? 1.0 / (2.0 * mean_sq) : 0.0;

    SmoothnessField f;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    f.left.assign(n, 0.0);
    f.upleft.assign(n, 0.0);
    f.up.assign(n, 0.0);
    f.upright.assign(n, 0.0);
    const double diag = gamma / std::numbers::sqrt2;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (x > 0) {
                f.left[i] = gamma * std::exp(-beta * (z[i] - z[i - 1]).squaredNorm());
            }
            if (x > 0 && y > 0) {
                f.upleft[i] = diag * std::exp(-beta * (z[i] - z[i - w - 1]).squaredNorm());
            }
            if (y > 0) {
                f.up[i] = gamma * std::exp(-beta * (z[i] - z[i - w]).squaredNorm());
            }
            if (x + 1 < w && y > 0) {
                f.upright[i] = diag * std::exp(-beta * (z[i] - z[i - w + 1]).squaredNorm());
            }
        }
    }
    return f;
}

bool is_foreground(TrimapLabel l) { return l == TrimapLabel::ProbableForeground; }

double pair_energy(const SmoothnessField& f, const std::vector<TrimapLabel>& trimap, int w,
                   int h) {
    double e = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const bool fg = is_foreground(trimap[i]);
            if (x > 0 && fg != is_foreground(trimap[i - 1])) e += f.left[i];
            if (x > 0 && y > 0 && fg != is_foreground(trimap[i - w - 1])) e += f.upleft[i];
            if (y > 0 && fg != is_foreground(trimap[i - w])) e += f.up[i];
            if (x + 1 < w && y > 0 && fg != is_foreground(trimap[i - w + 1])) e += f.upright[i];
        }
    }
    return e;
}

}  // namespace

GrabCutState grabcut(const Frame& image, const BBox& box, const GrabCutParams& params) {
    if (!image.has_pixels()) throw std::invalid_argument("image has no pixel data");
    if (params.component_count < 1 || params.component_count > 64) {
        throw std::invalid_argument("component count must be in [1, 64]");
    }
    const int w = image.width;
    const int h = image.height;
    const std::size_t n = static_cast<std::size_t>(w) * h;

    const PixelRect rect = rasterize_box(box, w, h);
    if (static_cast<std::int64_t>(rect.width()) * rect.height() < 64) {
        throw DegenerateBox("foreground box rasterizes below 64 pixels");
    }

    std::vector<Eigen::Vector3d> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = Eigen::Vector3d(image.pixels[3 * i], image.pixels[3 * i + 1],
                               image.pixels[3 * i + 2]) /
               255.0;
    }

    GrabCutState state;
    state.width = w;
    state.height = h;
    state.region = box;
    state.trimap.assign(n, TrimapLabel::DefiniteBackground);
    state.component_assignment.assign(n, 0);
    for (int y = rect.y0; y < rect.y1; ++y) {
        for (int x = rect.x0; x < rect.x1; ++x) {
            state.trimap[static_cast<std::size_t>(y) * w + x] = TrimapLabel::ProbableForeground;
        }
    }

    // No color separation at all: degrade to the rectangular fallback.
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& v : z) mean += v;
    mean /= static_cast<double>(n);
    double variance_trace = 0.0;
    for (const auto& v : z) variance_trace += (v - mean).squaredNorm();
    variance_trace /= static_cast<double>(n);
    if (variance_trace < 1e-8) {
        state.uniform_fallback = true;
        return state;
    }

    std::vector<std::size_t> fg_idx, bg_idx;
    fg_idx.reserve(static_cast<std::size_t>(rect.width()) * rect.height());
    bg_idx.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        (state.trimap[i] == TrimapLabel::ProbableForeground ? fg_idx : bg_idx).push_back(i);
    }
    if (bg_idx.size() < 16) {  // box swallows the image; nothing to model background from
        state.uniform_fallback = true;
        return state;
    }

    auto gather = [&](const std::vector<std::size_t>& idx) {
        std::vector<Eigen::Vector3d> out;
        out.reserve(idx.size());
        for (std::size_t i : idx) out.push_back(z[i]);
        return out;
    };

    std::mt19937_64 rng(params.seed);
    const auto fit_region = [&](const std::vector<Eigen::Vector3d>& samples) {
        const int k = static_cast<int>(std::min<std::size_t>(
            static_cast<std::size_t>(params.component_count),
            distinct_color_count(samples, static_cast<std::size_t>(params.component_count))));
        const auto assignment = kmeans(samples, std::max(k, 1), rng);
        return estimate_gmm(samples, assignment, std::max(k, 1),
                            params.covariance_regularization);
    };
    const auto fg_samples = gather(fg_idx);
    const auto bg_samples = gather(bg_idx);
    state.fg_gmm = fit_region(fg_samples);
    state.bg_gmm = fit_region(bg_samples);

    const SmoothnessField smooth = compute_smoothness(z, w, h, params.gamma);

    const int rw = rect.width();
    const int rh = rect.height();
    auto node_of = [&](int x, int y) { return (y - rect.y0) * rw + (x - rect.x0); };
    auto in_rect = [&](int x, int y) {
        return x >= rect.x0 && x < rect.x1 && y >= rect.y0 && y < rect.y1;
    };

    std::vector<double> fg_cost(n), bg_cost(n);

    for (int iter = 0; iter < params.iterations; ++iter) {
        // 1) per-pixel best component for the current label
        for (std::size_t i = 0; i < n; ++i) {
            const Gmm& model =
                is_foreground(state.trimap[i]) ? state.fg_gmm : state.bg_gmm;
            state.component_assignment[i] = static_cast<std::int8_t>(model.best_component(z[i]));
        }

        // 2) refit both models from current labels
        std::vector<Eigen::Vector3d> fg_s, bg_s;
        std::vector<int> fg_a, bg_a;
        fg_s.reserve(fg_idx.size());
        bg_s.reserve(bg_idx.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (is_foreground(state.trimap[i])) {
                fg_s.push_back(z[i]);
                fg_a.push_back(state.component_assignment[i]);
            } else {
                bg_s.push_back(z[i]);
                bg_a.push_back(state.component_assignment[i]);
            }
        }
        if (fg_s.empty() || bg_s.empty()) break;  // one side vanished; labels are final
        state.fg_gmm = estimate_gmm(fg_s, fg_a, state.fg_gmm.component_count(),
                                    params.covariance_regularization);
        state.bg_gmm = estimate_gmm(bg_s, bg_a, state.bg_gmm.component_count(),
                                    params.covariance_regularization);

        // 3) graph over the probable region; pinned background folds into t-links
        for (std::size_t i = 0; i < n; ++i) {
            fg_cost[i] = state.fg_gmm.min_cost(z[i]);
            bg_cost[i] = state.bg_gmm.min_cost(z[i]);
        }

        StGraph graph(rw * rh);
        for (int y = rect.y0; y < rect.y1; ++y) {
            for (int x = rect.x0; x < rect.x1; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                const int node = node_of(x, y);

                double to_sink = 0.0;  // charged when the pixel ends foreground
                auto link = [&](int nx, int ny, double weight) {
                    if (weight <= 0.0) return;
                    if (in_rect(nx, ny)) {
                        if (ny * w + nx < static_cast<int>(i)) {  // add each pair once
                            graph.add_edge(node, node_of(nx, ny), weight, weight);
                        }
                    } else if (nx >= 0 && nx < w && ny >= 0 && ny < h) {
                        to_sink += weight;  // neighbor is pinned background
                    }
                };
                link(x - 1, y, smooth.left[i]);
                link(x - 1, y - 1, smooth.upleft[i]);
                link(x, y - 1, smooth.up[i]);
                link(x + 1, y - 1, smooth.upright[i]);
                // pairs where this pixel is the up/left partner of a neighbor outside the rect
                if (!in_rect(x + 1, y) && x + 1 < w) to_sink += smooth.left[i + 1];
                if (!in_rect(x + 1, y + 1) && x + 1 < w && y + 1 < h)
                    to_sink += smooth.upleft[i + w + 1];
                if (!in_rect(x, y + 1) && y + 1 < h) to_sink += smooth.up[i + w];
                if (!in_rect(x - 1, y + 1) && x - 1 >= 0 && y + 1 < h)
                    to_sink += smooth.upright[i + w - 1];

                const double m = std::min(fg_cost[i], bg_cost[i]);
                graph.add_terminal_capacity(node, bg_cost[i] - m, fg_cost[i] - m + to_sink);
            }
        }

        const MinCutResult cut = min_cut(std::move(graph));

        // 4) relabel probable pixels from the cut
        for (int y = rect.y0; y < rect.y1; ++y) {
            for (int x = rect.x0; x < rect.x1; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                state.trimap[i] = cut.in_source_side(node_of(x, y))
                                      ? TrimapLabel::ProbableForeground
                                      : TrimapLabel::ProbableBackground;
            }
        }

        // 5) energy of the new labeling under the current models
        double data = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            data += is_foreground(state.trimap[i]) ? fg_cost[i] : bg_cost[i];
        }
        state.energy_trace.push_back(data + pair_energy(smooth, state.trimap, w, h));
        state.iteration += 1;
    }

    // leave the assignment consistent with the final labels
    for (std::size_t i = 0; i < n; ++i) {
        const Gmm& model = is_foreground(state.trimap[i]) ? state.fg_gmm : state.bg_gmm;
        state.component_assignment[i] = static_cast<std::int8_t>(model.best_component(z[i]));
    }
    return state;
}

namespace {

BinaryMask morph_pass(const BinaryMask& mask, int radius, bool erode) {
    // separable square window; outside the image counts as background
    BinaryMask horiz(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            std::uint8_t v = erode ? 1 : 0;
            for (int dx = -radius; dx <= radius; ++dx) {
                const int xx = x + dx;
                const std::uint8_t s =
                    (xx >= 0 && xx < mask.width) ? mask.at(xx, y) : std::uint8_t{0};
                if (erode) {
                    v = static_cast<std::uint8_t>(v & s);
                } else {
                    v = static_cast<std::uint8_t>(v | s);
                }
            }
            horiz.set(x, y, v);
        }
    }
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            std::uint8_t v = erode ? 1 : 0;
            for (int dy = -radius; dy <= radius; ++dy) {
                const int yy = y + dy;
                const std::uint8_t s =
                    (yy >= 0 && yy < mask.height) ? horiz.at(x, yy) : std::uint8_t{0};
                if (erode) {
                    v = static_cast<std::uint8_t>(v & s);
                } else {
                    v = static_cast<std::uint8_t>(v | s);
                }
            }
            out.set(x, y, v);
        }
    }
    return out;
}

}  // namespace

BinaryMask morph_erode(const BinaryMask& mask, int radius) {
    if (radius <= 0) return mask;
    return morph_pass(mask, radius, true);
}

BinaryMask morph_dilate(const BinaryMask& mask, int radius) {
    if (radius <= 0) return mask;
    return morph_pass(mask, radius, false);
}

BinaryMask morph_open(const BinaryMask& mask, int radius) {
    if (radius <= 0) return mask;
    return morph_dilate(morph_erode(mask, radius), radius);
}

namespace {

SegmentationResult rectangular_fallback(const BBox& padded, int w, int h,
                                        std::vector<double> energy_trace,
                                        SegmentationStatus status) {
    const PixelRect rect = rasterize_box(padded, w, h);
    SegmentationResult r;
    r.status = status;
    r.energy_trace = std::move(energy_trace);
    r.mask = BinaryMask(w, h);
    for (int y = rect.y0; y < rect.y1; ++y) {
        for (int x = rect.x0; x < rect.x1; ++x) r.mask.set(x, y, 1);
    }
    r.polygon.vertices = {Point{padded.x_min, padded.y_min}, Point{padded.x_max, padded.y_min},
                          Point{padded.x_max, padded.y_max}, Point{padded.x_min, padded.y_max}};
    return r;
}

}  // namespace

SegmentationResult segment_sign(const Frame& image, const Detection& detection,
                                const SegmentParams& params) {
    const BBox image_bounds{0.0, 0.0, static_cast<double>(image.width),
                            static_cast<double>(image.height)};
    const BBox clamped = intersect(detection.box, image_bounds);
    const BBox padded = pad_box_inward(clamped, params.box_padding);

    GrabCutState state = grabcut(image, padded, params.grabcut);
    if (state.uniform_fallback) {
        return rectangular_fallback(padded, image.width, image.height, {},
                                    SegmentationStatus::UniformRegionFallback);
    }

    BinaryMask mask = morph_open(state.foreground_mask(), params.morph_radius);
    try {
        const auto points = mask_to_points(mask);
        Polygon hull = convex_hull(points);
        SegmentationResult r;
        r.mask = std::move(mask);
        r.polygon = std::move(hull);
        r.energy_trace = state.energy_trace;
        r.status = SegmentationStatus::Ok;
        return r;
    } catch (const EmptyMask&) {
    } catch (const DegenerateInput&) {
    }
    return rectangular_fallback(padded, image.width, image.height, state.energy_trace,
                                SegmentationStatus::EmptyMaskFallback);
}

}  // namespace hazpipe
