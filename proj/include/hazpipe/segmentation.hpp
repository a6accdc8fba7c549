// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hazpipe/anms.hpp"
#include "hazpipe/geometry.hpp"
#include "hazpipe/image.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace hazpipe {

struct GmmComponent {
    double weight = 0.0;
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Identity();
};

/// Gaussian mixture over normalized [0,1] RGB. Components with zero weight
/// are kept as placeholders and never selected.
class Gmm {
public:
    std::vector<GmmComponent> components;

    int component_count() const { return static_cast<int>(components.size()); }

    /// Rebuilds the cached inverses/log-determinants. Must be called after
    /// components change; fitting routines do it themselves.
    void finalize();

    /// Complete-data cost of explaining z with component k:
    /// -log w_k + 0.5 log((2*pi)^3 det S_k) + 0.5 Mahalanobis^2.
    double component_cost(int k, const Eigen::Vector3d& z) const;

    /// min over usable components.
    double min_cost(const Eigen::Vector3d& z) const;
    int best_component(const Eigen::Vector3d& z) const;

private:
    struct ComponentCache {
        Eigen::Matrix3d inverse = Eigen::Matrix3d::Identity();
        double cost_constant = 0.0;  // -log w + 0.5 log((2*pi)^3 det S)
        bool usable = false;
    };
    std::vector<ComponentCache> cache_;
};

/// K-component GMM via k-means++ seeding, Lloyd refinement, and per-cluster
/// ML estimation with covariance floor regularization*I.
/// Throws InsufficientSamples when the set has fewer than K distinct colors.
Gmm fit_gmm(std::span<const Eigen::Vector3d> pixels, int component_count,
            std::uint64_t seed = 1, double regularization = 1e-3);

enum class TrimapLabel : std::uint8_t {
    DefiniteBackground = 0,
    ProbableBackground = 1,
    ProbableForeground = 2,
};

struct GrabCutParams {
    int component_count = 5;
    int iterations = 5;
    double gamma = 50.0;
    double covariance_regularization = 1e-3;
    std::uint64_t seed = 1;
};

struct GrabCutState {
    int width = 0;
    int height = 0;
    std::vector<TrimapLabel> trimap;
    Gmm fg_gmm;
    Gmm bg_gmm;
    std::vector<std::int8_t> component_assignment;
    int iteration = 0;
    std::vector<double> energy_trace;  // one value per iteration, non-increasing
    BBox region;                       // the foreground-candidate box
    bool uniform_fallback = false;

    BinaryMask foreground_mask() const;
};

/// Iterative foreground extraction inside `box` (pixels with centers in the
/// box start ProbableForeground, everything else is pinned background).
/// Each round reassigns GMM components, refits both models, and relabels by
/// minimum cut over data terms and gamma*exp(-beta*|dz|^2)/dist smoothness on
/// the 8-neighborhood. Throws DegenerateBox when the box rasterizes below 64
/// pixels; a color-uniform region degrades to a flagged rectangular result.
GrabCutState grabcut(const Frame& image, const BBox& box, const GrabCutParams& params);

BinaryMask morph_erode(const BinaryMask& mask, int radius);
BinaryMask morph_dilate(const BinaryMask& mask, int radius);

/// Erosion then dilation with a square structuring element of side 2r+1;
/// radius 0 is the identity.
BinaryMask morph_open(const BinaryMask& mask, int radius);

enum class SegmentationStatus : std::uint8_t {
    Ok = 0,
    UniformRegionFallback = 1,  // no color separation existed
    EmptyMaskFallback = 2,      // cut/cleanup left nothing to hull
};

struct SegmentationResult {
    BinaryMask mask;
    Polygon polygon;
    std::vector<double> energy_trace;
    SegmentationStatus status = SegmentationStatus::Ok;
};

struct SegmentParams {
    GrabCutParams grabcut;
    double box_padding = 0.05;
    int morph_radius = 1;
};

/// Full per-detection chain: inward box padding -> grabcut -> morphological
/// opening -> hull of foreground pixel centers. Fallback results cover the
/// padded box rectangle and carry a non-Ok status.
SegmentationResult segment_sign(const Frame& image, const Detection& detection,
                                const SegmentParams& params);

}  // namespace hazpipe
