// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hazpipe/geometry.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hazpipe {

/// Class-labeled, scored, axis-aligned detection box.
struct Detection {
    BBox box;
    double score = 0.0;  // confidence in [0, 1]
    int class_id = 0;

    bool operator==(const Detection&) const = default;
};

struct NmsConfig {
    double threshold = 0.5;   // suppression IoU threshold t in [0, 1]
    bool class_aware = true;  // boxes of different classes never suppress each other
};

// All three implementations share one contract: greedy suppression in
// descending score order (ties by class_id, then input index), removing every
// candidate with iou(M, b) >= t against the emitted box M — restricted to M's
// class when class_aware. They differ only in strategy and must produce
// identical index sequences.

/// Production implementation: one sorted pass with same-class suppression.
std::vector<std::size_t> anms_indices(std::span<const Detection> detections,
                                      const NmsConfig& config);
std::vector<Detection> anms(std::span<const Detection> detections, const NmsConfig& config);

/// Brute-force reference: literal repeated max-scan per class partition,
/// no sorting, IoU recomputed pairwise on demand.
std::vector<std::size_t> nms_oracle_indices(std::span<const Detection> detections,
                                            const NmsConfig& config);
std::vector<Detection> nms_oracle(std::span<const Detection> detections, const NmsConfig& config);

/// Vectorized variant: one up-front sort, batched IoU of each emitted box
/// against every remaining candidate at once.
std::vector<std::size_t> nms_fast_indices(std::span<const Detection> detections,
                                          const NmsConfig& config);
std::vector<Detection> nms_fast(std::span<const Detection> detections, const NmsConfig& config);

}  // namespace hazpipe
