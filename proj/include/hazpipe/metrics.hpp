// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hazpipe/anms.hpp"
#include "hazpipe/geometry.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hazpipe {

struct ImageDetection {
    std::string image_id;
    Detection detection;
};

struct GroundTruthItem {
    std::string image_id;
    int class_id = 0;
    BBox box;
};

enum class MatchMode : std::uint8_t {
    ClassConstrained,  // AP / per-class counts
    ClassAgnostic,     // confusion matrix
};

/// One outcome per detection: the claimed ground truth or background.
struct MatchOutcome {
    std::size_t det_index = 0;
    std::optional<std::size_t> gt_index;
    double iou = 0.0;
};

/// Greedy matching in descending score order (ties by input index): each
/// detection claims the highest-IoU unmatched same-image ground truth with
/// IoU >= threshold. One GT matches at most one detection.
std::vector<MatchOutcome> match_detections(std::span<const ImageDetection> detections,
                                           std::span<const GroundTruthItem> ground_truths,
                                           double iou_threshold, MatchMode mode);

struct Rates {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// 0/0 cases are defined as 0.
Rates precision_recall_f1(std::int64_t tp, std::int64_t fp, std::int64_t fn);

/// Area under the all-points interpolated precision-recall curve (precision
/// envelope). Inputs are a single class; 0 when there are no ground truths.
double average_precision(std::span<const ImageDetection> class_detections,
                         std::span<const GroundTruthItem> class_ground_truths,
                         double iou_threshold = 0.5);

struct ClassMetrics {
    double ap = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
    double mean_iou = 0.0;  // over true-positive pairs only
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t gt_count = 0;
};

struct EvalConfig {
    double iou_threshold = 0.5;
    int class_count = 13;
    /// When set, every referenced image id must be in this universe
    /// (otherwise InconsistentIds).
    std::optional<std::vector<std::string>> image_ids;
};

using ConfusionMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct EvalReport {
    std::map<int, ClassMetrics> per_class;
    double map_at_50 = 0.0;  // mean AP over classes with at least one ground truth

    /// (class_count+1) square; rows = actual, columns = predicted; the last
    /// row/column is background (false negatives / false positives).
    ConfusionMatrix confusion;
    int background_index = 0;

    /// The class-only (background row/column dropped) submatrix.
    ConfusionMatrix class_confusion() const {
        return confusion.topLeftCorner(background_index, background_index);
    }
};

/// Full evaluation: per-class AP/precision/recall/accuracy/F1/mean-IoU,
/// mAP, and the confusion matrix. Accuracy is one-vs-rest over matched
/// decisions (an interpretive convention, echoed in the report output).
EvalReport evaluate(std::span<const ImageDetection> detections,
                    std::span<const GroundTruthItem> ground_truths, const EvalConfig& config);

}  // namespace hazpipe
