// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/metrics.hpp"

#include "hazpipe/errors.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace hazpipe {

namespace {

std::vector<std::size_t> score_order(std::span<const ImageDetection> detections) {
    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (detections[a].detection.score != detections[b].detection.score) {
            return detections[a].detection.score > detections[b].detection.score;
        }
        return a < b;
    });
    return order;
}

}  // namespace

std::vector<MatchOutcome> match_detections(std::span<const ImageDetection> detections,
                                           std::span<const GroundTruthItem> ground_truths,
                                           double iou_threshold, MatchMode mode) {
    std::vector<char> gt_taken(ground_truths.size(), 0);
    std::vector<MatchOutcome> outcomes;
    outcomes.reserve(detections.size());

    for (std::size_t di : score_order(detections)) {
        const auto& det = detections[di];
        MatchOutcome outcome;
        outcome.det_index = di;
        double best_iou = 0.0;
        std::size_t best_gt = ground_truths.size();
        for (std::size_t gi = 0; gi < ground_truths.size(); ++gi) {
            if (gt_taken[gi]) continue;
            const auto& gt = ground_truths[gi];
            if (gt.image_id != det.image_id) continue;
            if (mode == MatchMode::ClassConstrained && gt.class_id != det.detection.class_id) {
                continue;
            }
            const double overlap = iou(det.detection.box, gt.box);
            if (overlap >= iou_threshold && overlap > best_iou) {
                best_iou = overlap;
                best_gt = gi;
            }
        }
        if (best_gt < ground_truths.size()) {
            gt_taken[best_gt] = 1;
            outcome.gt_index = best_gt;
            outcome.iou = best_iou;
        }
        outcomes.push_back(outcome);
    }
    return outcomes;
}

Rates precision_recall_f1(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
    Rates r;
    r.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    r.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    r.f1 = (r.precision + r.recall) > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

double average_precision(std::span<const ImageDetection> class_detections,
                         std::span<const GroundTruthItem> class_ground_truths,
                         double iou_threshold) {
    const std::size_t gt_count = class_ground_truths.size();
    if (gt_count == 0 || class_detections.empty()) return 0.0;

    const auto outcomes = match_detections(class_detections, class_ground_truths, iou_threshold,
                                           MatchMode::ClassConstrained);

    // precision/recall after each detection in rank order
    std::vector<double> precision(outcomes.size());
    std::vector<double> recall(outcomes.size());
    std::int64_t cum_tp = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].gt_index) ++cum_tp;
        precision[i] = static_cast<double>(cum_tp) / static_cast<double>(i + 1);
        recall[i] = static_cast<double>(cum_tp) / static_cast<double>(gt_count);
    }

    // precision envelope, then the area under the recall staircase
    for (std::size_t i = precision.size() - 1; i > 0; --i) {
        precision[i - 1] = std::max(precision[i - 1], precision[i]);
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < precision.size(); ++i) {
        ap += (recall[i] - prev_recall) * precision[i];
        prev_recall = recall[i];
    }
    return ap;
}

EvalReport evaluate(std::span<const ImageDetection> detections,
                    std::span<const GroundTruthItem> ground_truths, const EvalConfig& config) {
    if (config.image_ids) {
        std::unordered_set<std::string> universe(config.image_ids->begin(),
                                                 config.image_ids->end());
        for (const auto& d : detections) {
            if (!universe.count(d.image_id)) {
                throw InconsistentIds("detection references unknown image id: " + d.image_id);
            }
        }
        for (const auto& g : ground_truths) {
            if (!universe.count(g.image_id)) {
                throw InconsistentIds("ground truth references unknown image id: " + g.image_id);
            }
        }
    }

    const int classes = config.class_count;
    EvalReport report;
    report.background_index = classes;
    report.confusion = ConfusionMatrix::Zero(classes + 1, classes + 1);

    // class-agnostic matching feeds the confusion matrix
    {
        const auto outcomes = match_detections(detections, ground_truths, config.iou_threshold,
                                               MatchMode::ClassAgnostic);
        std::vector<char> gt_matched(ground_truths.size(), 0);
        for (const auto& o : outcomes) {
            const int predicted = detections[o.det_index].detection.class_id;
            if (o.gt_index) {
                gt_matched[*o.gt_index] = 1;
                report.confusion(ground_truths[*o.gt_index].class_id, predicted) += 1;
            } else {
                report.confusion(classes, predicted) += 1;
            }
        }
        for (std::size_t gi = 0; gi < ground_truths.size(); ++gi) {
            if (!gt_matched[gi]) report.confusion(ground_truths[gi].class_id, classes) += 1;
        }
    }
    const auto total_events = report.confusion.sum();

    double ap_sum = 0.0;
    int ap_classes = 0;
    for (int c = 0; c < classes; ++c) {
        std::vector<ImageDetection> class_dets;
        std::vector<GroundTruthItem> class_gts;
        for (const auto& d : detections) {
            if (d.detection.class_id == c) class_dets.push_back(d);
        }
        for (const auto& g : ground_truths) {
            if (g.class_id == c) class_gts.push_back(g);
        }

        ClassMetrics m;
        m.gt_count = static_cast<std::int64_t>(class_gts.size());
        m.ap = average_precision(class_dets, class_gts, config.iou_threshold);

        const auto outcomes = match_detections(class_dets, class_gts, config.iou_threshold,
                                               MatchMode::ClassConstrained);
        double iou_sum = 0.0;
        for (const auto& o : outcomes) {
            if (o.gt_index) {
                m.tp += 1;
                iou_sum += o.iou;
            } else {
                m.fp += 1;
            }
        }
        m.fn = static_cast<std::int64_t>(class_gts.size()) - m.tp;
        const Rates rates = precision_recall_f1(m.tp, m.fp, m.fn);
        m.precision = rates.precision;
        m.recall = rates.recall;
        m.f1 = rates.f1;
        m.mean_iou = m.tp > 0 ? iou_sum / static_cast<double>(m.tp) : 0.0;

        // one-vs-rest decision accuracy over the confusion matrix events
        if (total_events > 0) {
            const std::int64_t diag = report.confusion(c, c);
            const std::int64_t row = report.confusion.row(c).sum();
            const std::int64_t col = report.confusion.col(c).sum();
            const std::int64_t tn = total_events - row - col + diag;
            m.accuracy = static_cast<double>(diag + tn) / static_cast<double>(total_events);
        }

        if (m.gt_count > 0) {
            ap_sum += m.ap;
            ap_classes += 1;
        }
        report.per_class[c] = m;
    }
    report.map_at_50 = ap_classes > 0 ? ap_sum / static_cast<double>(ap_classes) : 0.0;
    return report;
}

}  // namespace hazpipe
