// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hazpipe/anms.hpp"
#include "hazpipe/detector.hpp"
#include "hazpipe/feeder.hpp"
#include "hazpipe/segmentation.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hazpipe {

struct PipelineConfig {
    double camera_fps = 30.0;
    NmsConfig nms;
    double score_threshold = 0.25;
    SegmentParams segment;
    double eventlog_min_score = 0.0;
    std::filesystem::path out_dir;
};

struct RunSummary {
    std::size_t total_frames = 0;
    std::size_t processed_frames = 0;
    std::size_t detection_count = 0;  // post-NMS
    std::size_t event_count = 0;
    double detect_ms = 0.0;
    double segment_ms = 0.0;
    double total_ms = 0.0;
};

/// Frame sources: a directory of images (sorted by filename = frame order) or
/// a list file with one image path per line.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& source);

/// Full dataflow per processed frame: feeder gate -> detector -> score
/// threshold -> ANMS -> per-detection segmentation + event capture. Writes
/// detections.jsonl, feed_trace.csv, masks/, polys/, events/ under out_dir.
/// Frames are decoded lazily, only when the feeder selects them.
RunSummary run_pipeline(const PipelineConfig& config,
                        const std::vector<std::filesystem::path>& frames, Detector& detector,
                        const ClassRegistry& registry = ClassRegistry::standard());

}  // namespace hazpipe
