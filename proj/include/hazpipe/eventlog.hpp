// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hazpipe/anms.hpp"
#include "hazpipe/dataset.hpp"
#include "hazpipe/geometry.hpp"
#include "hazpipe/image.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

namespace hazpipe {

struct DetectionEvent {
    std::int64_t timestamp_ms = 0;  // frame clock, not wall clock
    std::int64_t frame_index = 0;
    Detection detection;
    BBox crop_bounds;  // detection box clamped to the image
    std::optional<Polygon> polygon;
    std::string event_id;  // <run>/<frame>/<seq>
};

/// Captures post-NMS detections as crop PNG + VOC annotation + manifest line
/// under a run directory:
///   crops/fNNNNNN_sK.png  annotations/fNNNNNN_sK.xml  polys/fNNNNNN_sK.json
///   manifest.jsonl with {event_id, frame, class_name, score, crop_path,
///   xml_path, poly_path?}
/// Timestamps derive from frame_index / fps so replays are byte-identical.
class EventSink {
public:
    /// run_label defaults to the directory name; it prefixes every event_id.
    EventSink(std::filesystem::path run_dir, double fps,
              const ClassRegistry& registry = ClassRegistry::standard(),
              std::string run_label = "");
    ~EventSink();

    EventSink(const EventSink&) = delete;
    EventSink& operator=(const EventSink&) = delete;

    /// Throws SinkClosed after close(), IoFailure on write problems.
    DetectionEvent log_event(const Frame& frame, const Detection& detection,
                             const Polygon* polygon = nullptr);

    void close();
    std::size_t event_count() const { return event_count_; }
    const std::filesystem::path& run_dir() const { return run_dir_; }

private:
    std::filesystem::path run_dir_;
    std::string run_name_;
    double fps_;
    const ClassRegistry& registry_;
    std::ofstream manifest_;
    bool closed_ = false;
    std::size_t event_count_ = 0;
    std::int64_t last_frame_ = -1;
    int seq_in_frame_ = 0;
};

}  // namespace hazpipe
