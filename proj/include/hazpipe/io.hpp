// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hazpipe/anms.hpp"
#include "hazpipe/dataset.hpp"
#include "hazpipe/feeder.hpp"
#include "hazpipe/geometry.hpp"
#include "hazpipe/metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hazpipe {

/// One detections-JSONL row: a detection attributed to a frame.
struct DetectionRecord {
    std::int64_t frame = 0;
    Detection detection;

    bool operator==(const DetectionRecord&) const = default;
};

nlohmann::json detection_to_json(const Detection& detection, const ClassRegistry& registry);
Detection detection_from_json(const nlohmann::json& j, const ClassRegistry& registry);

nlohmann::json detection_record_to_json(const DetectionRecord& record,
                                        const ClassRegistry& registry);

std::vector<DetectionRecord> parse_detections_jsonl(
    std::istream& in, const ClassRegistry& registry = ClassRegistry::standard());
std::vector<DetectionRecord> read_detections_jsonl(
    const std::filesystem::path& path, const ClassRegistry& registry = ClassRegistry::standard());

void write_detections_jsonl(std::ostream& out, std::span<const DetectionRecord> records,
                            const ClassRegistry& registry = ClassRegistry::standard());
void write_detections_jsonl(const std::filesystem::path& path,
                            std::span<const DetectionRecord> records,
                            const ClassRegistry& registry = ClassRegistry::standard());

/// {"vertices": [[x, y], ...]}
std::string polygon_to_json(const Polygon& polygon);
Polygon polygon_from_json(std::string_view text);

/// frame_index,processed,p,n,hazmat_found
void write_feed_trace_csv(std::ostream& out, const FeedTrace& trace);
void write_feed_trace_csv(const std::filesystem::path& path, const FeedTrace& trace);

/// One 0/1 line per frame.
std::vector<std::uint8_t> read_presence_trace(const std::filesystem::path& path);

nlohmann::json eval_report_to_json(const EvalReport& report, const ClassRegistry& registry);
std::string eval_report_to_csv(const EvalReport& report, const ClassRegistry& registry);

}  // namespace hazpipe
