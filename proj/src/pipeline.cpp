// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/pipeline.hpp"

#include "hazpipe/errors.hpp"
#include "hazpipe/eventlog.hpp"
#include "hazpipe/io.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hazpipe {

namespace {

bool looks_like_image(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

std::string artifact_stem(std::int64_t frame, std::size_t det_index) {
    std::ostringstream s;
    s << 'f' << std::setw(6) << std::setfill('0') << frame << "_d" << det_index;
    return s.str();
}

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

std::vector<std::filesystem::path> list_frames(const std::filesystem::path& source) {
    std::vector<std::filesystem::path> frames;
    if (std::filesystem::is_directory(source)) {
        for (const auto& entry : std::filesystem::directory_iterator(source)) {
            if (entry.is_regular_file() && looks_like_image(entry.path())) {
                frames.push_back(entry.path());
            }
        }
        std::sort(frames.begin(), frames.end());
    } else {
        std::ifstream list(source);
        if (!list) throw IoFailure("cannot open frame source: " + source.string());
        std::string line;
        while (std::getline(list, line)) {
            if (line.empty()) continue;
            frames.emplace_back(line);
        }
    }
    return frames;
}

RunSummary run_pipeline(const PipelineConfig& config,
                        const std::vector<std::filesystem::path>& frames, Detector& detector,
                        const ClassRegistry& registry) {
    const auto run_start = std::chrono::steady_clock::now();

    std::error_code ec;
    std::filesystem::create_directories(config.out_dir / "masks", ec);
    std::filesystem::create_directories(config.out_dir / "polys", ec);
    if (ec) throw IoFailure("cannot create output directories: " + ec.message());

    FeederState feeder = feeder_init(config.camera_fps);
    EventSink events(config.out_dir / "events", config.camera_fps, registry,
                     config.out_dir.filename().string());

    FeedTrace trace;
    trace.rows.reserve(frames.size());
    std::vector<DetectionRecord> records;
    RunSummary summary;
    summary.total_frames = frames.size();

    for (std::size_t i = 0; i < frames.size(); ++i) {
        const FeedDecision decision = on_frame(feeder);
        FeedRow row;
        row.frame_index = static_cast<std::int64_t>(i);
        row.processed = decision.process;
        row.p = decision.state_after.p;
        row.n = decision.state_after.n;

        if (decision.process) {
            ++summary.processed_frames;
            Frame frame;
            frame.index = static_cast<std::int64_t>(i);
            frame.source_path = frames[i].string();

            const auto detect_start = std::chrono::steady_clock::now();
            DetectorOutput output = detector.detect(frame);
            summary.detect_ms += ms_since(detect_start);

            std::vector<Detection> candidates;
            for (const auto& d : output.detections) {
                if (d.score >= config.score_threshold) candidates.push_back(d);
            }
            row.hazmat_found = !candidates.empty();
            on_detection_result(feeder, row.hazmat_found);

            const std::vector<Detection> kept = anms(candidates, config.nms);
            if (!kept.empty()) {
                // pixels are needed from here on (segmentation + crops)
                const auto seg_start = std::chrono::steady_clock::now();
                Frame full = load_image(frames[i]);
                full.index = frame.index;
                for (std::size_t di = 0; di < kept.size(); ++di) {
                    const Detection& det = kept[di];
                    const SegmentationResult seg = segment_sign(full, det, config.segment);
                    const std::string stem = artifact_stem(frame.index, di);
                    save_mask_png(config.out_dir / "masks" / (stem + ".png"), seg.mask);
                    {
                        std::ofstream poly(config.out_dir / "polys" / (stem + ".json"));
                        if (!poly) throw IoFailure("cannot write polygon for " + stem);
                        poly << polygon_to_json(seg.polygon) << '\n';
                    }
                    if (det.score >= config.eventlog_min_score) {
                        events.log_event(full, det, &seg.polygon);
                    }
                    records.push_back(DetectionRecord{frame.index, det});
                }
                summary.segment_ms += ms_since(seg_start);
                summary.detection_count += kept.size();
            }
        }
        trace.rows.push_back(row);
        if (row.processed) ++trace.processed_count;
    }
    trace.processed_fraction =
        trace.rows.empty() ? 0.0
                           : static_cast<double>(trace.processed_count) /
                                 static_cast<double>(trace.rows.size());

    write_detections_jsonl(config.out_dir / "detections.jsonl", records, registry);
    write_feed_trace_csv(config.out_dir / "feed_trace.csv", trace);
    events.close();

    summary.event_count = events.event_count();
    summary.total_ms = ms_since(run_start);
    return summary;
}

}  // namespace hazpipe
