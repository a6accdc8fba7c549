// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/eventlog.hpp"

#include "hazpipe/errors.hpp"
#include "hazpipe/io.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace hazpipe {

namespace {

std::string event_stem(std::int64_t frame, int seq) {
    std::ostringstream s;
    s << 'f' << std::setw(6) << std::setfill('0') << frame << "_s" << seq;
    return s.str();
}

}  // namespace

EventSink::EventSink(std::filesystem::path run_dir, double fps, const ClassRegistry& registry,
                     std::string run_label)
    : run_dir_(std::move(run_dir)),
      run_name_(run_label.empty() ? run_dir_.filename().string() : std::move(run_label)),
      fps_(fps),
      registry_(registry) {
    std::error_code ec;
    std::filesystem::create_directories(run_dir_ / "crops", ec);
    std::filesystem::create_directories(run_dir_ / "annotations", ec);
    std::filesystem::create_directories(run_dir_ / "polys", ec);
    if (ec) throw IoFailure("cannot create event sink directories: " + ec.message());
    manifest_.open(run_dir_ / "manifest.jsonl");
    if (!manifest_) throw IoFailure("cannot open manifest: " + (run_dir_ / "manifest.jsonl").string());
}

EventSink::~EventSink() {
    if (!closed_) close();
}

void EventSink::close() {
    if (closed_) return;
    manifest_.flush();
    manifest_.close();
    closed_ = true;
}

DetectionEvent EventSink::log_event(const Frame& frame, const Detection& detection,
                                    const Polygon* polygon) {
    if (closed_) throw SinkClosed("event sink already closed");
    if (!frame.has_pixels()) throw IoFailure("cannot crop a frame without pixels");

    if (frame.index != last_frame_) {
        last_frame_ = frame.index;
        seq_in_frame_ = 0;
    }
    const int seq = seq_in_frame_++;
    const std::string stem = event_stem(frame.index, seq);

    const BBox image_bounds{0.0, 0.0, static_cast<double>(frame.width),
                            static_cast<double>(frame.height)};
    const BBox crop_bounds = intersect(detection.box, image_bounds);
    const PixelRect rect = rasterize_box(crop_bounds, frame.width, frame.height);
    if (rect.empty()) throw IoFailure("detection box does not cover any pixel");

    const Frame crop = crop_frame(frame, rect);
    const std::string crop_rel = "crops/" + stem + ".png";
    save_png_rgb(run_dir_ / crop_rel, crop.width, crop.height, crop.pixels);

    VocAnnotation ann;
    ann.filename = stem + ".png";
    ann.width = crop.width;
    ann.height = crop.height;
    ann.objects.push_back(VocObject{registry_.name(detection.class_id),
                                    BBox{0.0, 0.0, static_cast<double>(crop.width),
                                         static_cast<double>(crop.height)},
                                    false});
    const std::string xml_rel = "annotations/" + stem + ".xml";
    {
        std::ofstream xml(run_dir_ / xml_rel);
        if (!xml) throw IoFailure("cannot write annotation: " + xml_rel);
        xml << voc_write(ann);
    }

    std::string poly_rel;
    if (polygon) {
        poly_rel = "polys/" + stem + ".json";
        std::ofstream poly(run_dir_ / poly_rel);
        if (!poly) throw IoFailure("cannot write polygon: " + poly_rel);
        poly << polygon_to_json(*polygon) << '\n';
    }

    DetectionEvent event;
    event.timestamp_ms = std::llround(static_cast<double>(frame.index) * 1000.0 / fps_);
    event.frame_index = frame.index;
    event.detection = detection;
    event.crop_bounds = crop_bounds;
    if (polygon) event.polygon = *polygon;
    event.event_id =
        run_name_ + "/" + std::to_string(frame.index) + "/" + std::to_string(seq);

    nlohmann::json line;
    line["event_id"] = event.event_id;
    line["frame"] = event.frame_index;
    line["class_name"] = registry_.name(detection.class_id);
    line["score"] = detection.score;
    line["crop_path"] = crop_rel;
    line["xml_path"] = xml_rel;
    if (polygon) line["poly_path"] = poly_rel;
    manifest_ << line.dump() << '\n';
    if (!manifest_) throw IoFailure("manifest write failed");

    ++event_count_;
    return event;
}

}  // namespace hazpipe
