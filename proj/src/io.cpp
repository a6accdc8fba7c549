// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/io.hpp"

#include "hazpipe/errors.hpp"

#include <fstream>
#include <sstream>

namespace hazpipe {

using nlohmann::json;

nlohmann::json detection_to_json(const Detection& detection, const ClassRegistry& registry) {
    json j;
    j["class_id"] = detection.class_id;
    j["class_name"] = registry.name(detection.class_id);
    j["score"] = detection.score;
    j["bbox"] = {detection.box.x_min, detection.box.y_min, detection.box.x_max,
                 detection.box.y_max};
    return j;
}

Detection detection_from_json(const json& j, const ClassRegistry& registry) {
    Detection d;
    if (j.contains("class_id")) {
        d.class_id = j.at("class_id").get<int>();
        if (d.class_id < 0 || d.class_id >= registry.size()) {
            throw Error("class_id out of range: " + std::to_string(d.class_id));
        }
        if (j.contains("class_name")) {
            const auto name = j.at("class_name").get<std::string>();
            if (registry.resolve(name) != d.class_id) {
                throw Error("class_name '" + name + "' does not match class_id " +
                            std::to_string(d.class_id));
            }
        }
    } else if (j.contains("class_name")) {
        d.class_id = registry.resolve(j.at("class_name").get<std::string>());
    } else {
        throw Error("detection record needs class_id or class_name");
    }
    d.score = j.at("score").get<double>();
    if (!(d.score >= 0.0 && d.score <= 1.0)) throw Error("score must be in [0, 1]");
    const auto& bbox = j.at("bbox");
    if (!bbox.is_array() || bbox.size() != 4) throw Error("bbox must be [x_min,y_min,x_max,y_max]");
    d.box = BBox{bbox[0].get<double>(), bbox[1].get<double>(), bbox[2].get<double>(),
                 bbox[3].get<double>()};
    if (!d.box.valid()) throw Error("bbox has negative extent");
    return d;
}

nlohmann::json detection_record_to_json(const DetectionRecord& record,
                                        const ClassRegistry& registry) {
    json j = detection_to_json(record.detection, registry);
    j["frame"] = record.frame;
    return j;
}

std::vector<DetectionRecord> parse_detections_jsonl(std::istream& in,
                                                    const ClassRegistry& registry) {
    std::vector<DetectionRecord> records;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            DetectionRecord rec;
            rec.frame = j.at("frame").get<std::int64_t>();
            rec.detection = detection_from_json(j, registry);
            records.push_back(std::move(rec));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad detection record: ") + e.what(), line_no);
        }
    }
    return records;
}

std::vector<DetectionRecord> read_detections_jsonl(const std::filesystem::path& path,
                                                   const ClassRegistry& registry) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open: " + path.string());
    return parse_detections_jsonl(in, registry);
}

void write_detections_jsonl(std::ostream& out, std::span<const DetectionRecord> records,
                            const ClassRegistry& registry) {
    for (const auto& rec : records) {
        out << detection_record_to_json(rec, registry).dump() << '\n';
    }
}

void write_detections_jsonl(const std::filesystem::path& path,
                            std::span<const DetectionRecord> records,
                            const ClassRegistry& registry) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open for writing: " + path.string());
    write_detections_jsonl(out, records, registry);
    if (!out) throw IoFailure("write failed: " + path.string());
}

std::string polygon_to_json(const Polygon& polygon) {
    json vertices = json::array();
    for (const auto& p : polygon.vertices) vertices.push_back({p.x, p.y});
    json j;
    j["vertices"] = std::move(vertices);
    return j.dump();
}

Polygon polygon_from_json(std::string_view text) {
    Polygon poly;
    try {
        const json j = json::parse(text);
        for (const auto& v : j.at("vertices")) {
            poly.vertices.push_back(Point{v.at(0).get<double>(), v.at(1).get<double>()});
        }
    } catch (const std::exception& e) {
        throw Error(std::string("bad polygon JSON: ") + e.what());
    }
    return poly;
}

void write_feed_trace_csv(std::ostream& out, const FeedTrace& trace) {
    out << "frame_index,processed,p,n,hazmat_found\n";
    for (const auto& row : trace.rows) {
        out << row.frame_index << ',' << (row.processed ? 1 : 0) << ',' << row.p << ',' << row.n
            << ',' << (row.processed && row.hazmat_found ? 1 : 0) << '\n';
    }
}

void write_feed_trace_csv(const std::filesystem::path& path, const FeedTrace& trace) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open for writing: " + path.string());
    write_feed_trace_csv(out, trace);
    if (!out) throw IoFailure("write failed: " + path.string());
}

std::vector<std::uint8_t> read_presence_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open: " + path.string());
    std::vector<std::uint8_t> trace;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(first, last - first + 1);
        if (token == "0") {
            trace.push_back(0);
        } else if (token == "1") {
            trace.push_back(1);
        } else {
            throw ParseError("presence trace lines must be 0 or 1, got '" + token + "'", line_no);
        }
    }
    return trace;
}

nlohmann::json eval_report_to_json(const EvalReport& report, const ClassRegistry& registry) {
    json per_class = json::array();
    for (const auto& [class_id, m] : report.per_class) {
        json entry;
        entry["class_id"] = class_id;
        entry["class_name"] = registry.name(class_id);
        entry["ap"] = m.ap;
        entry["precision"] = m.precision;
        entry["recall"] = m.recall;
        entry["accuracy"] = m.accuracy;
        entry["f1"] = m.f1;
        entry["mean_iou"] = m.mean_iou;
        entry["tp"] = m.tp;
        entry["fp"] = m.fp;
        entry["fn"] = m.fn;
        entry["gt_count"] = m.gt_count;
        per_class.push_back(std::move(entry));
    }

    json confusion = json::array();
    for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < report.confusion.cols(); ++c) {
            row.push_back(report.confusion(r, c));
        }
        confusion.push_back(std::move(row));
    }
    json labels = json::array();
    for (int c = 0; c < report.background_index; ++c) labels.push_back(registry.name(c));
    labels.push_back("background");

    json j;
    j["map_at_50"] = report.map_at_50;
    j["per_class"] = std::move(per_class);
    j["confusion"] = std::move(confusion);
    j["confusion_labels"] = std::move(labels);
    j["accuracy_definition"] = "one-vs-rest over matched decisions";
    return j;
}

std::string eval_report_to_csv(const EvalReport& report, const ClassRegistry& registry) {
    std::ostringstream out;
    out << "class,ap,precision,recall,accuracy,f1,mean_iou\n";
    double sums[6] = {0, 0, 0, 0, 0, 0};
    std::size_t rows = 0;
    for (const auto& [class_id, m] : report.per_class) {
        out << registry.name(class_id) << ',' << m.ap << ',' << m.precision << ',' << m.recall
            << ',' << m.accuracy << ',' << m.f1 << ',' << m.mean_iou << '\n';
        sums[0] += m.ap;
        sums[1] += m.precision;
        sums[2] += m.recall;
        sums[3] += m.accuracy;
        sums[4] += m.f1;
        sums[5] += m.mean_iou;
        ++rows;
    }
    if (rows > 0) {
        out << "average";
        for (double s : sums) out << ',' << s / static_cast<double>(rows);
        out << '\n';
    }
    return out.str();
}

}  // namespace hazpipe
