// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
//
// hazpipe: hazmat detection post-processing pipeline CLI.
//   run            end-to-end pipeline over an image sequence
//   nms            file-to-file class-aware non-maximal suppression
//   simulate-feed  feeder schedule simulation over a 0/1 presence trace
//   segment        single-detection segmentation to mask PNG + polygon JSON
//   evaluate       detection evaluation against a VOC ground-truth directory
//   voc-split      deterministic stratified train/test split of a VOC dir
//   serve-detector reference external-detector server (stdio JSON protocol)

#include "hazpipe/detector.hpp"
#include "hazpipe/errors.hpp"
#include "hazpipe/io.hpp"
#include "hazpipe/metrics.hpp"
#include "hazpipe/pipeline.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

namespace {

using namespace hazpipe;

struct GrabCutOptions {
    int components = 5;
    int iterations = 5;
    double gamma = 50.0;
    int morph_radius = 1;
    std::uint64_t seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--gc-components", components, "GMM components per color model")
            ->capture_default_str();
        cmd->add_option("--gc-iterations", iterations, "GrabCut refinement rounds")
            ->capture_default_str();
        cmd->add_option("--gc-gamma", gamma, "smoothness strength")->capture_default_str();
        cmd->add_option("--morph-radius", morph_radius, "morphological opening radius")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "random seed for GMM initialization")
            ->capture_default_str();
    }

    SegmentParams to_params() const {
        SegmentParams p;
        p.grabcut.component_count = components;
        p.grabcut.iterations = iterations;
        p.grabcut.gamma = gamma;
        p.grabcut.seed = seed;
        p.morph_radius = morph_radius;
        return p;
    }
};

int cmd_run(const std::string& frames_path, const std::string& detector_selector, double fps,
            double nms_t, bool class_aware, double score_threshold, double min_event_score,
            const GrabCutOptions& gc, const std::string& out_dir) {
    PipelineConfig config;
    config.camera_fps = fps;
    config.nms.threshold = nms_t;
    config.nms.class_aware = class_aware;
    config.score_threshold = score_threshold;
    config.eventlog_min_score = min_event_score;
    config.segment = gc.to_params();
    config.out_dir = out_dir;

    const auto frames = list_frames(frames_path);
    if (frames.empty()) throw Error("frame source is empty: " + frames_path);
    auto detector = make_detector(detector_selector);

    const RunSummary summary = run_pipeline(config, frames, *detector);

    std::cout << "frames: " << summary.processed_frames << "/" << summary.total_frames
              << " processed\n"
              << "detections (post-NMS): " << summary.detection_count << "\n"
              << "events logged: " << summary.event_count << "\n"
              << "timing: detect " << summary.detect_ms << " ms, segment " << summary.segment_ms
              << " ms, total " << summary.total_ms << " ms\n"
              << "outputs in " << out_dir << "\n";
    return 0;
}

int cmd_nms(const std::string& in_path, const std::string& out_path, double threshold,
            bool class_aware) {
    const auto records = read_detections_jsonl(in_path);
    std::map<std::int64_t, std::vector<Detection>> by_frame;
    for (const auto& rec : records) by_frame[rec.frame].push_back(rec.detection);

    NmsConfig config{threshold, class_aware};
    std::vector<DetectionRecord> out;
    for (const auto& [frame, dets] : by_frame) {
        for (const auto& kept : anms(dets, config)) {
            out.push_back(DetectionRecord{frame, kept});
        }
    }
    write_detections_jsonl(std::filesystem::path(out_path), out);
    std::cout << records.size() << " -> " << out.size() << " detections\n";
    return 0;
}

int cmd_simulate_feed(const std::string& trace_path, double fps, const std::string& out_path) {
    const auto presence = read_presence_trace(trace_path);
    const FeedTrace trace = simulate_feed(presence, fps);
    if (!out_path.empty()) {
        write_feed_trace_csv(std::filesystem::path(out_path), trace);
    } else {
        write_feed_trace_csv(std::cout, trace);
    }
    std::cerr << "processed " << trace.processed_count << "/" << trace.rows.size()
              << " frames (fraction " << trace.processed_fraction << ")\n";
    return 0;
}

int cmd_segment(const std::string& image_path, const std::string& detections_path,
                std::size_t index, const GrabCutOptions& gc, const std::string& mask_path,
                const std::string& poly_path) {
    const Frame image = load_image(image_path);
    const auto records = read_detections_jsonl(detections_path);
    if (index >= records.size()) {
        throw Error("detection index " + std::to_string(index) + " out of range (file has " +
                    std::to_string(records.size()) + " records)");
    }
    const SegmentationResult result =
        segment_sign(image, records[index].detection, gc.to_params());

    save_mask_png(mask_path, result.mask);
    std::ofstream poly(poly_path);
    if (!poly) throw IoFailure("cannot write polygon: " + poly_path);
    poly << polygon_to_json(result.polygon) << '\n';

    const char* status = result.status == SegmentationStatus::Ok ? "ok"
                         : result.status == SegmentationStatus::UniformRegionFallback
                             ? "uniform-region fallback"
                             : "empty-mask fallback";
    std::cout << "status: " << status << ", foreground pixels: " << result.mask.count()
              << ", hull vertices: " << result.polygon.vertices.size() << "\n";
    return 0;
}

std::vector<std::string> voc_image_stems(const std::filesystem::path& voc_dir) {
    const auto annotations = voc_dir / "Annotations";
    if (!std::filesystem::is_directory(annotations)) {
        throw IoFailure("not a VOC directory (missing Annotations/): " + voc_dir.string());
    }
    std::vector<std::string> stems;
    for (const auto& entry : std::filesystem::directory_iterator(annotations)) {
        if (entry.is_regular_file() && entry.path().extension() == ".xml") {
            stems.push_back(entry.path().stem().string());
        }
    }
    std::sort(stems.begin(), stems.end());
    return stems;
}

VocAnnotation load_voc_annotation(const std::filesystem::path& xml_path) {
    std::ifstream in(xml_path);
    if (!in) throw IoFailure("cannot open: " + xml_path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return voc_parse(text);
}

int cmd_evaluate(const std::string& detections_path, const std::string& voc_dir, double iou_thr,
                 const std::string& report_path, const std::string& csv_path) {
    const auto& registry = ClassRegistry::standard();
    const auto stems = voc_image_stems(voc_dir);

    std::vector<GroundTruthItem> gts;
    for (const auto& stem : stems) {
        const VocAnnotation ann =
            load_voc_annotation(std::filesystem::path(voc_dir) / "Annotations" / (stem + ".xml"));
        for (const auto& obj : ann.objects) {
            gts.push_back(GroundTruthItem{stem, registry.resolve(obj.class_name), obj.box});
        }
    }

    // frame index i refers to the i-th image in sorted annotation order
    std::vector<ImageDetection> dets;
    for (const auto& rec : read_detections_jsonl(detections_path, registry)) {
        if (rec.frame < 0 || rec.frame >= static_cast<std::int64_t>(stems.size())) {
            throw InconsistentIds("detection frame " + std::to_string(rec.frame) +
                                  " has no matching annotation (dataset has " +
                                  std::to_string(stems.size()) + " images)");
        }
        dets.push_back(ImageDetection{stems[static_cast<std::size_t>(rec.frame)], rec.detection});
    }

    EvalConfig config;
    config.iou_threshold = iou_thr;
    config.class_count = registry.size();
    config.image_ids = stems;
    const EvalReport report = evaluate(dets, gts, config);

    {
        std::ofstream out(report_path);
        if (!out) throw IoFailure("cannot write report: " + report_path);
        out << eval_report_to_json(report, registry).dump(2) << '\n';
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw IoFailure("cannot write csv: " + csv_path);
        out << eval_report_to_csv(report, registry);
    }
    std::cout << "mAP@" << iou_thr * 100 << ": " << report.map_at_50 << " over "
              << gts.size() << " ground truths, " << dets.size() << " detections\n";
    return 0;
}

int cmd_voc_split(const std::string& voc_dir, double train_fraction, std::uint64_t seed,
                  const std::string& out_dir) {
    const auto& registry = ClassRegistry::standard();
    std::vector<SplitItem> items;
    for (const auto& stem : voc_image_stems(voc_dir)) {
        const VocAnnotation ann =
            load_voc_annotation(std::filesystem::path(voc_dir) / "Annotations" / (stem + ".xml"));
        // stratify by the first object's class; empty images get their own stratum
        const int class_id =
            ann.objects.empty() ? -1 : registry.resolve(ann.objects.front().class_name);
        items.push_back(SplitItem{stem, class_id});
    }

    const SplitResult split = split_dataset(items, train_fraction, seed);

    const std::filesystem::path sets =
        std::filesystem::path(out_dir.empty() ? voc_dir : out_dir) / "ImageSets" / "Main";
    std::error_code ec;
    std::filesystem::create_directories(sets, ec);
    if (ec) throw IoFailure("cannot create " + sets.string());

    auto write_list = [&](const char* name, const std::vector<std::string>& ids) {
        std::vector<std::string> sorted = ids;
        std::sort(sorted.begin(), sorted.end());
        std::ofstream out(sets / name);
        if (!out) throw IoFailure(std::string("cannot write ") + name);
        for (const auto& id : sorted) out << id << '\n';
    };
    write_list("train.txt", split.train);
    write_list("test.txt", split.test);

    std::cout << "train: " << split.train.size() << ", test: " << split.test.size() << "\n";
    if (split.test_empty) std::cerr << "warning: test split is empty\n";
    return 0;
}

int cmd_serve_detector(const std::string& detections_path) {
    ScriptedDetector detector = ScriptedDetector::load(detections_path);
    const auto& registry = ClassRegistry::standard();
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        nlohmann::json response;
        try {
            const nlohmann::json request = nlohmann::json::parse(line);
            Frame frame;
            frame.index = request.at("frame_index").get<std::int64_t>();
            if (request.contains("image_path")) {
                frame.source_path = request.at("image_path").get<std::string>();
            }
            const DetectorOutput out = detector.detect(frame);
            response["frame_index"] = out.frame_index;
            nlohmann::json dets = nlohmann::json::array();
            for (const auto& d : out.detections) dets.push_back(detection_to_json(d, registry));
            response["detections"] = std::move(dets);
        } catch (const std::exception& e) {
            std::cerr << "serve-detector: bad request: " << e.what() << "\n";
            return 1;
        }
        std::cout << response.dump() << std::endl;  // flush per response line
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hazmat detection post-processing pipeline"};
    app.require_subcommand(1);

    std::string stage = "cli";
    try {
        // run
        auto* run = app.add_subcommand("run", "run the full pipeline over an image sequence");
        std::string frames, detector_sel, run_out;
        double fps = 30.0, nms_t = 0.5, score_thr = 0.25, min_event_score = 0.0;
        bool class_aware = true;
        GrabCutOptions run_gc;
        run->add_option("--frames", frames, "image directory or list file")->required();
        run->add_option("--fps", fps, "camera frame rate")->capture_default_str();
        run->add_option("--detector", detector_sel, "scripted:<path> or exec:<command>")
            ->required();
        run->add_option("--nms-t", nms_t, "suppression IoU threshold")->capture_default_str();
        run->add_flag("--class-aware,!--no-class-aware", class_aware,
                      "suppress only within the same class")
            ->capture_default_str();
        run->add_option("--score-threshold", score_thr, "detector confidence floor")
            ->capture_default_str();
        run->add_option("--min-event-score", min_event_score,
                        "minimum score for event capture")
            ->capture_default_str();
        run_gc.attach(run);
        run->add_option("--out", run_out, "output directory")->required();

        // nms
        auto* nms = app.add_subcommand("nms", "suppress a detections JSONL file");
        std::string nms_in, nms_out;
        double nms_threshold = 0.5;
        bool nms_class_aware = true;
        nms->add_option("--in", nms_in, "input detections JSONL")->required();
        nms->add_option("--out", nms_out, "output detections JSONL")->required();
        nms->add_option("--t", nms_threshold, "suppression IoU threshold")->capture_default_str();
        nms->add_flag("--class-aware,!--no-class-aware", nms_class_aware,
                      "suppress only within the same class")
            ->capture_default_str();

        // simulate-feed
        auto* sim = app.add_subcommand("simulate-feed", "replay a 0/1 presence trace");
        std::string sim_trace, sim_out;
        double sim_fps = 30.0;
        sim->add_option("--trace", sim_trace, "file with one 0/1 line per frame")->required();
        sim->add_option("--fps", sim_fps, "camera frame rate")->capture_default_str();
        sim->add_option("--out", sim_out, "CSV output path (default stdout)");

        // segment
        auto* seg = app.add_subcommand("segment", "segment one detection of an image");
        std::string seg_image, seg_dets, seg_mask, seg_poly;
        std::size_t seg_index = 0;
        GrabCutOptions seg_gc;
        seg->add_option("--image", seg_image, "input image")->required();
        seg->add_option("--detections", seg_dets, "detections JSONL")->required();
        seg->add_option("--index", seg_index, "record index within the file")
            ->capture_default_str();
        seg_gc.attach(seg);
        seg->add_option("--out-mask", seg_mask, "mask PNG path")->required();
        seg->add_option("--out-poly", seg_poly, "polygon JSON path")->required();

        // evaluate
        auto* eval = app.add_subcommand("evaluate", "evaluate detections against VOC ground truth");
        std::string eval_dets, eval_voc, eval_report = "report.json", eval_csv;
        double eval_iou = 0.5;
        eval->add_option("--detections", eval_dets, "detections JSONL")->required();
        eval->add_option("--ground-truth", eval_voc, "VOC directory")->required();
        eval->add_option("--iou", eval_iou, "matching IoU threshold")->capture_default_str();
        eval->add_option("--out", eval_report, "report JSON path")->capture_default_str();
        eval->add_option("--csv", eval_csv, "optional per-class CSV path");

        // voc-split
        auto* split = app.add_subcommand("voc-split", "stratified train/test split");
        std::string split_voc, split_out;
        double split_fraction = 0.8;
        std::uint64_t split_seed = 1;
        split->add_option("--voc-dir", split_voc, "VOC directory")->required();
        split->add_option("--train-fraction", split_fraction, "train share")
            ->capture_default_str();
        split->add_option("--seed", split_seed, "shuffle seed")->capture_default_str();
        split->add_option("--out", split_out, "output root (default: the VOC dir)");

        // serve-detector
        auto* serve = app.add_subcommand(
            "serve-detector", "serve a scripted detection table over the stdio protocol");
        std::string serve_dets;
        serve->add_option("--detections", serve_dets, "detections JSONL")->required();

        CLI11_PARSE(app, argc, argv);

        if (run->parsed()) {
            stage = "run";
            return cmd_run(frames, detector_sel, fps, nms_t, class_aware, score_thr,
                           min_event_score, run_gc, run_out);
        }
        if (nms->parsed()) {
            stage = "nms";
            return cmd_nms(nms_in, nms_out, nms_threshold, nms_class_aware);
        }
        if (sim->parsed()) {
            stage = "simulate-feed";
            return cmd_simulate_feed(sim_trace, sim_fps, sim_out);
        }
        if (seg->parsed()) {
            stage = "segment";
            return cmd_segment(seg_image, seg_dets, seg_index, seg_gc, seg_mask, seg_poly);
        }
        if (eval->parsed()) {
            stage = "evaluate";
            return cmd_evaluate(eval_dets, eval_voc, eval_iou, eval_report, eval_csv);
        }
        if (split->parsed()) {
            stage = "voc-split";
            return cmd_voc_split(split_voc, split_fraction, split_seed, split_out);
        }
        if (serve->parsed()) {
            stage = "serve-detector";
            return cmd_serve_detector(serve_dets);
        }
        return 0;
    } catch (const hazpipe::Error& e) {
        std::cerr << "[" << stage << "] error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "[" << stage << "] error: " << e.what() << "\n";
        return 2;
    }
}
