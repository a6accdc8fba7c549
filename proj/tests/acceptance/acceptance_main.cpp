// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Each criterion prints one [PASS]/[FAIL] line; the binary
// exits nonzero if any criterion fails. Criterion 10 drives the CLI binary
// named by HAZPIPE_BIN. HAZPIPE_SOFT_PERF=1 downgrades the criterion-11
// timing bound to a warning for loaded CI machines.

#include "hazpipe/anms.hpp"
#include "hazpipe/dataset.hpp"
#include "hazpipe/errors.hpp"
#include "hazpipe/feeder.hpp"
#include "hazpipe/geometry.hpp"
#include "hazpipe/io.hpp"
#include "hazpipe/metrics.hpp"
#include "hazpipe/mincut.hpp"
#include "hazpipe/segmentation.hpp"

#include "../unit/test_util.hpp"

#include <bit>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace hazpipe;

namespace {

struct CheckFailure {
    std::string message;
};

#define ACCEPT(cond)                                                              \
    do {                                                                          \
        if (!(cond)) throw CheckFailure{std::string("check failed: ") + #cond};   \
    } while (0)

#define ACCEPT_MSG(cond, msg)                                                     \
    do {                                                                          \
        if (!(cond)) {                                                            \
            std::ostringstream oss_;                                              \
            oss_ << "check failed: " << #cond << " (" << msg << ")";              \
            throw CheckFailure{oss_.str()};                                       \
        }                                                                         \
    } while (0)

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- 1 & 2: ANMS ----------------------------------------------------------

std::string criterion_anms_oracle() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260801);
    for (int instance = 0; instance < 1000; ++instance) {
        const auto dets = testutil::random_detections(rng, 20);
        for (const double t : {0.3, 0.5, 0.7}) {
            for (const bool aware : {true, false}) {
                const NmsConfig config{t, aware};
                const auto a = anms_indices(dets, config);
                const auto o = nms_oracle_indices(dets, config);
                const auto f = nms_fast_indices(dets, config);
                ACCEPT_MSG(a == o, "anms vs oracle, instance " << instance << " t=" << t
                                                               << " aware=" << aware);
                ACCEPT_MSG(f == o, "fast vs oracle, instance " << instance << " t=" << t
                                                               << " aware=" << aware);
            }
        }
    }
    const double elapsed = seconds_since(start);
    ACCEPT_MSG(elapsed < 10.0, "runtime " << elapsed << " s");
    std::ostringstream note;
    note << "1000 instances x 3 thresholds x 2 modes in " << elapsed << " s";
    return note.str();
}

std::string criterion_class_preservation() {
    std::mt19937_64 rng(20260802);
    for (int instance = 0; instance < 1000; ++instance) {
        const auto dets = testutil::random_detections(rng, 20);
        for (const double t : {0.3, 0.5, 0.7}) {
            const auto aware = anms_indices(dets, NmsConfig{t, true});
            for (std::size_t i = 0; i < aware.size(); ++i) {
                for (std::size_t j = i + 1; j < aware.size(); ++j) {
                    const auto& a = dets[aware[i]];
                    const auto& b = dets[aware[j]];
                    if (a.class_id == b.class_id) {
                        ACCEPT_MSG(iou(a.box, b.box) < t,
                                   "surviving same-class pair at t=" << t);
                    }
                }
            }
            const auto blind = anms_indices(dets, NmsConfig{t, false});
            ACCEPT_MSG(blind.size() <= aware.size(), "blind NMS produced more boxes at t=" << t);
        }
    }
    return "no same-class survivor pair reaches t; class-blind never larger";
}

// --- 3 & 4: feeder ---------------------------------------------------------

std::string criterion_feeder_schedule() {
    const FeederState init = feeder_init(30);
    ACCEPT(init.k == 5);
    ACCEPT(init.q == 32);
    ACCEPT(init.p == 32);

    const FeedTrace idle = simulate_feed(std::vector<std::uint8_t>(2700, 0), 30);
    ACCEPT_MSG(idle.processed_count == 81, "got " << idle.processed_count);

    const FeedTrace busy = simulate_feed(std::vector<std::uint8_t>(330, 1), 30);
    std::vector<std::uint32_t> ps;
    for (const auto& row : busy.rows) {
        if (row.processed) ps.push_back(row.p);
    }
    const std::uint32_t ladder[6] = {32, 16, 8, 4, 2, 1};
    ACCEPT(ps.size() >= 6);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const std::uint32_t expected = i < 6 ? ladder[i] : 1;
        ACCEPT_MSG(ps[i] == expected, "p at processed frame " << i << " = " << ps[i]);
    }
    return "init(30) = (5,32,32); 81/2700 idle; p ladder 32,16,8,4,2,1 then 1";
}

std::string criterion_cpu_proxy() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::uint8_t> trace(2700, 0);
    for (std::size_t i = 1080; i < 1620; ++i) trace[i] = 1;  // contiguous 20% segment
    const FeedTrace result = simulate_feed(trace, 30);
    ACCEPT_MSG(result.processed_fraction <= 0.5,
               "processed fraction " << result.processed_fraction);
    const double elapsed = seconds_since(start);
    ACCEPT_MSG(elapsed < 1.0, "runtime " << elapsed << " s");
    std::ostringstream note;
    note << "processed fraction " << result.processed_fraction << " (expected ~0.13, bound 0.5)";
    return note.str();
}

// --- 5: min cut ------------------------------------------------------------

struct RawGraph {
    int nodes = 0;
    std::vector<double> cap_source, cap_sink;
    struct Edge {
        int a, b;
        double cap_ab, cap_ba;
    };
    std::vector<Edge> edges;
};

double exhaustive_min_cut(const RawGraph& g) {
    // Gray-code walk over source-side subsets with incremental cost updates.
    std::vector<std::vector<std::pair<int, double>>> out(g.nodes), in(g.nodes);
    for (const auto& e : g.edges) {
        out[e.a].emplace_back(e.b, e.cap_ab);
        in[e.b].emplace_back(e.a, e.cap_ab);
        out[e.b].emplace_back(e.a, e.cap_ba);
        in[e.a].emplace_back(e.b, e.cap_ba);
    }
    std::vector<char> side(g.nodes, 0);  // 1 = source side
    double cost = 0.0;
    for (int v = 0; v < g.nodes; ++v) cost += g.cap_source[v];
    double best = cost;

    const std::uint64_t total = std::uint64_t{1} << g.nodes;
    for (std::uint64_t code = 1; code < total; ++code) {
        const int v = std::countr_zero(code);  // bit flipped by the Gray walk
        if (!side[v]) {
            // v joins the source side
            cost += g.cap_source[v] * -1.0 + g.cap_sink[v];
            for (const auto& [u, cap] : out[v]) {
                if (!side[u]) cost += cap;
            }
            for (const auto& [u, cap] : in[v]) {
                if (side[u]) cost -= cap;
            }
            side[v] = 1;
        } else {
            cost += g.cap_source[v] - g.cap_sink[v];
            for (const auto& [u, cap] : out[v]) {
                if (!side[u]) cost -= cap;
            }
            for (const auto& [u, cap] : in[v]) {
                if (side[u]) cost += cap;
            }
            side[v] = 0;
        }
        best = std::min(best, cost);
    }
    return best;
}

std::string criterion_min_cut_oracle() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260805);
    for (int instance = 0; instance < 200; ++instance) {
        const int n = 2 + static_cast<int>(testutil::uindex(rng, 19));  // 2..20 nodes
        RawGraph raw;
        raw.nodes = n;
        raw.cap_source.assign(n, 0.0);
        raw.cap_sink.assign(n, 0.0);
        for (int v = 0; v < n; ++v) {
            if (rng() % 4 != 0) raw.cap_source[v] = testutil::quantize(testutil::urand(rng, 0, 10));
            if (rng() % 4 != 0) raw.cap_sink[v] = testutil::quantize(testutil::urand(rng, 0, 10));
        }
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (rng() % 100 < 25) {
                    raw.edges.push_back({a, b, testutil::quantize(testutil::urand(rng, 0, 10)),
                                         testutil::quantize(testutil::urand(rng, 0, 10))});
                }
            }
        }

        StGraph graph(n);
        for (int v = 0; v < n; ++v) graph.add_terminal_capacity(v, raw.cap_source[v], raw.cap_sink[v]);
        for (const auto& e : raw.edges) graph.add_edge(e.a, e.b, e.cap_ab, e.cap_ba);

        const MinCutResult result = min_cut(std::move(graph));
        const double expected = exhaustive_min_cut(raw);
        ACCEPT_MSG(std::abs(result.cut_cost - expected) <= 1e-9,
                   "instance " << instance << ": cut " << result.cut_cost << " vs oracle "
                               << expected);
        ACCEPT_MSG(std::abs(result.cut_cost - result.max_flow) <= 1e-9,
                   "duality violated on instance " << instance);
    }
    const double elapsed = seconds_since(start);
    ACCEPT_MSG(elapsed < 60.0, "runtime " << elapsed << " s");
    std::ostringstream note;
    note << "200 graphs <= 20 nodes vs exhaustive enumeration in " << elapsed << " s";
    return note.str();
}

// --- 6: GrabCut on synthetic scenes ---------------------------------------

std::string criterion_grabcut_scenes() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260806);
    const std::array<std::array<std::uint8_t, 3>, 6> fg_palette{{{200, 30, 30},
                                                                 {30, 60, 200},
                                                                 {230, 160, 20},
                                                                 {20, 140, 60},
                                                                 {120, 30, 160},
                                                                 {220, 220, 40}}};
    const std::array<std::array<std::uint8_t, 3>, 4> bg_palette{
        {{245, 245, 245}, {40, 40, 40}, {180, 200, 210}, {90, 110, 90}}};

    double iou_sum = 0.0;
    for (int scene_index = 0; scene_index < 20; ++scene_index) {
        const double cx = testutil::urand(rng, 85, 115);
        const double cy = testutil::urand(rng, 85, 115);
        const double hw = testutil::urand(rng, 45, 70);
        const double hh = testutil::urand(rng, 45, 70);
        const auto fg = fg_palette[scene_index % fg_palette.size()];
        const auto bg = bg_palette[scene_index % bg_palette.size()];
        const auto scene = testutil::make_diamond_scene(200, 200, cx, cy, hw, hh, fg, bg);

        SegmentParams params;
        params.grabcut.seed = 1000 + static_cast<std::uint64_t>(scene_index);
        const SegmentationResult result =
            segment_sign(scene.frame, Detection{scene.box, 0.9, 0}, params);
        ACCEPT_MSG(result.status == SegmentationStatus::Ok, "scene " << scene_index);
        for (std::size_t i = 1; i < result.energy_trace.size(); ++i) {
            ACCEPT_MSG(result.energy_trace[i] <= result.energy_trace[i - 1] + 1e-9,
                       "energy increased on scene " << scene_index << " at iteration " << i);
        }
        const double v = testutil::mask_iou(result.mask, scene.truth);
        iou_sum += v;
    }
    const double mean_iou = iou_sum / 20.0;
    ACCEPT_MSG(mean_iou >= 0.90, "mean mask IoU " << mean_iou);
    const double elapsed = seconds_since(start);
    ACCEPT_MSG(elapsed < 60.0, "runtime " << elapsed << " s");
    std::ostringstream note;
    note << "20 scenes, mean mask IoU " << mean_iou << ", energy non-increasing, " << elapsed
         << " s";
    return note.str();
}

// --- 7: convex hull --------------------------------------------------------

std::string criterion_hull_oracle() {
    std::mt19937_64 rng(20260807);
    int degenerate = 0;
    for (int instance = 0; instance < 1000; ++instance) {
        const std::size_t n = 3 + testutil::uindex(rng, 198);
        std::vector<Point> pts;
        pts.reserve(n);
        const bool coarse = instance % 5 == 0;  // small grids force collinear runs
        for (std::size_t i = 0; i < n; ++i) {
            if (coarse) {
                pts.push_back(Point{static_cast<double>(testutil::uindex(rng, 11)),
                                    static_cast<double>(testutil::uindex(rng, 11))});
            } else {
                pts.push_back(Point{testutil::quantize(testutil::urand(rng, 0, 100)),
                                    testutil::quantize(testutil::urand(rng, 0, 100))});
            }
        }
        const auto oracle = testutil::gift_wrap_hull(pts);
        if (oracle.empty()) {
            bool threw = false;
            try {
                convex_hull(pts);
            } catch (const DegenerateInput&) {
                threw = true;
            }
            ACCEPT_MSG(threw, "instance " << instance << " should be degenerate");
            ++degenerate;
            continue;
        }
        const Polygon hull = convex_hull(pts);
        ACCEPT_MSG(hull.vertices.size() == oracle.size(),
                   "vertex count mismatch on instance " << instance);
        for (std::size_t i = 0; i < oracle.size(); ++i) {
            ACCEPT_MSG(hull.vertices[i] == oracle[i],
                       "vertex " << i << " differs on instance " << instance);
        }
        for (const auto& p : pts) {
            ACCEPT_MSG(point_in_convex_polygon(p, hull, 1e-7),
                       "input point escapes the hull on instance " << instance);
        }
    }
    std::ostringstream note;
    note << "1000 point sets match gift wrapping vertex-for-vertex (" << degenerate
         << " degenerate)";
    return note.str();
}

// --- 8: metrics -------------------------------------------------------------

double oracle_ap(std::vector<ImageDetection> dets, const std::vector<GroundTruthItem>& gts,
                 double thr) {
    if (gts.empty() || dets.empty()) return 0.0;
    std::stable_sort(dets.begin(), dets.end(),
                     [](const ImageDetection& a, const ImageDetection& b) {
                         return a.detection.score > b.detection.score;
                     });
    std::vector<bool> taken(gts.size(), false);
    std::vector<int> is_tp(dets.size(), 0);
    for (std::size_t i = 0; i < dets.size(); ++i) {
        double best_iou = 0.0;
        std::size_t best = gts.size();
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (taken[g] || gts[g].image_id != dets[i].image_id) continue;
            const double v = iou(dets[i].detection.box, gts[g].box);
            if (v >= thr && v > best_iou) {
                best_iou = v;
                best = g;
            }
        }
        if (best < gts.size()) {
            taken[best] = true;
            is_tp[i] = 1;
        }
    }
    double ap = 0.0;
    int cum = 0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < dets.size(); ++i) {
        cum += is_tp[i];
        const double recall = static_cast<double>(cum) / static_cast<double>(gts.size());
        if (recall > prev_recall) {
            double best_precision = 0.0;
            int tp_j = cum;
            for (std::size_t j = i; j < dets.size(); ++j) {
                if (j > i) tp_j += is_tp[j];
                best_precision = std::max(
                    best_precision, static_cast<double>(tp_j) / static_cast<double>(j + 1));
            }
            ap += (recall - prev_recall) * best_precision;
            prev_recall = recall;
        }
    }
    return ap;
}

std::string criterion_metrics_oracle() {
    std::mt19937_64 rng(20260808);
    for (int instance = 0; instance < 500; ++instance) {
        std::vector<GroundTruthItem> gts;
        std::vector<ImageDetection> dets;
        const int images = 1 + static_cast<int>(testutil::uindex(rng, 4));
        for (std::size_t g = 0; g < testutil::uindex(rng, 9); ++g) {
            gts.push_back({"img" + std::to_string(testutil::uindex(rng, images)), 0,
                           testutil::random_box(rng)});
        }
        for (std::size_t d = 0; d < testutil::uindex(rng, 16); ++d) {
            BBox box;
            if (!gts.empty() && rng() % 2 == 0) {
                const auto& gt = gts[testutil::uindex(rng, gts.size())];
                const double dx = testutil::quantize(testutil::urand(rng, -3, 3));
                const double dy = testutil::quantize(testutil::urand(rng, -3, 3));
                box = BBox{gt.box.x_min + dx, gt.box.y_min + dy, gt.box.x_max + dx,
                           gt.box.y_max + dy};
            } else {
                box = testutil::random_box(rng);
            }
            dets.push_back({"img" + std::to_string(testutil::uindex(rng, images)),
                            Detection{box, testutil::urand(rng, 0, 1), 0}});
        }
        const double got = average_precision(dets, gts, 0.5);
        const double expected = oracle_ap(dets, gts, 0.5);
        ACCEPT_MSG(std::abs(got - expected) <= 1e-9,
                   "instance " << instance << ": AP " << got << " vs oracle " << expected);
    }

    // perfect instance: one exact detection per ground truth, all 13 classes
    {
        std::vector<GroundTruthItem> gts;
        std::vector<ImageDetection> dets;
        for (int c = 0; c < 13; ++c) {
            const BBox box{c * 15.0, 5.0, c * 15.0 + 12.0, 25.0};
            gts.push_back({"img" + std::to_string(c % 3), c, box});
            dets.push_back({"img" + std::to_string(c % 3), Detection{box, 1.0, c}});
        }
        const EvalReport report = evaluate(dets, gts, EvalConfig{});
        ACCEPT(report.map_at_50 == 1.0);
        for (const auto& [c, m] : report.per_class) {
            ACCEPT(m.ap == 1.0);
            ACCEPT(m.precision == 1.0);
            ACCEPT(m.recall == 1.0);
            ACCEPT(m.accuracy == 1.0);
            ACCEPT(m.f1 == 1.0);
            ACCEPT(m.mean_iou == 1.0);
        }
    }

    const Rates mixed = precision_recall_f1(94, 6, 2);
    ACCEPT_MSG(std::abs(mixed.f1 - 0.9592) <= 1e-4, "F1 = " << mixed.f1);
    return "500 AP instances within 1e-9 of the staircase oracle; perfect = 1.0; F1(94,6,2) ok";
}

// --- 9: VOC round-trip -------------------------------------------------------

std::string criterion_voc_round_trip() {
    std::mt19937_64 rng(20260809);
    const auto& reg = ClassRegistry::standard();
    for (int instance = 0; instance < 200; ++instance) {
        VocAnnotation ann;
        ann.filename = "sample & <" + std::to_string(rng() % 100000) + ">.png";
        ann.width = 64 + static_cast<int>(testutil::uindex(rng, 3000));
        ann.height = 64 + static_cast<int>(testutil::uindex(rng, 3000));
        ann.depth = rng() % 2 == 0 ? 3 : 1;
        for (std::size_t i = 0; i < testutil::uindex(rng, 7); ++i) {
            VocObject obj;
            obj.class_name = reg.name(static_cast<int>(testutil::uindex(rng, 13)));
            const double x0 = testutil::urand(rng, 0, ann.width - 2);
            const double y0 = testutil::urand(rng, 0, ann.height - 2);
            obj.box = BBox{x0, y0, x0 + testutil::urand(rng, 0.25, ann.width - x0),
                           y0 + testutil::urand(rng, 0.25, ann.height - y0)};
            obj.difficult = rng() % 5 == 0;
            ann.objects.push_back(obj);
        }
        const VocAnnotation round = voc_parse(voc_write(ann));
        ACCEPT_MSG(round == ann, "round-trip mismatch on instance " << instance);
    }
    return "200 randomized annotations parse(write(a)) == a field-exact";
}

// --- 10: end-to-end determinism ---------------------------------------------

std::string criterion_e2e_determinism() {
    const char* bin = std::getenv("HAZPIPE_BIN");
    ACCEPT_MSG(bin != nullptr, "HAZPIPE_BIN must point at the hazpipe binary");

    testutil::TempDir tmp("hazpipe_accept");
    const auto scene = testutil::make_diamond_scene(96, 96, 48, 48, 36, 36);
    const auto frames_dir = tmp.path() / "frames";
    std::filesystem::create_directories(frames_dir);
    char name[32];
    for (int i = 0; i < 40; ++i) {
        std::snprintf(name, sizeof(name), "frame_%04d.png", i);
        save_png_rgb(frames_dir / name, scene.frame.width, scene.frame.height,
                     scene.frame.pixels);
    }
    std::vector<DetectionRecord> records;
    for (int i = 0; i < 40; i += 2) {  // detections on even frames
        records.push_back({i, Detection{BBox{12, 12, 84, 84}, 0.9, 2}});
    }
    const auto script = tmp.path() / "script.jsonl";
    write_detections_jsonl(script, records);

    auto one_run = [&](const char* trial) {
        // same leaf directory name, so the config is identical between trials
        const auto out = tmp.path() / trial / "run";
        std::filesystem::create_directories(tmp.path() / trial);
        const std::string cmd = std::string(bin) + " run --frames " + frames_dir.string() +
                                " --fps 8 --detector scripted:" + script.string() +
                                " --nms-t 0.5 --class-aware --seed 7 --out " + out.string() +
                                " > " + (tmp.path() / (std::string(trial) + ".log")).string() +
                                " 2>&1";
        ACCEPT_MSG(std::system(cmd.c_str()) == 0,
                   "pipeline run failed, see " << trial << ".log");
        return out;
    };
    const auto a = one_run("trial_a");
    const auto b = one_run("trial_b");

    auto same_file = [&](const std::filesystem::path& pa, const std::filesystem::path& pb) {
        return testutil::read_text_file(pa) == testutil::read_text_file(pb);
    };
    ACCEPT(same_file(a / "detections.jsonl", b / "detections.jsonl"));
    ACCEPT(same_file(a / "feed_trace.csv", b / "feed_trace.csv"));
    ACCEPT(same_file(a / "events" / "manifest.jsonl", b / "events" / "manifest.jsonl"));
    std::size_t masks = 0;
    for (const auto& entry : std::filesystem::directory_iterator(a / "masks")) {
        ACCEPT_MSG(same_file(entry.path(), b / "masks" / entry.path().filename()),
                   "mask differs: " << entry.path().filename());
        ++masks;
    }
    ACCEPT_MSG(masks > 0, "the run produced no masks");
    std::ostringstream note;
    note << "two identical runs, byte-equal detections/trace/manifest and " << masks << " masks";
    return note.str();
}

// --- 11: fast-NMS performance ------------------------------------------------

std::string criterion_fast_nms_performance() {
    std::mt19937_64 rng(20260811);
    std::vector<Detection> dets;
    dets.reserve(5000);
    for (int i = 0; i < 5000; ++i) {
        // one frame's worth of raw proposals: similar-scale boxes crowding a
        // small canvas, the duplicate soup NMS exists to collapse
        Detection d;
        const double w = testutil::quantize(testutil::urand(rng, 50.0, 70.0));
        const double h = testutil::quantize(testutil::urand(rng, 50.0, 70.0));
        const double x = testutil::quantize(testutil::urand(rng, 0.0, 240.0 - w));
        const double y = testutil::quantize(testutil::urand(rng, 0.0, 240.0 - h));
        d.box = BBox{x, y, x + w, y + h};
        d.score = testutil::urand(rng, 0, 1);
        d.class_id = static_cast<int>(testutil::uindex(rng, 13));
        dets.push_back(d);
    }
    const NmsConfig config{0.5, false};  // the classic class-blind NMS benchmark

    const auto t0 = std::chrono::steady_clock::now();
    const auto fast = nms_fast_indices(dets, config);
    const double fast_s = seconds_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    const auto oracle = nms_oracle_indices(dets, config);
    const double oracle_s = seconds_since(t1);

    ACCEPT(fast == oracle);
    const double ratio = fast_s / oracle_s;
    std::ostringstream note;
    note << "nms_fast " << fast_s << " s vs nms_oracle " << oracle_s << " s (ratio " << ratio
         << ", bound 0.2)";
    if (ratio > 0.2) {
        if (std::getenv("HAZPIPE_SOFT_PERF")) {
            std::cerr << "WARNING: " << note.str() << " exceeded the bound; soft-failing\n";
        } else {
            ACCEPT_MSG(ratio <= 0.2, note.str());
        }
    }
    return note.str();
}

struct Criterion {
    const char* name;
    std::string (*run)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"1. ANMS oracle equivalence", criterion_anms_oracle},
        {"2. Class-preservation property", criterion_class_preservation},
        {"3. Feeder schedule", criterion_feeder_schedule},
        {"4. CPU-proxy reduction", criterion_cpu_proxy},
        {"5. Min-cut oracle", criterion_min_cut_oracle},
        {"6. GrabCut on synthetic scenes", criterion_grabcut_scenes},
        {"7. Convex hull oracle", criterion_hull_oracle},
        {"8. Metrics oracle", criterion_metrics_oracle},
        {"9. VOC round-trip", criterion_voc_round_trip},
        {"10. End-to-end determinism", criterion_e2e_determinism},
        {"11. Fast-NMS performance sanity", criterion_fast_nms_performance},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        try {
            const std::string note = criterion.run();
            std::cout << "[PASS] " << criterion.name << " — " << note << "\n";
        } catch (const CheckFailure& f) {
            std::cout << "[FAIL] " << criterion.name << " — " << f.message << "\n";
            ++failures;
        } catch (const std::exception& e) {
            std::cout << "[FAIL] " << criterion.name << " — unexpected error: " << e.what()
                      << "\n";
            ++failures;
        }
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all 11 acceptance criteria passed\n";
    return 0;
}
