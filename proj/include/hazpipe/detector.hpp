// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hazpipe/anms.hpp"
#include "hazpipe/dataset.hpp"
#include "hazpipe/image.hpp"

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace hazpipe {

struct DetectorOutput {
    std::int64_t frame_index = 0;
    std::vector<Detection> detections;  // raw, pre-NMS
    double latency_ms = 0.0;
};

/// Detector contract: deterministic given identical frames; raw outputs,
/// no confidence pre-filtering (thresholds belong to the pipeline).
class Detector {
public:
    virtual ~Detector() = default;
    virtual DetectorOutput detect(const Frame& frame) = 0;
};

/// Deterministic test double answering from a frame-indexed detection table
/// loaded from a detections JSONL file. Frames absent from the table yield
/// empty outputs.
class ScriptedDetector final : public Detector {
public:
    static ScriptedDetector load(const std::filesystem::path& path,
                                 const ClassRegistry& registry = ClassRegistry::standard());

    DetectorOutput detect(const Frame& frame) override;

    std::size_t frame_count() const { return table_.size(); }

private:
    std::unordered_map<std::int64_t, std::vector<Detection>> table_;
};

/// Bridge to an external detector process speaking line-delimited JSON on
/// stdin/stdout. Request: {"frame_index": int, "image_path": str};
/// response: {"frame_index": int, "detections": [...]} using the detections
/// JSONL record fields. Throws DetectorUnavailable when the process is gone
/// and MalformedResponse on protocol violations.
class ExecDetector final : public Detector {
public:
    explicit ExecDetector(const std::string& command,
                          const ClassRegistry& registry = ClassRegistry::standard());
    ~ExecDetector() override;

    ExecDetector(const ExecDetector&) = delete;
    ExecDetector& operator=(const ExecDetector&) = delete;

    DetectorOutput detect(const Frame& frame) override;

private:
    const ClassRegistry& registry_;
    int pid_ = -1;
    std::FILE* to_child_ = nullptr;
    std::FILE* from_child_ = nullptr;
};

/// Builds a detector from a CLI selector: "scripted:<path>" or "exec:<command>".
std::unique_ptr<Detector> make_detector(const std::string& selector,
                                        const ClassRegistry& registry = ClassRegistry::standard());

}  // namespace hazpipe
