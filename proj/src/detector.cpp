// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/detector.hpp"

#include "hazpipe/errors.hpp"
#include "hazpipe/io.hpp"

#include <csignal>
#include <chrono>
#include <mutex>

#include <sys/wait.h>
#include <unistd.h>

namespace hazpipe {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

ScriptedDetector ScriptedDetector::load(const std::filesystem::path& path,
                                        const ClassRegistry& registry) {
    ScriptedDetector detector;
    for (const auto& rec : read_detections_jsonl(path, registry)) {
        detector.table_[rec.frame].push_back(rec.detection);
    }
    return detector;
}

DetectorOutput ScriptedDetector::detect(const Frame& frame) {
    const auto start = std::chrono::steady_clock::now();
    DetectorOutput out;
    out.frame_index = frame.index;
    if (const auto it = table_.find(frame.index); it != table_.end()) {
        out.detections = it->second;
    }
    out.latency_ms = elapsed_ms(start);
    return out;
}

ExecDetector::ExecDetector(const std::string& command, const ClassRegistry& registry)
    : registry_(registry) {
    // a dying child must surface as DetectorUnavailable, not SIGPIPE
    static std::once_flag sigpipe_once;
    std::call_once(sigpipe_once, [] { std::signal(SIGPIPE, SIG_IGN); });

    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) {
        throw DetectorUnavailable("cannot create pipes for detector process");
    }
    const pid_t pid = fork();
    if (pid < 0) throw DetectorUnavailable("cannot fork detector process");
    if (pid == 0) {
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    pid_ = pid;
    to_child_ = fdopen(to_child[1], "w");
    from_child_ = fdopen(from_child[0], "r");
    if (!to_child_ || !from_child_) throw DetectorUnavailable("cannot open detector streams");
}

ExecDetector::~ExecDetector() {
    if (to_child_) fclose(to_child_);
    if (from_child_) fclose(from_child_);
    if (pid_ > 0) {
        int status = 0;
        waitpid(pid_, &status, 0);
    }
}

DetectorOutput ExecDetector::detect(const Frame& frame) {
    const auto start = std::chrono::steady_clock::now();

    nlohmann::json request;
    request["frame_index"] = frame.index;
    request["image_path"] = frame.source_path;
    const std::string line = request.dump();
    if (std::fputs(line.c_str(), to_child_) == EOF || std::fputc('\n', to_child_) == EOF ||
        std::fflush(to_child_) != 0) {
        throw DetectorUnavailable("detector process is not accepting requests");
    }

    std::string response;
    for (;;) {
        const int ch = std::fgetc(from_child_);
        if (ch == EOF) throw DetectorUnavailable("detector process closed its output");
        if (ch == '\n') break;
        response.push_back(static_cast<char>(ch));
    }

    DetectorOutput out;
    out.frame_index = frame.index;
    try {
        const nlohmann::json j = nlohmann::json::parse(response);
        if (j.at("frame_index").get<std::int64_t>() != frame.index) {
            throw MalformedResponse("response frame_index does not match request");
        }
        for (const auto& dj : j.at("detections")) {
            out.detections.push_back(detection_from_json(dj, registry_));
        }
    } catch (const MalformedResponse&) {
        throw;
    } catch (const std::exception& e) {
        throw MalformedResponse(std::string("bad detector response: ") + e.what());
    }
    out.latency_ms = elapsed_ms(start);
    return out;
}

std::unique_ptr<Detector> make_detector(const std::string& selector,
                                        const ClassRegistry& registry) {
    if (selector.rfind("scripted:", 0) == 0) {
        return std::make_unique<ScriptedDetector>(
            ScriptedDetector::load(selector.substr(9), registry));
    }
    if (selector.rfind("exec:", 0) == 0) {
        return std::make_unique<ExecDetector>(selector.substr(5), registry);
    }
    throw Error("detector selector must be scripted:<path> or exec:<command>");
}

}  // namespace hazpipe
