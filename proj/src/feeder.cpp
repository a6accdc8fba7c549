// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/feeder.hpp"

#include "hazpipe/errors.hpp"

namespace hazpipe {

FeederState feeder_init(double camera_fps) {
    if (!(camera_fps >= 1.0)) throw InvalidFps("camera fps must be >= 1");
    int k = 0;
    while (static_cast<double>(std::uint32_t{1} << k) < camera_fps) ++k;
    FeederState s;
    s.k = k;
    s.q = std::uint32_t{1} << k;
    s.p = s.q;
    s.n = 0;
    return s;
}

FeedDecision on_frame(FeederState& state) {
    state.n += 1;
    FeedDecision d;
    if (state.n > state.p) {
        state.n = 0;
        d.process = true;
    }
    d.state_after = state;
    return d;
}

void on_detection_result(FeederState& state, bool hazmat_found) {
    if (hazmat_found) {
        if (state.p > 1) state.p /= 2;
    } else {
        if (state.p < state.q) state.p *= 2;
    }
}

FeedTrace simulate_feed(std::span<const std::uint8_t> hazmat_per_frame, double camera_fps) {
    if (hazmat_per_frame.empty()) throw EmptyTrace("presence trace is empty");

    FeederState state = feeder_init(camera_fps);
    FeedTrace trace;
    trace.rows.reserve(hazmat_per_frame.size());

    for (std::size_t i = 0; i < hazmat_per_frame.size(); ++i) {
        const FeedDecision d = on_frame(state);
        FeedRow row;
        row.frame_index = static_cast<std::int64_t>(i);
        row.processed = d.process;
        row.p = d.state_after.p;
        row.n = d.state_after.n;
        if (d.process) {
            row.hazmat_found = hazmat_per_frame[i] != 0;
            on_detection_result(state, row.hazmat_found);
            ++trace.processed_count;
        }
        trace.rows.push_back(row);
    }
    trace.processed_fraction =
        static_cast<double>(trace.processed_count) / static_cast<double>(trace.rows.size());
    return trace;
}

}  // namespace hazpipe
