// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hazpipe {

/// Frame-feeding state machine. Every p-th+1 frame is forwarded to the
/// detector; p halves after a hit and doubles after a miss, staying a power
/// of two in [1, q].
struct FeederState {
    int k = 0;            // q = 2^k
    std::uint32_t q = 1;  // max skip interval
    std::uint32_t p = 1;  // current skip interval
    std::uint32_t n = 0;  // frames seen since the last processed one

    bool operator==(const FeederState&) const = default;
};

struct FeedDecision {
    bool process = false;
    FeederState state_after;  // snapshot taken right after the counter update
};

/// k = smallest integer with 2^k >= camera_fps; p starts at q = 2^k.
/// Throws InvalidFps when camera_fps < 1.
FeederState feeder_init(double camera_fps);

/// Advances the frame counter; decides whether this frame is processed.
FeedDecision on_frame(FeederState& state);

/// Applies the detector outcome for a processed frame: halve p on a hit
/// (floor 1), double on a miss (ceiling q).
void on_detection_result(FeederState& state, bool hazmat_found);

struct FeedRow {
    std::int64_t frame_index = 0;
    bool processed = false;
    std::uint32_t p = 0;  // skip interval that governed this frame's decision
    std::uint32_t n = 0;
    bool hazmat_found = false;  // meaningful only when processed
};

struct FeedTrace {
    std::vector<FeedRow> rows;
    std::size_t processed_count = 0;
    double processed_fraction = 0.0;
};

/// Replays a presence trace (one 0/1 entry per frame) through the feeder,
/// querying the trace only at processed frames. Throws EmptyTrace.
FeedTrace simulate_feed(std::span<const std::uint8_t> hazmat_per_frame, double camera_fps);

}  // namespace hazpipe
