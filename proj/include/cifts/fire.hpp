#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cifts/weights.hpp"

namespace cifts {

struct FireEvent {
    std::size_t token_index = 0;
    std::size_t fire_frame = 0;
    // Weight of the fire frame carried over into the next open token. When
    // several tokens fire on one frame, all of them report the final leftover.
    double residue_into_next = 0.0;
};

// (frame index, coefficient) terms of one integrated embedding.
using TokenCoeffs = std::vector<std::pair<std::size_t, double>>;

struct FireResult {
    std::vector<FireEvent> events;
    std::vector<TokenCoeffs> token_coeffs;
    double tail_residue = 0.0;
    // Set when a final token was emitted from the sub-threshold tail.
    bool tail_fired = false;

    std::size_t token_count() const noexcept { return events.size(); }
};

struct FireOptions {
    double threshold = 1.0;
    // Accumulation within this distance of the threshold fires. Keeps
    // weights that sum to the threshold in exact arithmetic from missing
    // a fire through rounding.
    double tolerance = 1e-9;
    // When set, a sub-threshold tail of at least this mass emits a final token.
    std::optional<double> tail_fire_min;

    void validate() const;
};

FireResult integrate_and_fire(const FrameWeights& w, const FireOptions& options = {});

struct RawInterval {
    std::size_t token_index = 0;
    double start_ms = 0.0;
    double end_ms = 0.0;
};

struct RawTimestamps {
    std::string utt_id;
    std::vector<RawInterval> intervals;
};

// Token k spans the frames after the previous fire frame up to and including
// its own fire frame; token 0 starts at frame 0. Tokens firing on the same
// frame split that frame's duration evenly.
RawTimestamps raw_timestamps(const FireResult& fr, const FrameWeights& w);

}  // namespace cifts
