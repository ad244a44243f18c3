#pragma once

#include <cstddef>

#include "cifts/track.hpp"
#include "cifts/weights.hpp"

namespace cifts {

struct PostprocParams {
    // Frames with alpha below this count as low-weight.
    double theta_s = 0.05;
    // Longest low-weight run absorbed by fire delay; longer runs become silence.
    std::size_t l_s = 3;
    // Frames kept on the last token after the last non-low frame.
    std::size_t end_keep_frames = 3;

    void validate() const;
};

struct PostprocStages {
    bool boundary_silence = true;
    bool fire_delay = true;
    bool silence_insertion = true;

    static PostprocStages none() { return {false, false, false}; }
    bool any() const noexcept { return boundary_silence || fire_delay || silence_insertion; }
};

// Leading frames before the first non-low frame become silence and the first
// token starts there. The last token is clipped (never extended) to end
// `end_keep_frames` after the last non-low frame; the rest is trailing
// silence. A track with no tokens, or weights with no non-low frame, becomes
// one silence entry spanning the utterance.
TimestampTrack trim_boundary_silence(const TimestampTrack& track, const FrameWeights& w,
                                     const PostprocParams& p);

// For each pair of consecutive tokens, looks at the low-weight run that
// starts right after the first token's end (its fire frame is excluded) and
// stops before the second token's last frame. A run of length r <= l_s is
// absorbed by the first token except its last frame, which opens the second
// token. A longer run keeps the first token's end and becomes a silence entry,
// again leaving the last frame to the second token. With insertion disabled
// every run is absorbed; with delay disabled short runs are left alone.
TimestampTrack fire_delay_and_insert(const TimestampTrack& track, const FrameWeights& w,
                                     const PostprocParams& p, bool fire_delay = true,
                                     bool silence_insertion = true);

// Boundary silence, then fire delay / silence insertion. With every stage off
// the track is returned unchanged.
TimestampTrack postprocess(const TimestampTrack& track, const FrameWeights& w,
                           const PostprocParams& p, const PostprocStages& stages = {});

}  // namespace cifts
