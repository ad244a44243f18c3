#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cifts/track.hpp"
#include "cifts/weights.hpp"

namespace cifts {

// One synthetic utterance: tokens whose CIF mass is spent in a short burst at
// their onset regardless of their true length, separated by optional silence.
struct SynthSpec {
    std::uint64_t rng_seed = 42;
    std::size_t n_tokens = 10;
    std::size_t token_dur_min = 5;  // frames
    std::size_t token_dur_max = 6;
    // Frames at the start of each token that receive its weight mass.
    std::size_t onset_spread_frames = 4;
    // Leading frames of that window left at the floor weight, so a token's
    // onset frame itself is low-weight.
    std::size_t lead_in_frames = 0;
    // Floor weight of every frame outside a burst.
    double noise_level = 0.01;
    std::size_t leading_sil_frames = 5;
    std::size_t trailing_sil_frames = 5;
    // Probability that a silence gap follows a token (not the last one).
    double gap_prob = 0.0;
    std::size_t gap_min = 4;
    std::size_t gap_max = 8;
    double frame_ms = 40.0;
    // Upper bound on utterance length in frames; 0 disables the check.
    std::size_t max_frames = 0;

    void validate() const;
};

struct SynthUtterance {
    FrameWeights weights;
    TimestampTrack truth;
    std::vector<std::string> labels;
};

// Every token's burst is sized so that the floor mass accumulated since the
// previous burst plus the burst totals exactly 1; integrate-and-fire therefore
// fires once per token, at the end of its burst. Throws SpecError when the
// spec cannot be realized.
SynthUtterance generate(const SynthSpec& spec, const std::string& utt_id = "synth");

struct CorpusSpec {
    SynthSpec base;
    std::size_t n_utts = 100;
    std::size_t tokens_min = 3;
    std::size_t tokens_max = 12;
    std::size_t sil_min = 2;  // leading and trailing silence, frames
    std::size_t sil_max = 10;
};

// Utterance i draws its own seed, token count and silences from
// base.rng_seed and i. Ids are "synth-0000", "synth-0001", ...
std::vector<SynthUtterance> generate_corpus(const CorpusSpec& spec);

// The corpus used to check the post-processing ladder: seed 42, 100
// utterances, 4-frame onset bursts, tokens longer than their burst.
CorpusSpec ladder_corpus_spec();

}  // namespace cifts
