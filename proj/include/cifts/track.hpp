#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cifts/fire.hpp"

namespace cifts {

inline constexpr std::string_view kSilenceLabel = "<sil>";

struct TrackEntry {
    std::string label;
    double start_ms = 0.0;
    double end_ms = 0.0;
    bool silence = false;

    bool operator==(const TrackEntry&) const = default;
};

// Ordered, non-overlapping token intervals of one utterance. Gaps are allowed
// and count as silence when scored.
struct TimestampTrack {
    std::string utt_id;
    std::vector<TrackEntry> entries;

    bool operator==(const TimestampTrack&) const = default;

    std::vector<std::string> token_labels() const;
    std::vector<const TrackEntry*> tokens() const;

    // Throws ParameterError on overlap, disorder, empty intervals or two
    // adjacent silence entries.
    void validate() const;
};

TrackEntry make_silence(double start_ms, double end_ms);

// Positional label used when no recognition output accompanies the weights.
std::string positional_label(std::size_t k);

// Attaches labels to raw intervals. An empty `labels` falls back to positional
// labels; otherwise the size must match the interval count.
TimestampTrack to_track(const RawTimestamps& raw, std::span<const std::string> labels = {});

}  // namespace cifts
