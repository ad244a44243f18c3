#include "cifts/track.hpp"

#include "cifts/error.hpp"

namespace cifts {

std::vector<std::string> TimestampTrack::token_labels() const {
    std::vector<std::string> labels;
    for (const TrackEntry& e : entries) {
        if (!e.silence) {
            labels.push_back(e.label);
        }
    }
    return labels;
}

std::vector<const TrackEntry*> TimestampTrack::tokens() const {
    std::vector<const TrackEntry*> out;
    for (const TrackEntry& e : entries) {
        if (!e.silence) {
            out.push_back(&e);
        }
    }
    return out;
}

void TimestampTrack::validate() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const TrackEntry& e = entries[i];
        if (!(e.start_ms < e.end_ms) || e.start_ms < 0.0) {
            throw ParameterError("utterance '" + utt_id + "': entry " + std::to_string(i) +
                                 " has an empty or negative interval");
        }
        if (i > 0) {
            const TrackEntry& prev = entries[i - 1];
            if (e.start_ms < prev.end_ms) {
                throw ParameterError("utterance '" + utt_id + "': entries " + std::to_string(i - 1) +
                                     " and " + std::to_string(i) + " overlap or are out of order");
            }
            if (e.silence && prev.silence) {
                throw ParameterError("utterance '" + utt_id + "': adjacent silence entries at " +
                                     std::to_string(i));
            }
        }
    }
}

TrackEntry make_silence(double start_ms, double end_ms) {
    return {std::string(kSilenceLabel), start_ms, end_ms, true};
}

std::string positional_label(std::size_t k) {
    return "tok" + std::to_string(k);
}

TimestampTrack to_track(const RawTimestamps& raw, std::span<const std::string> labels) {
    if (!labels.empty() && labels.size() != raw.intervals.size()) {
        throw ParameterError("utterance '" + raw.utt_id + "': " + std::to_string(labels.size()) +
                             " labels for " + std::to_string(raw.intervals.size()) + " fired tokens");
    }
    TimestampTrack track{raw.utt_id, {}};
    track.entries.reserve(raw.intervals.size());
    for (std::size_t k = 0; k < raw.intervals.size(); ++k) {
        const RawInterval& iv = raw.intervals[k];
        track.entries.push_back({labels.empty() ? positional_label(k) : labels[k], iv.start_ms, iv.end_ms, false});
    }
    return track;
}

}  // namespace cifts
