#include "cifts/fire.hpp"

#include <cmath>

#include "cifts/error.hpp"

namespace cifts {

void FireOptions::validate() const {
    if (!(threshold > 0.0) || !std::isfinite(threshold)) {
        throw ParameterError("fire threshold must be positive");
    }
    if (!(tolerance >= 0.0) || tolerance >= threshold) {
        throw ParameterError("fire tolerance must lie in [0, threshold)");
    }
    if (tail_fire_min && !(*tail_fire_min > 0.0 && *tail_fire_min < threshold)) {
        throw ParameterError("tail_fire_min must lie in (0, threshold)");
    }
}

FireResult integrate_and_fire(const FrameWeights& w, const FireOptions& options) {
    w.validate();
    options.validate();
    const double threshold = options.threshold;
    const double fire_level = threshold - options.tolerance;

    FireResult result;
    TokenCoeffs current;
    double accumulated = 0.0;

    for (std::size_t t = 0; t < w.frames(); ++t) {
        double remaining = w.alpha[t];
        const std::size_t first_event = result.events.size();
        // A single frame heavier than the threshold may close several tokens.
        while (accumulated + remaining >= fire_level) {
            const double needed = std::max(0.0, threshold - accumulated);
            const double taken = std::min(needed, remaining);
            current.emplace_back(t, needed);
            remaining = std::max(0.0, remaining - taken);
            accumulated = 0.0;

            result.events.push_back({result.events.size(), t, remaining});
            result.token_coeffs.push_back(std::move(current));
            current.clear();
            if (remaining == 0.0) {
                break;
            }
        }
        // Every fire on this frame reports what the frame finally leaves open.
        for (std::size_t e = first_event; e < result.events.size(); ++e) {
            result.events[e].residue_into_next = remaining;
        }
        if (remaining > 0.0) {
            current.emplace_back(t, remaining);
            accumulated += remaining;
        }
    }

    result.tail_residue = accumulated;
    if (options.tail_fire_min && accumulated >= *options.tail_fire_min) {
        result.events.push_back({result.events.size(), w.frames() - 1, 0.0});
        result.token_coeffs.push_back(std::move(current));
        result.tail_fired = true;
    }
    return result;
}

RawTimestamps raw_timestamps(const FireResult& fr, const FrameWeights& w) {
    w.validate();
    const std::size_t n = w.frames();
    for (const FireEvent& ev : fr.events) {
        if (ev.fire_frame >= n) {
            throw ParameterError("fire frame " + std::to_string(ev.fire_frame) +
                                 " outside utterance of " + std::to_string(n) + " frames");
        }
    }

    RawTimestamps raw{w.utt_id, {}};
    raw.intervals.reserve(fr.events.size());
    const double ms = w.frame_ms;
    std::size_t next_frame = 0;  // first frame not yet assigned
    std::size_t i = 0;
    while (i < fr.events.size()) {
        const std::size_t frame = fr.events[i].fire_frame;
        if (i > 0 && frame < fr.events[i - 1].fire_frame) {
            throw ParameterError("fire frames are not monotone");
        }
        std::size_t j = i;
        while (j < fr.events.size() && fr.events[j].fire_frame == frame) {
            ++j;
        }
        const std::size_t group = j - i;
        const double slot = ms / static_cast<double>(group);
        for (std::size_t g = 0; g < group; ++g) {
            const double start = g == 0 ? static_cast<double>(next_frame) * ms
                                        : static_cast<double>(frame) * ms + slot * static_cast<double>(g);
            const double end = g + 1 == group ? static_cast<double>(frame + 1) * ms
                                              : static_cast<double>(frame) * ms + slot * static_cast<double>(g + 1);
            raw.intervals.push_back({fr.events[i + g].token_index, start, end});
        }
        next_frame = frame + 1;
        i = j;
    }
    return raw;
}

}  // namespace cifts
