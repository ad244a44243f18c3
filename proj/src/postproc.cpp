#include "cifts/postproc.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "cifts/error.hpp"

namespace cifts {

namespace {

// Times on the frame grid are products of integers and frame_ms; anything
// farther than this from the grid is treated as off-grid.
constexpr double kGridEps = 1e-6;

std::optional<std::size_t> grid_frame(double ms, double frame_ms) {
    const double f = ms / frame_ms;
    const double r = std::round(f);
    if (r < 0.0 || std::abs(f - r) * frame_ms > kGridEps) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(r);
}

double frame_time(std::size_t frame, double frame_ms) {
    return static_cast<double>(frame) * frame_ms;
}

struct Split {
    std::vector<TrackEntry> leading;  // silences before the first token
    std::vector<TrackEntry> body;     // first token .. last token inclusive
    std::vector<TrackEntry> trailing; // silences after the last token
};

Split split_track(const TimestampTrack& track) {
    Split s;
    const auto& e = track.entries;
    auto first = std::find_if(e.begin(), e.end(), [](const TrackEntry& x) { return !x.silence; });
    if (first == e.end()) {
        s.leading = e;
        return s;
    }
    auto last = std::find_if(e.rbegin(), e.rend(), [](const TrackEntry& x) { return !x.silence; }).base();
    s.leading.assign(e.begin(), first);
    s.body.assign(first, last);
    s.trailing.assign(last, e.end());
    return s;
}

void check_inputs(const TimestampTrack& track, const FrameWeights& w, const PostprocParams& p) {
    w.validate();
    p.validate();
    track.validate();
    if (!track.entries.empty() && track.entries.back().end_ms > w.duration_ms() + kGridEps) {
        throw ParameterError("utterance '" + track.utt_id + "': track ends after the last frame");
    }
}

TimestampTrack whole_silence(const TimestampTrack& track, const FrameWeights& w) {
    return {track.utt_id, {make_silence(0.0, w.duration_ms())}};
}

}  // namespace

void PostprocParams::validate() const {
    if (!(theta_s > 0.0 && theta_s < 1.0)) {
        throw ParameterError("theta_s must lie in (0, 1)");
    }
    if (l_s < 1) {
        throw ParameterError("l_s must be at least 1");
    }
}

TimestampTrack trim_boundary_silence(const TimestampTrack& track, const FrameWeights& w,
                                     const PostprocParams& p) {
    check_inputs(track, w, p);
    const double ms = w.frame_ms;
    const std::size_t n = w.frames();
    auto is_high = [&](double a) { return a >= p.theta_s; };

    Split s = split_track(track);
    if (s.body.empty()) {
        return whole_silence(track, w);
    }
    const auto first_high = std::find_if(w.alpha.begin(), w.alpha.end(), is_high);
    if (first_high == w.alpha.end()) {
        return whole_silence(track, w);
    }
    const auto b = static_cast<std::size_t>(first_high - w.alpha.begin());
    const auto e = n - 1 - static_cast<std::size_t>(std::find_if(w.alpha.rbegin(), w.alpha.rend(), is_high) -
                                                     w.alpha.rbegin());

    // The first token keeps at least one frame (or its whole span if shorter).
    TrackEntry& first = s.body.front();
    const double first_len = first.end_ms - first.start_ms;
    first.start_ms = std::max(first.start_ms, std::min(frame_time(b, ms), first.end_ms - std::min(ms, first_len)));

    TrackEntry& last = s.body.back();
    const double cut = frame_time(std::min(n, e + p.end_keep_frames + 1), ms);
    const double last_len = last.end_ms - last.start_ms;
    last.end_ms = std::min(last.end_ms, std::max(cut, last.start_ms + std::min(ms, last_len)));

    TimestampTrack out{track.utt_id, {}};
    if (b > 0 && first.start_ms > 0.0) {
        out.entries.push_back(make_silence(0.0, first.start_ms));
    }
    out.entries.insert(out.entries.end(), s.body.begin(), s.body.end());
    const double trail_start = std::max(cut, last.end_ms);
    if (trail_start < w.duration_ms()) {
        out.entries.push_back(make_silence(trail_start, w.duration_ms()));
    }
    return out;
}

TimestampTrack fire_delay_and_insert(const TimestampTrack& track, const FrameWeights& w,
                                     const PostprocParams& p, bool fire_delay,
                                     bool silence_insertion) {
    check_inputs(track, w, p);
    if (!fire_delay && !silence_insertion) {
        return track;
    }
    const double ms = w.frame_ms;
    auto is_low = [&](std::size_t t) { return w.alpha[t] < p.theta_s; };

    Split s = split_track(track);
    std::vector<TrackEntry> tokens;
    for (const TrackEntry& x : s.body) {
        if (!x.silence) {
            tokens.push_back(x);
        }
    }

    TimestampTrack out{track.utt_id, s.leading};
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        if (k + 1 == tokens.size()) {
            out.entries.push_back(tokens[k]);
            break;
        }
        TrackEntry& cur = tokens[k];
        TrackEntry& next = tokens[k + 1];
        const auto boundary = grid_frame(cur.end_ms, ms);
        const auto next_end = grid_frame(next.end_ms, ms);
        std::optional<TrackEntry> silence;
        if (boundary && next_end && *next_end >= 1) {
            // The second token's last frame carries its fire and is never low-run.
            const std::size_t cap = *next_end - 1;
            std::size_t run = 0;
            while (*boundary + run < cap && is_low(*boundary + run)) {
                ++run;
            }
            if (run > 0) {
                const double last_low = frame_time(*boundary + run - 1, ms);
                const bool long_run = run > p.l_s;
                if (fire_delay && !(long_run && silence_insertion)) {
                    cur.end_ms = last_low;
                    next.start_ms = std::max(next.start_ms, last_low);
                } else if (silence_insertion && long_run) {
                    if (last_low > cur.end_ms) {
                        silence = make_silence(cur.end_ms, last_low);
                    }
                    next.start_ms = std::max(next.start_ms, last_low);
                }
            }
        }
        out.entries.push_back(cur);
        if (silence) {
            out.entries.push_back(*silence);
        }
    }
    out.entries.insert(out.entries.end(), s.trailing.begin(), s.trailing.end());
    return out;
}

TimestampTrack postprocess(const TimestampTrack& track, const FrameWeights& w,
                           const PostprocParams& p, const PostprocStages& stages) {
    if (!stages.any()) {
        check_inputs(track, w, p);
        return track;
    }
    TimestampTrack out = track;
    if (stages.boundary_silence) {
        out = trim_boundary_silence(out, w, p);
    }
    return fire_delay_and_insert(out, w, p, stages.fire_delay, stages.silence_insertion);
}

}  // namespace cifts
