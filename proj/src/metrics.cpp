#include "cifts/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cifts/error.hpp"

namespace cifts {

std::optional<double> ShiftTerms::value() const {
    if (k_pairs == 0) {
        return std::nullopt;
    }
    return abs_shift_sec / (2.0 * static_cast<double>(k_pairs));
}

DerComponents& DerComponents::operator+=(const DerComponents& o) {
    false_alarm_sec += o.false_alarm_sec;
    missed_sec += o.missed_sec;
    confusion_sec += o.confusion_sec;
    scored_total_sec += o.scored_total_sec;
    return *this;
}

std::optional<double> DerComponents::value() const {
    if (!(scored_total_sec > 0.0)) {
        return std::nullopt;
    }
    return errors_sec() / scored_total_sec;
}

ShiftTerms aas_terms(const TimestampTrack& ref, const TimestampTrack& hyp, const TokenPairing& pairing) {
    const auto r = ref.tokens();
    const auto h = hyp.tokens();
    ShiftTerms terms;
    for (const auto& [ri, hi] : pairing.pairs) {
        if (ri >= r.size() || hi >= h.size()) {
            throw ParameterError("utterance '" + ref.utt_id + "': pairing index outside token range");
        }
        terms.abs_shift_sec += (std::abs(r[ri]->start_ms - h[hi]->start_ms) +
                                std::abs(r[ri]->end_ms - h[hi]->end_ms)) / 1000.0;
        ++terms.k_pairs;
    }
    return terms;
}

std::optional<double> aas(const TimestampTrack& ref, const TimestampTrack& hyp, const TokenPairing& pairing) {
    return aas_terms(ref, hyp, pairing).value();
}

namespace {

// Walks the non-silence intervals of one track in time order.
class Cursor {
public:
    explicit Cursor(std::vector<const TrackEntry*> tokens) : tokens_(std::move(tokens)) {}

    // Index of the token covering [a, b), or npos. Calls must have
    // non-decreasing `a`.
    std::size_t covering(double a, double b) {
        while (pos_ < tokens_.size() && tokens_[pos_]->end_ms <= a) {
            ++pos_;
        }
        if (pos_ < tokens_.size() && tokens_[pos_]->start_ms <= a && tokens_[pos_]->end_ms >= b) {
            return pos_;
        }
        return kNoPartner;
    }

    const TrackEntry& at(std::size_t i) const { return *tokens_[i]; }

private:
    std::vector<const TrackEntry*> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

DerComponents der(const TimestampTrack& ref, const TimestampTrack& hyp, const TokenPairing& pairing,
                  const ScoreOptions& options) {
    ref.validate();
    hyp.validate();
    const auto ref_tokens = ref.tokens();
    const auto hyp_tokens = hyp.tokens();
    const auto partners = pairing.ref_partners(ref_tokens.size());

    std::vector<double> cuts;
    cuts.reserve(2 * (ref_tokens.size() + hyp_tokens.size()));
    for (const auto* e : ref_tokens) {
        cuts.push_back(e->start_ms);
        cuts.push_back(e->end_ms);
    }
    for (const auto* e : hyp_tokens) {
        cuts.push_back(e->start_ms);
        cuts.push_back(e->end_ms);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Cursor rc(ref_tokens);
    Cursor hc(hyp_tokens);
    double fa_ms = 0.0, miss_ms = 0.0, conf_ms = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        const double len = b - a;
        const std::size_t r = rc.covering(a, b);
        const std::size_t h = hc.covering(a, b);
        if (r == kNoPartner && h == kNoPartner) {
            continue;
        }
        if (r == kNoPartner) {
            fa_ms += len;
        } else if (h == kNoPartner) {
            miss_ms += len;
        } else {
            const bool same = options.confusion == ConfusionMode::pairing
                                  ? partners[r] == h
                                  : rc.at(r).label == hc.at(h).label;
            if (!same) {
                conf_ms += len;
            }
        }
    }

    DerComponents out;
    out.false_alarm_sec = fa_ms / 1000.0;
    out.missed_sec = miss_ms / 1000.0;
    out.confusion_sec = conf_ms / 1000.0;
    if (options.der_denominator == DerDenominator::ref_speech) {
        double speech_ms = 0.0;
        for (const auto* e : ref_tokens) {
            speech_ms += e->end_ms - e->start_ms;
        }
        out.scored_total_sec = speech_ms / 1000.0;
    } else {
        double span_ms = 0.0;
        if (!ref.entries.empty()) span_ms = std::max(span_ms, ref.entries.back().end_ms);
        if (!hyp.entries.empty()) span_ms = std::max(span_ms, hyp.entries.back().end_ms);
        out.scored_total_sec = span_ms / 1000.0;
    }
    return out;
}

UttScore score_utterance(const TimestampTrack& ref, const TimestampTrack& hyp, const ScoreOptions& options) {
    const auto ref_labels = ref.token_labels();
    const auto hyp_labels = hyp.token_labels();
    const TokenPairing pairing = align_tokens(ref_labels, hyp_labels, options.pairs);
    UttScore s;
    s.utt_id = ref.utt_id;
    s.shift = aas_terms(ref, hyp, pairing);
    s.der = der(ref, hyp, pairing, options);
    s.edits = pairing.counts;
    return s;
}

ScoreReport score_corpus(const std::vector<std::pair<TimestampTrack, TimestampTrack>>& tracks,
                         const ScoreOptions& options) {
    ScoreReport report;
    report.per_utt.reserve(tracks.size());
    for (const auto& [ref, hyp] : tracks) {
        UttScore s = score_utterance(ref, hyp, options);
        report.shift += s.shift;
        report.der += s.der;
        report.per_utt.push_back(std::move(s));
    }
    return report;
}

}  // namespace cifts
