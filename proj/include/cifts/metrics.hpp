#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cifts/align.hpp"
#include "cifts/track.hpp"

namespace cifts {

enum class DerDenominator {
    ref_speech,  // total reference non-silence duration
    utt_span,    // from 0 to the latest end in either track
};

enum class ConfusionMode {
    pairing,     // hyp token must be the edit-distance partner of the ref token
    label_only,  // hyp label must equal the ref label
};

struct ScoreOptions {
    PairMode pairs = PairMode::match_and_sub;
    DerDenominator der_denominator = DerDenominator::ref_speech;
    ConfusionMode confusion = ConfusionMode::pairing;
};

// Numerator and pair count of the averaged shift; kept separate so corpus
// scores use one global denominator.
struct ShiftTerms {
    double abs_shift_sec = 0.0;  // sum over pairs of |start diff| + |end diff|
    std::size_t k_pairs = 0;

    ShiftTerms& operator+=(const ShiftTerms& o) {
        abs_shift_sec += o.abs_shift_sec;
        k_pairs += o.k_pairs;
        return *this;
    }
    // nullopt when no pair exists.
    std::optional<double> value() const;
};

struct DerComponents {
    double false_alarm_sec = 0.0;
    double missed_sec = 0.0;
    double confusion_sec = 0.0;
    double scored_total_sec = 0.0;

    DerComponents& operator+=(const DerComponents& o);
    double errors_sec() const noexcept { return false_alarm_sec + missed_sec + confusion_sec; }
    // nullopt when nothing was scored.
    std::optional<double> value() const;
};

// `pairing` indexes the non-silence tokens of ref and hyp in track order.
ShiftTerms aas_terms(const TimestampTrack& ref, const TimestampTrack& hyp, const TokenPairing& pairing);
std::optional<double> aas(const TimestampTrack& ref, const TimestampTrack& hyp, const TokenPairing& pairing);

// Exact sweep over interval boundaries. Silence entries and gaps are non-speech.
DerComponents der(const TimestampTrack& ref, const TimestampTrack& hyp, const TokenPairing& pairing,
                  const ScoreOptions& options = {});

struct UttScore {
    std::string utt_id;
    ShiftTerms shift;
    DerComponents der;
    EditCounts edits;
};

struct ScoreReport {
    ShiftTerms shift;
    DerComponents der;
    std::vector<UttScore> per_utt;

    std::optional<double> aas_sec() const { return shift.value(); }
    std::optional<double> der_value() const { return der.value(); }
};

UttScore score_utterance(const TimestampTrack& ref, const TimestampTrack& hyp,
                         const ScoreOptions& options = {});

// Pairs are (ref, hyp) tracks of the same utterance; order is preserved in
// per_utt and totals are reduced in that order.
ScoreReport score_corpus(const std::vector<std::pair<TimestampTrack, TimestampTrack>>& tracks,
                         const ScoreOptions& options = {});

}  // namespace cifts
