#include <doctest.h>

#include <cmath>
#include <random>

#include "cifts/metrics.hpp"
#include "oracles.hpp"

using namespace cifts;

namespace {

TrackEntry tok(const std::string& label, double s, double e) {
    return {label, s, e, false};
}

TokenPairing pair_of(const TimestampTrack& ref, const TimestampTrack& hyp) {
    return align_tokens(ref.token_labels(), hyp.token_labels());
}

}  // namespace

TEST_CASE("AAS") {
    const TimestampTrack ref{"u", {tok("a", 0.0, 500.0)}};
    SUBCASE("identical tracks") {
        CHECK(*aas(ref, ref, pair_of(ref, ref)) == 0.0);
    }
    SUBCASE("one shifted token") {
        const TimestampTrack hyp{"u", {tok("a", 100.0, 400.0)}};
        CHECK(*aas(ref, hyp, pair_of(ref, hyp)) == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("no pairs is undefined, not zero") {
        const TimestampTrack empty{"u", {}};
        CHECK_FALSE(aas(ref, empty, pair_of(ref, empty)).has_value());
    }
    SUBCASE("silence entries are not scored") {
        const TimestampTrack hyp{"u", {make_silence(0.0, 100.0), tok("a", 100.0, 400.0), make_silence(400.0, 900.0)}};
        CHECK(*aas(ref, hyp, pair_of(ref, hyp)) == doctest::Approx(0.1));
    }
    SUBCASE("symmetric under transposed pairing") {
        const TimestampTrack hyp{"u", {tok("a", 30.0, 420.0), tok("b", 420.0, 700.0)}};
        const auto p = pair_of(ref, hyp);
        TokenPairing t = p;
        for (auto& [r, h] : t.pairs) std::swap(r, h);
        CHECK(*aas(ref, hyp, p) == doctest::Approx(*aas(hyp, ref, t)).epsilon(1e-15));
    }
}

TEST_CASE("corpus AAS uses one global pair count") {
    std::mt19937_64 rng(5);
    std::vector<std::pair<TimestampTrack, TimestampTrack>> tracks;
    double sum = 0.0;
    std::size_t k = 0;
    for (int i = 0; i < 20; ++i) {
        auto tp = oracle::random_track_pair(rng, 3000.0);
        const auto p = pair_of(tp.ref, tp.hyp);
        if (!p.pairs.empty()) {
            sum += oracle::aas_direct(tp.ref, tp.hyp, p) * 2.0 * static_cast<double>(p.pairs.size());
            k += p.pairs.size();
        }
        tracks.emplace_back(tp.ref, tp.hyp);
    }
    const ScoreReport r = score_corpus(tracks);
    CHECK(r.shift.k_pairs == k);
    CHECK(std::fabs(*r.aas_sec() - sum / (2.0 * static_cast<double>(k))) <= 1e-12);
}

TEST_CASE("DER hand cases") {
    SUBCASE("identical tracks") {
        const TimestampTrack t{"u", {tok("a", 0.0, 300.0), make_silence(300.0, 500.0), tok("b", 500.0, 900.0)}};
        const auto d = der(t, t, pair_of(t, t));
        CHECK(d.errors_sec() == 0.0);
        CHECK(*d.value() == 0.0);
        CHECK(d.scored_total_sec == doctest::Approx(0.7));
    }
    SUBCASE("false alarm past the reference end") {
        const TimestampTrack ref{"u", {tok("a", 0.0, 500.0), make_silence(500.0, 1000.0)}};
        const TimestampTrack hyp{"u", {tok("a", 0.0, 600.0)}};
        const auto p = pair_of(ref, hyp);
        const auto d = der(ref, hyp, p);
        const auto o = oracle::discretized_der(ref, hyp, p);
        CHECK(o.false_alarm_sec == doctest::Approx(0.1));
        CHECK(d.false_alarm_sec == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(d.missed_sec == 0.0);
        CHECK(d.confusion_sec == 0.0);
        CHECK(d.scored_total_sec == doctest::Approx(0.5));
        CHECK(*d.value() == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(*d.value() == doctest::Approx(o.der()).epsilon(1e-9));
    }
    SUBCASE("boundary shift is confusion") {
        const TimestampTrack ref{"u", {tok("a", 0.0, 400.0), tok("b", 400.0, 800.0)}};
        const TimestampTrack hyp{"u", {tok("a", 0.0, 500.0), tok("b", 500.0, 800.0)}};
        const auto p = pair_of(ref, hyp);
        const auto d = der(ref, hyp, p);
        const auto o = oracle::discretized_der(ref, hyp, p);
        CHECK(o.confusion_sec == doctest::Approx(0.1));
        CHECK(d.confusion_sec == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(d.false_alarm_sec == 0.0);
        CHECK(d.missed_sec == 0.0);
        CHECK(*d.value() == doctest::Approx(0.125).epsilon(1e-12));
    }
    SUBCASE("pairing distinguishes repeated characters") {
        // Same label twice; hyp swaps which instance covers the middle.
        const TimestampTrack ref{"u", {tok("a", 0.0, 400.0), tok("a", 400.0, 800.0)}};
        const TimestampTrack hyp{"u", {tok("a", 0.0, 600.0), tok("a", 600.0, 800.0)}};
        const auto p = pair_of(ref, hyp);
        CHECK(der(ref, hyp, p).confusion_sec == doctest::Approx(0.2));
        ScoreOptions label_only;
        label_only.confusion = ConfusionMode::label_only;
        CHECK(der(ref, hyp, p, label_only).confusion_sec == 0.0);
    }
    SUBCASE("missed speech and utterance-span denominator") {
        const TimestampTrack ref{"u", {tok("a", 0.0, 400.0), tok("b", 400.0, 800.0)}};
        const TimestampTrack hyp{"u", {tok("a", 0.0, 400.0), make_silence(400.0, 1000.0)}};
        const auto p = pair_of(ref, hyp);
        const auto d = der(ref, hyp, p);
        CHECK(d.missed_sec == doctest::Approx(0.4));
        CHECK(*d.value() == doctest::Approx(0.5));
        ScoreOptions span;
        span.der_denominator = DerDenominator::utt_span;
        const auto ds = der(ref, hyp, p, span);
        CHECK(ds.scored_total_sec == doctest::Approx(1.0));
        CHECK(*ds.value() == doctest::Approx(0.4));
    }
    SUBCASE("no reference speech is undefined") {
        const TimestampTrack ref{"u", {make_silence(0.0, 500.0)}};
        const TimestampTrack hyp{"u", {tok("a", 0.0, 100.0)}};
        const auto d = der(ref, hyp, pair_of(ref, hyp));
        CHECK(d.false_alarm_sec == doctest::Approx(0.1));
        CHECK_FALSE(d.value().has_value());
    }
}

TEST_CASE("DER properties on random tracks") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const auto tp = oracle::random_track_pair(rng, 10000.0);
        const auto p = pair_of(tp.ref, tp.hyp);
        const auto d = der(tp.ref, tp.hyp, p);
        const auto o = oracle::discretized_der(tp.ref, tp.hyp, p);
        CHECK(std::fabs(*d.value() - o.der()) <= 1e-3);
        CHECK(d.false_alarm_sec >= 0.0);
        CHECK(d.missed_sec >= 0.0);
        CHECK(d.confusion_sec >= 0.0);
        CHECK(std::fabs(*d.value() * d.scored_total_sec - d.errors_sec()) <= 1e-9);

        // Uniform time scaling scales AAS and leaves DER unchanged.
        const double c = 1.5;
        auto scaled = [&](TimestampTrack t) {
            for (auto& e : t.entries) {
                e.start_ms *= c;
                e.end_ms *= c;
            }
            return t;
        };
        const auto sr = scaled(tp.ref);
        const auto sh = scaled(tp.hyp);
        CHECK(*der(sr, sh, p).value() == doctest::Approx(*d.value()).epsilon(1e-9));
        if (!p.pairs.empty()) {
            CHECK(*aas(sr, sh, p) == doctest::Approx(c * *aas(tp.ref, tp.hyp, p)).epsilon(1e-9));
        }
    }
}
