// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cifts/align.hpp"
#include "cifts/fire.hpp"
#include "cifts/metrics.hpp"
#include "cifts/pipeline.hpp"
#include "cifts/postproc.hpp"
#include "cifts/synth.hpp"
#include "cifts/weights.hpp"
#include "oracles.hpp"

using namespace cifts;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

struct Criterion {
    const char* id;
    const char* name;
    double budget_sec;
    std::function<Outcome()> run;
};

double coeff_sum(const TokenCoeffs& c) {
    double s = 0.0;
    for (const auto& [t, v] : c) s += v;
    return s;
}

TimestampTrack raw_track(const FrameWeights& w) {
    return to_track(raw_timestamps(integrate_and_fire(w), w));
}

Outcome worked_example() {
    Outcome o;
    const FrameWeights w{"fig", 40.0, {0.3, 0.9, 0.4, 0.4, 0.3}, std::nullopt};
    const FireResult fr = integrate_and_fire(w);
    if (fr.token_count() != 2) {
        o.fail("expected 2 fires, got " + std::to_string(fr.token_count()));
        return o;
    }
    const TokenCoeffs e1 = {{0, 0.3}, {1, 0.7}};
    const TokenCoeffs e2 = {{1, 0.2}, {2, 0.4}, {3, 0.4}};
    double worst = 0.0;
    auto compare = [&](const TokenCoeffs& got, const TokenCoeffs& want) {
        if (got.size() != want.size()) {
            o.fail("coefficient count mismatch");
            return;
        }
        for (std::size_t i = 0; i < want.size(); ++i) {
            if (got[i].first != want[i].first) o.fail("coefficient frame mismatch");
            worst = std::max(worst, std::fabs(got[i].second - want[i].second));
        }
    };
    compare(fr.token_coeffs[0], e1);
    compare(fr.token_coeffs[1], e2);
    worst = std::max(worst, std::fabs(fr.tail_residue - 0.3));
    if (worst > 1e-12) o.fail("max error " + std::to_string(worst));
    char buf[96];
    std::snprintf(buf, sizeof buf, "fires at {%zu,%zu}, max coeff error %.2e", fr.events[0].fire_frame,
                  fr.events[1].fire_frame, worst);
    if (o.pass) o.detail = buf;
    return o;
}

Outcome fire_count_law() {
    Outcome o;
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> len(1, 200);
    std::uniform_real_distribution<double> a(0.0, 1.5);
    const int cases = 2000;
    double worst = 0.0;
    for (int i = 0; i < cases; ++i) {
        std::vector<double> alpha(len(rng));
        for (double& v : alpha) v = a(rng);
        const FrameWeights w{"r", 40.0, alpha, std::nullopt};
        const FireResult fr = integrate_and_fire(w);
        if (fr.token_count() != oracle::fire_count(alpha, 1.0)) {
            o.fail("case " + std::to_string(i) + ": " + std::to_string(fr.token_count()) + " fires, oracle " +
                   std::to_string(oracle::fire_count(alpha, 1.0)));
        }
        for (const auto& c : fr.token_coeffs) worst = std::max(worst, std::fabs(coeff_sum(c) - 1.0));
    }
    if (worst > 1e-9) o.fail("coefficient sum error " + std::to_string(worst));
    if (o.pass) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%d sequences, max |sum - threshold| %.2e", cases, worst);
        o.detail = buf;
    }
    return o;
}

Outcome metric_oracles() {
    Outcome o;
    std::mt19937_64 rng(3);
    const int cases = 120;
    double worst_der = 0.0;
    double worst_aas = 0.0;
    for (int i = 0; i < cases; ++i) {
        const auto tp = oracle::random_track_pair(rng, 10000.0);
        const auto p = align_tokens(tp.ref.token_labels(), tp.hyp.token_labels());
        const auto d = der(tp.ref, tp.hyp, p);
        const auto sweep = oracle::discretized_der(tp.ref, tp.hyp, p);
        worst_der = std::max(worst_der, std::fabs(*d.value() - sweep.der()));
        if (!p.pairs.empty()) {
            worst_aas = std::max(worst_aas, std::fabs(*aas(tp.ref, tp.hyp, p) - oracle::aas_direct(tp.ref, tp.hyp, p)));
        }
    }
    if (worst_der > 1e-3) o.fail("DER deviation " + std::to_string(worst_der));
    if (worst_aas > 1e-12) o.fail("AAS deviation " + std::to_string(worst_aas));
    if (o.pass) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%d pairs >= 10 s, max |DER - sweep| %.2e, max |AAS - direct| %.2e", cases,
                      worst_der, worst_aas);
        o.detail = buf;
    }
    return o;
}

Outcome alignment_oracle() {
    Outcome o;
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> len(0, 12);
    std::uniform_int_distribution<int> sym(0, 4);
    const int cases = 1000;
    for (int i = 0; i < cases; ++i) {
        std::vector<std::string> a(len(rng)), b(len(rng));
        for (auto& s : a) s = std::string(1, static_cast<char>('a' + sym(rng)));
        for (auto& s : b) s = std::string(1, static_cast<char>('a' + sym(rng)));
        const auto p = align_tokens(a, b);
        const auto& c = p.counts;
        const std::size_t backtraced = c.substitutions + c.insertions + c.deletions;
        if (p.edit_distance != oracle::edit_distance(a, b) || backtraced != p.edit_distance) {
            o.fail("case " + std::to_string(i) + " disagrees with the oracle");
        }
    }
    if (o.pass) o.detail = std::to_string(cases) + " pairs up to length 12, all exact";
    return o;
}

Outcome ladder() {
    Outcome o;
    const CorpusSpec spec = ladder_corpus_spec();
    const auto corpus = generate_corpus(spec);
    std::map<std::string, TimestampTrack> ref;
    std::vector<WeightsRecord> records;
    for (const auto& u : corpus) {
        ref[u.truth.utt_id] = u.truth;
        records.push_back({u.weights, u.labels, 0});
    }
    CommandResult result;
    const auto rows = ablate(records, ref, RunConfig{}, result, std::nullopt);
    if (!result.ok()) {
        o.fail(format_diagnostic(result.diagnostics.front()));
        return o;
    }
    if (rows.size() != 4) {
        o.fail("expected 4 ladder rows");
        return o;
    }
    std::string detail = "AAS";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].aas_sec) {
            o.fail(rows[i].system + " has no pairs");
            return o;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, " %s=%.4f", rows[i].system.c_str(), *rows[i].aas_sec);
        detail += buf;
        if (i > 0 && !(*rows[i].aas_sec < *rows[i - 1].aas_sec)) {
            o.fail(rows[i].system + " does not improve on " + rows[i - 1].system);
        }
    }
    const double frame_sec = spec.base.frame_ms / 1000.0;
    if (*rows.back().aas_sec > frame_sec) o.fail("final AAS above one frame");
    if (o.pass) o.detail = detail + " s (frame " + std::to_string(frame_sec).substr(0, 5) + " s)";
    return o;
}

Outcome postproc_invariants() {
    Outcome o;
    const PostprocParams p;
    std::vector<FrameWeights> inputs;
    for (const auto& u : generate_corpus(ladder_corpus_spec())) inputs.push_back(u.weights);
    // Adversarial inputs.
    inputs.push_back({"all-silence", 40.0, std::vector<double>(12, 0.01), std::nullopt});
    inputs.push_back({"zero-fires", 40.0, {0.01, 0.4, 0.3, 0.01}, std::nullopt});
    inputs.push_back({"single-frame-tokens", 40.0, {1.0, 1.0, 0.01, 1.0, 0.01, 0.01, 0.01, 0.01, 1.0, 1.0}, std::nullopt});
    inputs.push_back({"one-frame", 40.0, {1.0}, std::nullopt});
    inputs.push_back({"heavy-frames", 40.0, {0.01, 2.5, 0.01, 0.01, 0.01, 0.01, 0.01, 1.7, 0.3}, std::nullopt});
    const PostprocStages stage_sets[] = {{true, false, false}, {true, true, false}, {true, true, true},
                                         {false, true, true}, {false, true, false}, {false, false, true}};

    std::size_t checked = 0;
    for (const FrameWeights& w : inputs) {
        const TimestampTrack raw = raw_track(w);
        const bool any_high = std::any_of(w.alpha.begin(), w.alpha.end(), [&](double a) { return a >= p.theta_s; });
        for (const auto& stages : stage_sets) {
            const TimestampTrack once = postprocess(raw, w, p, stages);
            ++checked;
            try {
                once.validate();
            } catch (const std::exception& e) {
                o.fail(w.utt_id + ": " + e.what());
            }
            if (postprocess(once, w, p, stages) != once) o.fail(w.utt_id + ": not idempotent");
            if (raw.tokens().empty() || (stages.boundary_silence && !any_high)) {
                // Nothing to preserve: the whole utterance is one silence.
                if (stages.boundary_silence &&
                    (once.entries.size() != 1 || once.entries[0] != make_silence(0.0, w.duration_ms()))) {
                    o.fail(w.utt_id + ": expected one silence entry");
                }
                continue;
            }
            if (once.token_labels() != raw.token_labels()) o.fail(w.utt_id + ": token labels/order changed");
            const auto before = raw.tokens();
            const auto after = once.tokens();
            for (std::size_t k = 0; k + 1 < after.size(); ++k) {
                if (after[k]->end_ms > after[k + 1]->start_ms) o.fail(w.utt_id + ": tokens overlap");
            }
            if (!stages.boundary_silence) {
                for (std::size_t k = 0; k < before.size(); ++k) {
                    if (after[k]->start_ms < before[k]->start_ms) o.fail(w.utt_id + ": start moved earlier");
                }
            }
        }
    }
    if (o.pass) o.detail = std::to_string(checked) + " (utterance, stage set) runs: idempotent, ordered, labels kept, non-overlapping";
    return o;
}

Outcome scaled_cif_properties() {
    Outcome o;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> x(-40.0, 40.0);
    std::uniform_real_distribution<double> g(0.01, 1.0);
    std::uniform_real_distribution<double> b(0.0, 0.99);
    const int points = 10000;
    std::vector<double> xs(points);
    for (double& v : xs) v = x(rng);
    std::sort(xs.begin(), xs.end());

    double worst_sigmoid = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const ScaleParams params{trial == 0 ? 0.8 : g(rng), trial == 0 ? 0.05 : b(rng)};
        const auto y = scaled_cif(xs, params);
        const double bound = params.gamma * (1.0 - params.beta);
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] < 0.0 || y[i] > bound + 1e-12) o.fail("value outside [0, gamma(1-beta)]");
            if (i > 0 && y[i] + 1e-12 < y[i - 1]) o.fail("not monotone in x");
        }
    }
    const auto s = scaled_cif(xs, {1.0, 0.0});
    for (std::size_t i = 0; i < xs.size(); ++i) {
        worst_sigmoid = std::max(worst_sigmoid, std::fabs(s[i] - 1.0 / (1.0 + std::exp(-xs[i]))));
    }
    if (worst_sigmoid > 1e-12) o.fail("sigmoid deviation " + std::to_string(worst_sigmoid));
    if (o.pass) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%d points x 20 parameter sets, max sigmoid error %.2e", points, worst_sigmoid);
        o.detail = buf;
    }
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"AC1", "worked integrate-and-fire example", 1.0, worked_example},
        {"AC2", "fire-count law on random weights", 5.0, fire_count_law},
        {"AC3", "AAS/DER match brute-force oracles", 30.0, metric_oracles},
        {"AC4", "edit distance matches full DP", 5.0, alignment_oracle},
        {"AC5", "AAS improves down the post-processing ladder", 10.0, ladder},
        {"AC6", "post-processing invariants", 30.0, postproc_invariants},
        {"AC7", "scaled CIF properties", 30.0, scaled_cif_properties},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (sec > c.budget_sec) o.fail("took " + std::to_string(sec) + " s, budget " + std::to_string(c.budget_sec) + " s");
        if (!o.pass) ++failures;
        std::printf("[%s] %s %s (%.3f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, sec, o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
