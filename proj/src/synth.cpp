#include "cifts/synth.hpp"

#include <array>
#include <cstdio>

#include "cifts/error.hpp"

namespace cifts {

namespace {

// splitmix64: small, portable and fully specified, so corpora are identical
// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi].
    std::size_t between(std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(next() % (hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

constexpr std::array<const char*, 16> kSyllables = {
    "ni", "hao", "shi", "jie", "zhong", "guo", "ren", "min",
    "da", "jia", "xue", "sheng", "yu", "yin", "shu", "ju",
};

}  // namespace

void SynthSpec::validate() const {
    if (!(frame_ms > 0.0)) throw SpecError("frame_ms must be positive");
    if (token_dur_min < 1 || token_dur_min > token_dur_max) throw SpecError("bad token duration range");
    if (onset_spread_frames < 1) throw SpecError("onset_spread_frames must be at least 1");
    if (lead_in_frames >= std::min(onset_spread_frames, token_dur_min)) {
        throw SpecError("lead_in_frames must leave at least one burst frame in every token");
    }
    if (!(noise_level >= 0.0)) throw SpecError("noise_level must be non-negative");
    if (!(gap_prob >= 0.0 && gap_prob <= 1.0)) throw SpecError("gap_prob must lie in [0, 1]");
    if (gap_min > gap_max) throw SpecError("bad gap range");
    if (n_tokens == 0 && leading_sil_frames + trailing_sil_frames == 0) {
        throw SpecError("an utterance without tokens needs at least one silence frame");
    }
}

SynthUtterance generate(const SynthSpec& spec, const std::string& utt_id) {
    spec.validate();
    Rng rng(spec.rng_seed);
    const double ms = spec.frame_ms;

    SynthUtterance u;
    u.weights.utt_id = utt_id;
    u.weights.frame_ms = ms;
    u.truth.utt_id = utt_id;
    auto& alpha = u.weights.alpha;

    auto add_silence = [&](std::size_t frames) {
        if (frames == 0) return;
        const double start = static_cast<double>(alpha.size()) * ms;
        alpha.insert(alpha.end(), frames, spec.noise_level);
        u.truth.entries.push_back(make_silence(start, static_cast<double>(alpha.size()) * ms));
    };

    add_silence(spec.leading_sil_frames);
    // Floor mass accumulated since the previous burst ended.
    double floor_mass = static_cast<double>(spec.leading_sil_frames) * spec.noise_level;

    for (std::size_t k = 0; k < spec.n_tokens; ++k) {
        const std::size_t dur = rng.between(spec.token_dur_min, spec.token_dur_max);
        const std::size_t spread = std::min(spec.onset_spread_frames, dur);
        const std::size_t burst = spread - spec.lead_in_frames;
        const std::size_t onset = alpha.size();

        alpha.insert(alpha.end(), spec.lead_in_frames, spec.noise_level);
        floor_mass += static_cast<double>(spec.lead_in_frames) * spec.noise_level;
        const double budget = 1.0 - floor_mass;
        if (!(budget > 0.0)) {
            throw SpecError("floor weight before token " + std::to_string(k) + " of '" + utt_id +
                            "' already reaches the fire threshold");
        }
        std::vector<double> shares(burst);
        double share_total = 0.0;
        for (double& s : shares) {
            s = 0.5 + rng.unit();
            share_total += s;
        }
        for (double s : shares) {
            alpha.push_back(budget * s / share_total);
        }
        const std::size_t tail = dur - spread;
        alpha.insert(alpha.end(), tail, spec.noise_level);
        floor_mass = static_cast<double>(tail) * spec.noise_level;

        std::string label = kSyllables[rng.next() % kSyllables.size()];
        u.truth.entries.push_back({label, static_cast<double>(onset) * ms, static_cast<double>(alpha.size()) * ms, false});
        u.labels.push_back(std::move(label));

        if (k + 1 < spec.n_tokens && spec.gap_prob > 0.0 && rng.unit() < spec.gap_prob) {
            const std::size_t gap = rng.between(spec.gap_min, spec.gap_max);
            add_silence(gap);
            floor_mass += static_cast<double>(gap) * spec.noise_level;
        }
    }

    // The trailing floor mass stays in the accumulator and must not fire.
    const double tail_mass = floor_mass + static_cast<double>(spec.trailing_sil_frames) * spec.noise_level;
    if (spec.n_tokens > 0 && tail_mass >= 1.0) {
        throw SpecError("trailing floor weight of '" + utt_id + "' reaches the fire threshold");
    }
    if (spec.n_tokens == 0) {
        // All frames are floor; ground truth is one silence over everything.
        alpha.assign(spec.leading_sil_frames + spec.trailing_sil_frames, spec.noise_level);
        u.truth.entries = {make_silence(0.0, static_cast<double>(alpha.size()) * ms)};
    } else {
        add_silence(spec.trailing_sil_frames);
    }

    if (spec.max_frames > 0 && alpha.size() > spec.max_frames) {
        throw SpecError("'" + utt_id + "' needs " + std::to_string(alpha.size()) + " frames, limit is " +
                        std::to_string(spec.max_frames));
    }
    return u;
}

std::vector<SynthUtterance> generate_corpus(const CorpusSpec& spec) {
    if (spec.tokens_min > spec.tokens_max || spec.sil_min > spec.sil_max) {
        throw SpecError("bad corpus ranges");
    }
    Rng seeds(spec.base.rng_seed);
    std::vector<SynthUtterance> corpus;
    corpus.reserve(spec.n_utts);
    for (std::size_t i = 0; i < spec.n_utts; ++i) {
        Rng draw(seeds.next());
        SynthSpec s = spec.base;
        s.rng_seed = draw.next();
        s.n_tokens = draw.between(spec.tokens_min, spec.tokens_max);
        s.leading_sil_frames = draw.between(spec.sil_min, spec.sil_max);
        s.trailing_sil_frames = draw.between(spec.sil_min, spec.sil_max);
        char id[32];
        std::snprintf(id, sizeof id, "synth-%04zu", i);
        corpus.push_back(generate(s, id));
    }
    return corpus;
}

CorpusSpec ladder_corpus_spec() {
    CorpusSpec c;
    c.base.rng_seed = 42;
    c.base.onset_spread_frames = 4;
    c.base.lead_in_frames = 1;
    c.base.token_dur_min = 5;
    c.base.token_dur_max = 6;
    c.base.noise_level = 0.01;
    c.base.gap_prob = 0.3;
    c.base.gap_min = 3;
    c.base.gap_max = 8;
    c.base.frame_ms = 40.0;
    c.n_utts = 100;
    c.tokens_min = 3;
    c.tokens_max = 12;
    c.sil_min = 2;
    c.sil_max = 10;
    return c;
}

}  // namespace cifts
