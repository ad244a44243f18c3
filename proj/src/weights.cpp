#include "cifts/weights.hpp"

#include <cmath>
#include <numeric>

#include "cifts/error.hpp"

namespace cifts {

namespace {

double sigmoid(double x) {
    // Split on sign so exp never overflows.
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

double FrameWeights::total() const noexcept {
    return std::accumulate(alpha.begin(), alpha.end(), 0.0);
}

void FrameWeights::validate() const {
    if (!(frame_ms > 0.0) || !std::isfinite(frame_ms)) {
        throw ParameterError("utterance '" + utt_id + "': frame_ms must be positive");
    }
    if (alpha.empty()) {
        throw ParameterError("utterance '" + utt_id + "': alpha is empty");
    }
    for (std::size_t t = 0; t < alpha.size(); ++t) {
        if (!(alpha[t] >= 0.0) || !std::isfinite(alpha[t])) {
            throw ParameterError("utterance '" + utt_id + "': alpha[" + std::to_string(t) +
                                 "] is negative or not finite");
        }
    }
    if (logits && logits->size() != alpha.size()) {
        throw ParameterError("utterance '" + utt_id + "': logits length " +
                             std::to_string(logits->size()) + " != alpha length " +
                             std::to_string(alpha.size()));
    }
}

void ScaleParams::validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw ParameterError("gamma must lie in (0, 1]");
    }
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw ParameterError("beta must lie in [0, 1)");
    }
}

std::vector<double> scaled_cif(std::span<const double> logits, const ScaleParams& params) {
    params.validate();
    std::vector<double> out(logits.size());
    for (std::size_t t = 0; t < logits.size(); ++t) {
        out[t] = params.gamma * std::max(0.0, sigmoid(logits[t]) - params.beta);
    }
    return out;
}

FrameWeights apply_scaled_cif(const FrameWeights& w, const ScaleParams& params) {
    if (!w.logits) {
        throw ParameterError("utterance '" + w.utt_id +
                             "': scaled CIF needs logits but the record only has alpha");
    }
    FrameWeights out = w;
    out.alpha = scaled_cif(*w.logits, params);
    return out;
}

FrameWeights weaken_spikes(const FrameWeights& w, std::size_t window) {
    w.validate();
    const std::size_t n = w.frames();
    if (window == 0 || window % 2 == 0 || window > n) {
        throw ParameterError("smoothing window must be odd and within [1, " + std::to_string(n) +
                             "], got " + std::to_string(window));
    }
    FrameWeights out = w;
    if (window == 1) {
        return out;
    }

    // Prefix sums give every truncated window mean in O(1).
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        prefix[t + 1] = prefix[t] + w.alpha[t];
    }
    const std::size_t half = window / 2;
    double smoothed_total = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t lo = t >= half ? t - half : 0;
        const std::size_t hi = std::min(n, t + half + 1);
        out.alpha[t] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
        smoothed_total += out.alpha[t];
    }

    const double original_total = prefix[n];
    if (smoothed_total > 0.0) {
        const double scale = original_total / smoothed_total;
        for (double& a : out.alpha) {
            a *= scale;
        }
    }
    return out;
}

}  // namespace cifts
