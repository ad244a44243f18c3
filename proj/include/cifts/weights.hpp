#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cifts {

// Per-frame CIF weights of one utterance. `logits` holds the pre-sigmoid
// activations when the producer kept them; the scaled transform needs them.
struct FrameWeights {
    std::string utt_id;
    double frame_ms = 40.0;
    std::vector<double> alpha;
    std::optional<std::vector<double>> logits;

    std::size_t frames() const noexcept { return alpha.size(); }
    double duration_ms() const noexcept { return static_cast<double>(alpha.size()) * frame_ms; }
    double total() const noexcept;

    // Throws ParameterError when an invariant does not hold.
    void validate() const;
};

struct ScaleParams {
    double gamma = 0.8;
    double beta = 0.05;

    void validate() const;
};

// gamma * max(0, sigmoid(x) - beta), elementwise.
std::vector<double> scaled_cif(std::span<const double> logits, const ScaleParams& params);

// Same weights with alpha recomputed from the stored logits.
// Throws ParameterError when `w` carries no logits.
FrameWeights apply_scaled_cif(const FrameWeights& w, const ScaleParams& params);

// Experimental spike weakening: centered moving average of odd width
// (edge windows truncated), globally rescaled to the original total mass.
FrameWeights weaken_spikes(const FrameWeights& w, std::size_t window);

}  // namespace cifts
