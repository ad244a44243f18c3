#include "cifts/align.hpp"

#include <algorithm>

namespace cifts {

std::vector<std::size_t> TokenPairing::ref_partners(std::size_t ref_len) const {
    std::vector<std::size_t> out(ref_len, kNoPartner);
    for (const auto& [r, h] : pairs) {
        if (r < ref_len) {
            out[r] = h;
        }
    }
    return out;
}

TokenPairing align_tokens(std::span<const std::string> ref, std::span<const std::string> hyp,
                          PairMode mode) {
    const std::size_t n = ref.size();
    const std::size_t m = hyp.size();
    const std::size_t stride = m + 1;
    std::vector<std::size_t> cost((n + 1) * stride);
    auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return cost[i * stride + j]; };

    for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
    for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
            at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
        }
    }

    TokenPairing result;
    result.edit_distance = at(n, m);
    std::size_t i = n;
    std::size_t j = m;
    while (i > 0 || j > 0) {
        const std::size_t here = at(i, j);
        if (i > 0 && j > 0) {
            const bool same = ref[i - 1] == hyp[j - 1];
            if (same && here == at(i - 1, j - 1)) {
                ++result.counts.matches;
                result.pairs.emplace_back(i - 1, j - 1);
                --i;
                --j;
                continue;
            }
            if (!same && here == at(i - 1, j - 1) + 1) {
                ++result.counts.substitutions;
                if (mode == PairMode::match_and_sub) {
                    result.pairs.emplace_back(i - 1, j - 1);
                }
                --i;
                --j;
                continue;
            }
        }
        if (i > 0 && here == at(i - 1, j) + 1) {
            ++result.counts.deletions;
            --i;
        } else {
            ++result.counts.insertions;
            --j;
        }
    }
    std::reverse(result.pairs.begin(), result.pairs.end());
    return result;
}

}  // namespace cifts
