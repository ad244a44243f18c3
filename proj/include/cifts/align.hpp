#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cifts {

enum class PairMode {
    match_and_sub,  // substituted positions are paired too
    match_only,
};

struct EditCounts {
    std::size_t matches = 0;
    std::size_t substitutions = 0;
    std::size_t insertions = 0;  // hyp tokens with no ref partner
    std::size_t deletions = 0;   // ref tokens with no hyp partner

    bool operator==(const EditCounts&) const = default;
};

struct TokenPairing {
    // (ref_index, hyp_index), strictly increasing in both coordinates.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t edit_distance = 0;
    EditCounts counts;

    // Pairing partner of each ref token, or npos.
    std::vector<std::size_t> ref_partners(std::size_t ref_len) const;
};

inline constexpr std::size_t kNoPartner = static_cast<std::size_t>(-1);

// Unit-cost Levenshtein alignment. The backtrace prefers, at every cell,
// match > substitution > deletion > insertion among the optimal moves.
TokenPairing align_tokens(std::span<const std::string> ref, std::span<const std::string> hyp,
                          PairMode mode = PairMode::match_and_sub);

}  // namespace cifts
