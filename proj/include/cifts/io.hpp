#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cifts/track.hpp"
#include "cifts/weights.hpp"

namespace cifts {

// One line of a weights file:
//   {"id": "...", "frame_ms": 40, "alpha": [...], "logits": [...], "tokens": [...]}
// `logits` and `tokens` are optional.
struct WeightsRecord {
    FrameWeights weights;
    std::optional<std::vector<std::string>> tokens;
    std::size_t line = 0;
};

struct RecordError {
    std::size_t line = 0;
    std::string utt_id;  // empty when the id itself could not be read
    std::string message;
};

struct WeightsFile {
    std::vector<WeightsRecord> records;
    std::vector<RecordError> errors;
};

// Blank lines are skipped. A malformed line becomes an entry in `errors`;
// the remaining lines are still read.
WeightsFile read_weights(std::istream& in);
WeightsRecord parse_weights_line(const std::string& line, std::size_t line_no);
void write_weights(std::ostream& out, const FrameWeights& w,
                   const std::optional<std::vector<std::string>>& tokens = std::nullopt);

// CTM rows: `utt_id 1 start_sec dur_sec token`, times with 3 decimals, silence
// as `<sil>`. Times are rounded to whole milliseconds on write.
void write_ctm(std::ostream& out, const TimestampTrack& track);
// Writes tracks sorted by utterance id.
void write_ctm(std::ostream& out, const std::map<std::string, TimestampTrack>& tracks);

// Throws FormatError (with line number) on a malformed row. Rows of each
// utterance are sorted by start time.
std::map<std::string, TimestampTrack> read_ctm(std::istream& in);

}  // namespace cifts
