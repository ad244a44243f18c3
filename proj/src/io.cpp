#include "cifts/io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cifts/error.hpp"

namespace cifts {

using nlohmann::json;

namespace {

std::vector<double> number_array(const json& j, const char* key, std::size_t line_no) {
    if (!j.is_array()) {
        throw FormatError(std::string("'") + key + "' must be an array of numbers", line_no);
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const json& v : j) {
        if (!v.is_number()) {
            throw FormatError(std::string("'") + key + "' must be an array of numbers", line_no);
        }
        out.push_back(v.get<double>());
    }
    return out;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

long long to_millis(double ms) {
    return std::llround(ms);
}

void put_seconds(std::ostream& out, long long millis) {
    const long long whole = millis / 1000;
    const long long frac = millis % 1000;
    out << whole << '.';
    if (frac < 100) out << '0';
    if (frac < 10) out << '0';
    out << frac;
}

}  // namespace

WeightsRecord parse_weights_line(const std::string& line, std::size_t line_no) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!j.is_object()) {
        throw FormatError("record must be a JSON object", line_no);
    }
    WeightsRecord rec;
    rec.line = line_no;
    if (!j.contains("id") || !j["id"].is_string()) {
        throw FormatError("missing string field 'id'", line_no);
    }
    rec.weights.utt_id = j["id"].get<std::string>();
    if (!j.contains("frame_ms") || !j["frame_ms"].is_number()) {
        throw FormatError("missing numeric field 'frame_ms'", line_no);
    }
    rec.weights.frame_ms = j["frame_ms"].get<double>();
    if (!j.contains("alpha")) {
        throw FormatError("missing field 'alpha'", line_no);
    }
    rec.weights.alpha = number_array(j["alpha"], "alpha", line_no);
    if (j.contains("logits") && !j["logits"].is_null()) {
        rec.weights.logits = number_array(j["logits"], "logits", line_no);
    }
    if (j.contains("tokens") && !j["tokens"].is_null()) {
        if (!j["tokens"].is_array()) {
            throw FormatError("'tokens' must be an array of strings", line_no);
        }
        std::vector<std::string> tokens;
        for (const json& t : j["tokens"]) {
            if (!t.is_string()) {
                throw FormatError("'tokens' must be an array of strings", line_no);
            }
            tokens.push_back(t.get<std::string>());
        }
        rec.tokens = std::move(tokens);
    }
    try {
        rec.weights.validate();
    } catch (const ParameterError& e) {
        throw FormatError(e.what(), line_no);
    }
    return rec;
}

WeightsFile read_weights(std::istream& in) {
    WeightsFile file;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        try {
            file.records.push_back(parse_weights_line(line, line_no));
        } catch (const FormatError& e) {
            RecordError err{line_no, {}, e.what()};
            // Best effort to name the record in the diagnostic.
            const json j = json::parse(line, nullptr, false);
            if (j.is_object() && j.contains("id") && j["id"].is_string()) {
                err.utt_id = j["id"].get<std::string>();
            }
            file.errors.push_back(std::move(err));
        }
    }
    return file;
}

void write_weights(std::ostream& out, const FrameWeights& w,
                   const std::optional<std::vector<std::string>>& tokens) {
    json j;
    j["id"] = w.utt_id;
    j["frame_ms"] = w.frame_ms;
    j["alpha"] = w.alpha;
    if (w.logits) {
        j["logits"] = *w.logits;
    }
    if (tokens) {
        j["tokens"] = *tokens;
    }
    out << j.dump() << '\n';
}

void write_ctm(std::ostream& out, const TimestampTrack& track) {
    for (const TrackEntry& e : track.entries) {
        const long long start = to_millis(e.start_ms);
        const long long dur = to_millis(e.end_ms) - start;
        if (dur <= 0) {
            throw ParameterError("utterance '" + track.utt_id + "': entry '" + e.label +
                                 "' is shorter than the 1 ms CTM resolution");
        }
        const std::string& label = e.silence ? std::string(kSilenceLabel) : e.label;
        if (label.empty() || std::any_of(label.begin(), label.end(), [](unsigned char c) { return std::isspace(c); })) {
            throw ParameterError("utterance '" + track.utt_id + "': token label '" + label +
                                 "' is empty or contains whitespace");
        }
        out << track.utt_id << " 1 ";
        put_seconds(out, start);
        out << ' ';
        put_seconds(out, dur);
        out << ' ' << label << '\n';
    }
}

void write_ctm(std::ostream& out, const std::map<std::string, TimestampTrack>& tracks) {
    for (const auto& [id, track] : tracks) {
        write_ctm(out, track);
    }
}

std::map<std::string, TimestampTrack> read_ctm(std::istream& in) {
    std::map<std::string, TimestampTrack> tracks;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line) || line.front() == ';' || line.front() == '#') {
            continue;
        }
        std::istringstream row(line);
        std::string utt, channel, label, extra;
        double start_sec = 0.0;
        double dur_sec = 0.0;
        if (!(row >> utt >> channel >> start_sec >> dur_sec >> label)) {
            throw FormatError("expected 'utt_id channel start dur token'", line_no);
        }
        // Trailing confidence column is tolerated.
        if (row >> extra && (row >> extra)) {
            throw FormatError("too many columns", line_no);
        }
        if (!(dur_sec > 0.0) || start_sec < 0.0) {
            throw FormatError("start must be non-negative and duration positive", line_no);
        }
        const double start_ms = std::round(start_sec * 1e6) / 1e3;
        const double end_ms = start_ms + std::round(dur_sec * 1e6) / 1e3;
        TimestampTrack& track = tracks[utt];
        track.utt_id = utt;
        const bool sil = label == kSilenceLabel;
        track.entries.push_back({label, start_ms, end_ms, sil});
    }
    for (auto& [id, track] : tracks) {
        std::stable_sort(track.entries.begin(), track.entries.end(),
                         [](const TrackEntry& a, const TrackEntry& b) { return a.start_ms < b.start_ms; });
        try {
            track.validate();
        } catch (const ParameterError& e) {
            throw FormatError(e.what());
        }
    }
    return tracks;
}

}  // namespace cifts
