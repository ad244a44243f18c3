#include "cifts/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "cifts/error.hpp"

namespace cifts {

using nlohmann::json;

FireOptions RunConfig::fire_options() const {
    FireOptions o;
    o.threshold = threshold;
    o.tail_fire_min = tail_fire_min;
    return o;
}

PostprocParams RunConfig::postproc_params() const {
    return {theta_s, l_s, end_keep_frames};
}

ScaleParams RunConfig::scale_params() const {
    return {gamma, beta};
}

ScoreOptions RunConfig::score_options() const {
    return {pairs, der_denominator, confusion};
}

void RunConfig::validate() const {
    fire_options().validate();
    postproc_params().validate();
    scale_params().validate();
    if (weight_averaging_window && (*weight_averaging_window == 0 || *weight_averaging_window % 2 == 0)) {
        throw ParameterError("weight averaging window must be a positive odd integer");
    }
}

std::string format_diagnostic(const Diagnostic& d) {
    std::string out;
    if (d.line > 0) {
        out += "line " + std::to_string(d.line) + ": ";
    }
    if (!d.utt_id.empty()) {
        out += "utterance '" + d.utt_id + "': ";
    }
    return out + d.message;
}

namespace {

void add_read_errors(CommandResult& result, const WeightsFile& file) {
    for (const RecordError& e : file.errors) {
        result.diagnostics.push_back({0, e.utt_id, e.message});
    }
}

std::optional<std::map<std::string, TimestampTrack>> read_ctm_or_report(std::istream& in, const char* what,
                                                                         CommandResult& result) {
    try {
        return read_ctm(in);
    } catch (const FormatError& e) {
        result.diagnostics.push_back({e.line(), {}, std::string(what) + ": " + e.what()});
        return std::nullopt;
    }
}

}  // namespace

FrameWeights effective_weights(const WeightsRecord& rec, const RunConfig& config, bool scaled) {
    FrameWeights w = scaled ? apply_scaled_cif(rec.weights, config.scale_params()) : rec.weights;
    if (config.weight_averaging_window) {
        w = weaken_spikes(w, *config.weight_averaging_window);
    }
    return w;
}

TimestampTrack fire_record(const WeightsRecord& rec, const RunConfig& config, bool scaled) {
    const FrameWeights w = effective_weights(rec, config, scaled);
    const FireResult fr = integrate_and_fire(w, config.fire_options());
    const RawTimestamps raw = raw_timestamps(fr, w);
    if (rec.tokens && rec.tokens->size() != fr.token_count()) {
        throw ParameterError(std::to_string(rec.tokens->size()) + " tokens given but " +
                             std::to_string(fr.token_count()) + " fired");
    }
    return to_track(raw, rec.tokens ? std::span<const std::string>(*rec.tokens) : std::span<const std::string>());
}

CommandResult run_fire(std::istream& weights, std::ostream& ctm, const RunConfig& config) {
    config.validate();
    CommandResult result;
    const WeightsFile file = read_weights(weights);
    add_read_errors(result, file);
    std::map<std::string, TimestampTrack> tracks;
    for (const WeightsRecord& rec : file.records) {
        try {
            tracks[rec.weights.utt_id] = fire_record(rec, config, config.scaled_cif);
        } catch (const std::invalid_argument& e) {
            result.diagnostics.push_back({rec.line, rec.weights.utt_id, e.what()});
        }
    }
    write_ctm(ctm, tracks);
    return result;
}

CommandResult run_post(std::istream& weights, std::istream& raw_ctm, std::ostream& ctm,
                       const RunConfig& config) {
    config.validate();
    CommandResult result;
    const WeightsFile file = read_weights(weights);
    add_read_errors(result, file);
    const auto raw = read_ctm_or_report(raw_ctm, "raw CTM", result);
    if (!raw) {
        return result;
    }

    std::map<std::string, TimestampTrack> out;
    std::set<std::string> seen;
    for (const WeightsRecord& rec : file.records) {
        const std::string& id = rec.weights.utt_id;
        seen.insert(id);
        const auto it = raw->find(id);
        // An utterance that fired nothing has no CTM rows at all.
        const TimestampTrack input = it == raw->end() ? TimestampTrack{id, {}} : it->second;
        try {
            const FrameWeights w = effective_weights(rec, config, config.scaled_cif);
            TimestampTrack track = postprocess(input, w, config.postproc_params(), config.stages);
            if (!track.entries.empty()) {
                out[id] = std::move(track);
            }
        } catch (const std::invalid_argument& e) {
            result.diagnostics.push_back({rec.line, id, e.what()});
        }
    }
    for (const auto& [id, track] : *raw) {
        if (!seen.contains(id)) {
            result.diagnostics.push_back({0, id, "present in raw CTM but not in weights file"});
        }
    }
    write_ctm(ctm, out);
    return result;
}

Evaluation evaluate(const std::map<std::string, TimestampTrack>& ref,
                    const std::map<std::string, TimestampTrack>& hyp, const ScoreOptions& options) {
    Evaluation eval;
    std::vector<std::pair<TimestampTrack, TimestampTrack>> paired;
    for (const auto& [id, r] : ref) {
        const auto it = hyp.find(id);
        if (it == hyp.end()) {
            eval.missing_in_hyp.push_back(id);
        } else {
            paired.emplace_back(r, it->second);
        }
    }
    for (const auto& [id, h] : hyp) {
        if (!ref.contains(id)) {
            eval.missing_in_ref.push_back(id);
        }
    }
    eval.report = score_corpus(paired, options);
    return eval;
}

namespace {

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

json der_json(const DerComponents& d) {
    const auto value = d.value();
    return {
        {"der", optional_number(value)},
        {"der_percent", value ? json(*value * 100.0) : json(nullptr)},
        {"false_alarm_sec", d.false_alarm_sec},
        {"missed_sec", d.missed_sec},
        {"confusion_sec", d.confusion_sec},
        {"scored_total_sec", d.scored_total_sec},
    };
}

json edits_json(const EditCounts& c) {
    return {{"matches", c.matches},
            {"substitutions", c.substitutions},
            {"insertions", c.insertions},
            {"deletions", c.deletions}};
}

}  // namespace

json to_json(const Evaluation& eval) {
    const ScoreReport& r = eval.report;
    EditCounts total;
    json per_utt = json::array();
    for (const UttScore& u : r.per_utt) {
        total.matches += u.edits.matches;
        total.substitutions += u.edits.substitutions;
        total.insertions += u.edits.insertions;
        total.deletions += u.edits.deletions;
        json item = {{"id", u.utt_id},
                     {"aas_sec", optional_number(u.shift.value())},
                     {"k_pairs", u.shift.k_pairs},
                     {"abs_shift_sum_sec", u.shift.abs_shift_sec},
                     {"edits", edits_json(u.edits)}};
        item.update(der_json(u.der));
        per_utt.push_back(std::move(item));
    }
    json out = {{"utterances", r.per_utt.size()},
                {"aas_sec", optional_number(r.aas_sec())},
                {"k_pairs", r.shift.k_pairs},
                {"edits", edits_json(total)}};
    out.update(der_json(r.der));
    out["per_utt"] = std::move(per_utt);
    out["coverage_errors"] = {{"missing_in_hyp", eval.missing_in_hyp}, {"missing_in_ref", eval.missing_in_ref}};
    return out;
}

CommandResult run_eval(std::istream& ref_ctm, std::istream& hyp_ctm, std::ostream& report,
                       const RunConfig& config) {
    config.validate();
    CommandResult result;
    const auto ref = read_ctm_or_report(ref_ctm, "reference CTM", result);
    const auto hyp = read_ctm_or_report(hyp_ctm, "hypothesis CTM", result);
    if (!ref || !hyp) {
        return result;
    }
    const Evaluation eval = evaluate(*ref, *hyp, config.score_options());
    for (const auto& id : eval.missing_in_hyp) {
        result.diagnostics.push_back({0, id, "missing from hypothesis CTM"});
    }
    for (const auto& id : eval.missing_in_ref) {
        result.diagnostics.push_back({0, id, "missing from reference CTM"});
    }
    report << to_json(eval).dump(2) << '\n';
    return result;
}

namespace {

struct Rung {
    const char* suffix;
    const char* description;
    PostprocStages stages;
};

constexpr Rung kLadder[] = {
    {"0", "origin timestamp", {false, false, false}},
    {"1", "+begin/end silence", {true, false, false}},
    {"2", "+fire delay", {true, true, false}},
    {"3", "+silence insertion", {true, true, true}},
};

}  // namespace

std::vector<AblationRow> ablate(const std::vector<WeightsRecord>& records,
                                const std::map<std::string, TimestampTrack>& ref,
                                const RunConfig& config, CommandResult& result,
                                const std::optional<std::filesystem::path>& ctm_dir) {
    config.validate();
    std::vector<AblationRow> rows;
    if (records.empty()) {
        return rows;
    }
    const bool all_logits = std::all_of(records.begin(), records.end(),
                                        [](const WeightsRecord& r) { return r.weights.logits.has_value(); });

    std::set<std::string> in_weights;
    for (const WeightsRecord& rec : records) {
        in_weights.insert(rec.weights.utt_id);
        if (!ref.contains(rec.weights.utt_id)) {
            result.diagnostics.push_back({rec.line, rec.weights.utt_id, "missing from reference CTM"});
        }
    }
    for (const auto& [id, track] : ref) {
        if (!in_weights.contains(id)) {
            result.diagnostics.push_back({0, id, "missing from weights file"});
        }
    }

    std::vector<bool> families = {false};
    if (all_logits) {
        families.push_back(true);
    }
    for (const bool scaled : families) {
        // Fire once per family; each rung post-processes the same raw tracks.
        std::vector<std::pair<const WeightsRecord*, TimestampTrack>> raw;
        std::vector<FrameWeights> used_weights;
        for (const WeightsRecord& rec : records) {
            try {
                raw.emplace_back(&rec, fire_record(rec, config, scaled));
                used_weights.push_back(effective_weights(rec, config, scaled));
            } catch (const std::invalid_argument& e) {
                result.diagnostics.push_back({rec.line, rec.weights.utt_id,
                                              std::string(scaled ? "scaled: " : "") + e.what()});
            }
        }
        for (const Rung& rung : kLadder) {
            const std::string system = std::string(scaled ? "SCIF-" : "CIF-") + rung.suffix;
            std::map<std::string, TimestampTrack> hyp;
            std::map<std::string, TimestampTrack> scored_ref;
            for (std::size_t i = 0; i < raw.size(); ++i) {
                const std::string& id = raw[i].first->weights.utt_id;
                TimestampTrack t = postprocess(raw[i].second, used_weights[i], config.postproc_params(), rung.stages);
                if (const auto it = ref.find(id); it != ref.end()) {
                    scored_ref[id] = it->second;
                    hyp[id] = t;
                } else if (ctm_dir) {
                    hyp[id] = t;
                }
            }
            if (ctm_dir) {
                std::ofstream out(*ctm_dir / (system + ".ctm"));
                if (!out) {
                    throw std::runtime_error("cannot write " + (*ctm_dir / (system + ".ctm")).string());
                }
                write_ctm(out, hyp);
            }
            std::erase_if(hyp, [&](const auto& kv) { return !scored_ref.contains(kv.first); });
            const Evaluation eval = evaluate(scored_ref, hyp, config.score_options());
            rows.push_back({system, std::string(scaled ? "scaled " : "") + rung.description,
                            eval.report.aas_sec(), eval.report.der_value(), eval.report.shift.k_pairs});
        }
    }
    return rows;
}

void write_ablation_table(std::ostream& out, const std::vector<AblationRow>& rows) {
    out << "system\taas_sec\tder_percent\tk_pairs\tdescription\n";
    char buf[64];
    for (const AblationRow& r : rows) {
        out << r.system << '\t';
        if (r.aas_sec) {
            std::snprintf(buf, sizeof buf, "%.4f", *r.aas_sec);
            out << buf;
        } else {
            out << '-';
        }
        out << '\t';
        if (r.der) {
            std::snprintf(buf, sizeof buf, "%.2f", *r.der * 100.0);
            out << buf;
        } else {
            out << '-';
        }
        out << '\t' << r.k_pairs << '\t' << r.description << '\n';
    }
}

CommandResult run_ablate(std::istream& weights, std::istream& ref_ctm, std::ostream& table,
                         const RunConfig& config, const std::optional<std::filesystem::path>& ctm_dir) {
    config.validate();
    CommandResult result;
    const WeightsFile file = read_weights(weights);
    add_read_errors(result, file);
    const auto ref = read_ctm_or_report(ref_ctm, "reference CTM", result);
    if (!ref) {
        return result;
    }
    const auto rows = ablate(file.records, *ref, config, result, ctm_dir);
    write_ablation_table(table, rows);
    return result;
}

void run_synth(const CorpusSpec& spec, std::ostream& weights, std::ostream& ref_ctm) {
    const auto corpus = generate_corpus(spec);
    std::map<std::string, TimestampTrack> truth;
    for (const SynthUtterance& u : corpus) {
        write_weights(weights, u.weights, u.labels);
        truth[u.truth.utt_id] = u.truth;
    }
    write_ctm(ref_ctm, truth);
}

}  // namespace cifts
