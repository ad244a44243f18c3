#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cifts/fire.hpp"
#include "cifts/io.hpp"
#include "cifts/metrics.hpp"
#include "cifts/postproc.hpp"
#include "cifts/synth.hpp"
#include "cifts/weights.hpp"

namespace cifts {

struct RunConfig {
    double threshold = 1.0;
    double theta_s = 0.05;
    std::size_t l_s = 3;
    std::size_t end_keep_frames = 3;
    double gamma = 0.8;
    double beta = 0.05;
    // Recompute alpha from logits with the scaled transform before firing.
    bool scaled_cif = false;
    PostprocStages stages;
    DerDenominator der_denominator = DerDenominator::ref_speech;
    PairMode pairs = PairMode::match_and_sub;
    ConfusionMode confusion = ConfusionMode::pairing;
    std::optional<double> tail_fire_min;
    // Experimental spike weakening window (odd); unset disables it.
    std::optional<std::size_t> weight_averaging_window;

    FireOptions fire_options() const;
    PostprocParams postproc_params() const;
    ScaleParams scale_params() const;
    ScoreOptions score_options() const;
    void validate() const;
};

struct Diagnostic {
    std::size_t line = 0;
    std::string utt_id;
    std::string message;
};

std::string format_diagnostic(const Diagnostic& d);

struct CommandResult {
    std::vector<Diagnostic> diagnostics;
    bool ok() const noexcept { return diagnostics.empty(); }
};

// Weights the pipeline actually fires on: the record's alpha, or the scaled
// transform of its logits, optionally spike-weakened.
FrameWeights effective_weights(const WeightsRecord& rec, const RunConfig& config, bool scaled);

// Raw CIF track of one record: optional transforms, integrate-and-fire, raw
// intervals, labels from the record (positional when absent). Throws
// ParameterError when the record cannot be processed.
TimestampTrack fire_record(const WeightsRecord& rec, const RunConfig& config, bool scaled);

// weights file -> raw CTM.
CommandResult run_fire(std::istream& weights, std::ostream& ctm, const RunConfig& config);

// weights file + raw CTM -> post-processed CTM.
CommandResult run_post(std::istream& weights, std::istream& raw_ctm, std::ostream& ctm,
                       const RunConfig& config);

struct Evaluation {
    ScoreReport report;
    std::vector<std::string> missing_in_hyp;
    std::vector<std::string> missing_in_ref;
};

Evaluation evaluate(const std::map<std::string, TimestampTrack>& ref,
                    const std::map<std::string, TimestampTrack>& hyp, const ScoreOptions& options);
nlohmann::json to_json(const Evaluation& eval);

// ref CTM + hyp CTM -> JSON score report. Coverage errors are reported in
// the JSON and as diagnostics.
CommandResult run_eval(std::istream& ref_ctm, std::istream& hyp_ctm, std::ostream& report,
                       const RunConfig& config);

struct AblationRow {
    std::string system;
    std::string description;
    std::optional<double> aas_sec;
    std::optional<double> der;
    std::size_t k_pairs = 0;
};

// The ladder CIF-0..CIF-3 (raw, +boundary silence, +fire delay, +silence
// insertion), repeated as SCIF-0..SCIF-3 on scaled weights when every record
// carries logits. When `ctm_dir` is set each system's CTM is written there as
// <system>.ctm.
CommandResult run_ablate(std::istream& weights, std::istream& ref_ctm, std::ostream& table,
                         const RunConfig& config,
                         const std::optional<std::filesystem::path>& ctm_dir = std::nullopt);

std::vector<AblationRow> ablate(const std::vector<WeightsRecord>& records,
                                const std::map<std::string, TimestampTrack>& ref,
                                const RunConfig& config, CommandResult& result,
                                const std::optional<std::filesystem::path>& ctm_dir = std::nullopt);

void write_ablation_table(std::ostream& out, const std::vector<AblationRow>& rows);

// Synthetic corpus -> weights file (with tokens) + reference CTM.
void run_synth(const CorpusSpec& spec, std::ostream& weights, std::ostream& ref_ctm);

}  // namespace cifts
