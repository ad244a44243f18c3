// cifts: CIF timestamp toolkit.
//
//   cifts fire   WEIGHTS [-o raw.ctm]
//   cifts post   WEIGHTS RAW_CTM [-o post.ctm]
//   cifts eval   REF_CTM HYP_CTM [-o report.json]
//   cifts synth  [-o weights.jsonl] [--ref ref.ctm]
//   cifts ablate WEIGHTS REF_CTM [--ctm-dir DIR]
//
// Exit status is 0 only when every record was processed.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>

#include "cifts/error.hpp"
#include "cifts/pipeline.hpp"

namespace {

using namespace cifts;

class Input {
public:
    explicit Input(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ifstream>(path);
            if (!*file_) {
                throw std::runtime_error("cannot open " + path);
            }
        }
    }
    std::istream& get() { return file_ ? *file_ : std::cin; }

private:
    std::unique_ptr<std::ifstream> file_;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw std::runtime_error("cannot write " + path);
            }
        }
    }
    std::ostream& get() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

int report(const CommandResult& result) {
    for (const Diagnostic& d : result.diagnostics) {
        std::cerr << "cifts: " << format_diagnostic(d) << '\n';
    }
    return result.ok() ? 0 : 1;
}

void add_fire_options(CLI::App& cmd, RunConfig& config, std::size_t& window) {
    cmd.add_option("--threshold", config.threshold, "Fire threshold")->capture_default_str();
    cmd.add_flag("--scaled-cif", config.scaled_cif, "Recompute alpha from logits: gamma*relu(sigmoid(x)-beta)");
    cmd.add_option("--gamma", config.gamma, "Scaled-CIF scale")->capture_default_str();
    cmd.add_option("--beta", config.beta, "Scaled-CIF offset")->capture_default_str();
    cmd.add_option("--tail-fire-min", config.tail_fire_min,
                   "Emit a final token when the leftover tail mass is at least this");
    cmd.add_option("--experimental-weight-averaging", window,
                   "Weaken weight spikes with a centered moving average of this odd width");
}

void add_postproc_options(CLI::App& cmd, RunConfig& config, bool with_toggles) {
    cmd.add_option("--theta-s", config.theta_s, "Low-weight frame threshold")->capture_default_str();
    cmd.add_option("--l-s", config.l_s, "Longest low-weight run absorbed by fire delay")->capture_default_str();
    cmd.add_option("--end-keep-frames", config.end_keep_frames,
                   "Frames kept after the last non-low frame")->capture_default_str();
    if (with_toggles) {
        cmd.add_flag("--boundary-silence,!--no-boundary-silence", config.stages.boundary_silence,
                     "Begin/end silence trimming");
        cmd.add_flag("--fire-delay,!--no-fire-delay", config.stages.fire_delay, "Fire delay");
        cmd.add_flag("--silence-insertion,!--no-silence-insertion", config.stages.silence_insertion,
                     "Silence insertion");
    }
}

void add_score_options(CLI::App& cmd, RunConfig& config) {
    const std::map<std::string, DerDenominator> denominators = {
        {"ref_speech", DerDenominator::ref_speech}, {"utt_span", DerDenominator::utt_span}};
    const std::map<std::string, PairMode> pairs = {
        {"match_and_sub", PairMode::match_and_sub}, {"match_only", PairMode::match_only}};
    const std::map<std::string, ConfusionMode> confusion = {
        {"pairing", ConfusionMode::pairing}, {"label_only", ConfusionMode::label_only}};
    cmd.add_option("--der-denominator", config.der_denominator, "ref_speech | utt_span")
        ->transform(CLI::CheckedTransformer(denominators, CLI::ignore_case));
    cmd.add_option("--pairs", config.pairs, "match_and_sub | match_only")
        ->transform(CLI::CheckedTransformer(pairs, CLI::ignore_case));
    cmd.add_option("--confusion", config.confusion, "pairing | label_only")
        ->transform(CLI::CheckedTransformer(confusion, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CIF timestamp prediction, post-processing and scoring"};
    app.set_config("--config", "", "Read options from a TOML/INI file");
    app.require_subcommand(1);

    RunConfig config;
    std::size_t window = 0;
    std::string weights_path, raw_path, ref_path, hyp_path, out_path, ctm_dir;

    auto* fire = app.add_subcommand("fire", "Integrate-and-fire weights into raw token timestamps (CTM)");
    fire->add_option("weights", weights_path, "Weights file (JSON lines), - for stdin")->required();
    fire->add_option("-o,--output", out_path, "Output CTM (default stdout)");
    add_fire_options(*fire, config, window);

    auto* post = app.add_subcommand("post", "Post-process raw CTM timestamps");
    post->add_option("weights", weights_path, "Weights file the raw CTM was fired from")->required();
    post->add_option("raw_ctm", raw_path, "Raw CTM from 'fire'")->required();
    post->add_option("-o,--output", out_path, "Output CTM (default stdout)");
    post->add_flag("--scaled-cif", config.scaled_cif, "Classify low-weight frames on scaled weights");
    post->add_option("--gamma", config.gamma)->capture_default_str();
    post->add_option("--beta", config.beta)->capture_default_str();
    post->add_option("--experimental-weight-averaging", window);
    add_postproc_options(*post, config, true);

    auto* eval = app.add_subcommand("eval", "Score a hypothesis CTM against a reference CTM");
    eval->add_option("ref_ctm", ref_path, "Reference CTM")->required();
    eval->add_option("hyp_ctm", hyp_path, "Hypothesis CTM")->required();
    eval->add_option("-o,--output", out_path, "Output JSON report (default stdout)");
    add_score_options(*eval, config);

    CorpusSpec corpus = ladder_corpus_spec();
    auto* synth = app.add_subcommand("synth", "Generate a synthetic weights corpus with reference timestamps");
    synth->add_option("-o,--output", out_path, "Output weights file (default stdout)");
    synth->add_option("--ref", ref_path, "Output reference CTM")->required();
    synth->add_option("--seed", corpus.base.rng_seed)->capture_default_str();
    synth->add_option("--utterances", corpus.n_utts)->capture_default_str();
    synth->add_option("--tokens-min", corpus.tokens_min)->capture_default_str();
    synth->add_option("--tokens-max", corpus.tokens_max)->capture_default_str();
    synth->add_option("--sil-min", corpus.sil_min)->capture_default_str();
    synth->add_option("--sil-max", corpus.sil_max)->capture_default_str();
    synth->add_option("--token-dur-min", corpus.base.token_dur_min)->capture_default_str();
    synth->add_option("--token-dur-max", corpus.base.token_dur_max)->capture_default_str();
    synth->add_option("--onset-spread", corpus.base.onset_spread_frames)->capture_default_str();
    synth->add_option("--lead-in", corpus.base.lead_in_frames)->capture_default_str();
    synth->add_option("--noise", corpus.base.noise_level)->capture_default_str();
    synth->add_option("--gap-prob", corpus.base.gap_prob)->capture_default_str();
    synth->add_option("--gap-min", corpus.base.gap_min)->capture_default_str();
    synth->add_option("--gap-max", corpus.base.gap_max)->capture_default_str();
    synth->add_option("--frame-ms", corpus.base.frame_ms)->capture_default_str();

    auto* ablate = app.add_subcommand("ablate", "Score the post-processing ladder against a reference");
    ablate->add_option("weights", weights_path, "Weights file")->required();
    ablate->add_option("ref_ctm", ref_path, "Reference CTM")->required();
    ablate->add_option("-o,--output", out_path, "Output table (default stdout)");
    ablate->add_option("--ctm-dir", ctm_dir, "Also write <system>.ctm for every rung here");
    add_fire_options(*ablate, config, window);
    add_postproc_options(*ablate, config, false);
    add_score_options(*ablate, config);

    CLI11_PARSE(app, argc, argv);
    if (window > 0) {
        config.weight_averaging_window = window;
    }

    try {
        if (*fire) {
            Input in(weights_path);
            Output out(out_path);
            return report(run_fire(in.get(), out.get(), config));
        }
        if (*post) {
            Input weights(weights_path);
            Input raw(raw_path);
            Output out(out_path);
            return report(run_post(weights.get(), raw.get(), out.get(), config));
        }
        if (*eval) {
            Input ref(ref_path);
            Input hyp(hyp_path);
            Output out(out_path);
            return report(run_eval(ref.get(), hyp.get(), out.get(), config));
        }
        if (*synth) {
            Output weights(out_path);
            Output ref(ref_path);
            run_synth(corpus, weights.get(), ref.get());
            return 0;
        }
        if (*ablate) {
            Input weights(weights_path);
            Input ref(ref_path);
            Output out(out_path);
            std::optional<std::filesystem::path> dir;
            if (!ctm_dir.empty()) {
                std::filesystem::create_directories(ctm_dir);
                dir = ctm_dir;
            }
            return report(run_ablate(weights.get(), ref.get(), out.get(), config, dir));
        }
    } catch (const std::exception& e) {
        std::cerr << "cifts: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
