#include "pipeline_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sweetdeep::cli {

using nlohmann::json;

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void parse_wave(const json& j, signalgen::WaveParams& w) {
    get_if(j, "amplitude_mv", w.amplitude_mv);
    get_if(j, "center_s", w.center_s);
    get_if(j, "width_s", w.width_s);
}

void parse_beat(const json& j, signalgen::BeatTemplateParams& b) {
    if (j.contains("p")) parse_wave(j.at("p"), b.p);
    if (j.contains("q")) parse_wave(j.at("q"), b.q);
    if (j.contains("r")) parse_wave(j.at("r"), b.r);
    if (j.contains("s")) parse_wave(j.at("s"), b.s);
    if (j.contains("t")) parse_wave(j.at("t"), b.t);
    get_if(j, "hr_mean_bpm", b.hr_mean_bpm);
    get_if(j, "rr_std_s", b.rr_std_s);
    get_if(j, "qt_base_s", b.qt_base_s);
    get_if(j, "wander_amp_mv", b.wander_amp_mv);
    get_if(j, "wander_freq_hz", b.wander_freq_hz);
    get_if(j, "noise_std_mv", b.noise_std_mv);
    get_if(j, "spike_rate_per_min", b.spike_rate_per_min);
    get_if(j, "spike_amp_mv", b.spike_amp_mv);
}

void parse_group(const json& j, signalgen::GroupModulation& g) {
    get_if(j, "patient_sd", g.patient_sd);
    get_if(j, "circadian_amp", g.circadian_amp);
    get_if(j, "circadian_phase", g.circadian_phase);
}

void parse_cohort(const json& j, signalgen::CohortSpec& c) {
    get_if(j, "nd_count", c.nd_count);
    get_if(j, "t2d_count", c.t2d_count);
    get_if(j, "pd_count", c.pd_count);
    get_if(j, "days", c.days);
    get_if(j, "slots_per_day", c.slots_per_day);
    get_if(j, "instances_per_patient_mean", c.instances_per_patient_mean);
    get_if(j, "jitter_minutes", c.jitter_minutes);
    get_if(j, "irregular_time_frac", c.irregular_time_frac);
    get_if(j, "separation", c.separation);
    get_if(j, "seed", c.seed);
    if (j.contains("fh_probs_nd")) {
        auto v = j.at("fh_probs_nd").get<std::vector<double>>();
        if (v.size() != 3) throw FormatError("config: fh_probs_nd needs 3 entries");
        std::copy(v.begin(), v.end(), c.fh_probs_nd.begin());
    }
    if (j.contains("fh_probs_t2d")) {
        auto v = j.at("fh_probs_t2d").get<std::vector<double>>();
        if (v.size() != 3) throw FormatError("config: fh_probs_t2d needs 3 entries");
        std::copy(v.begin(), v.end(), c.fh_probs_t2d.begin());
    }
    if (j.contains("continuous")) {
        const auto& arr = j.at("continuous");
        if (arr.size() != c.continuous.size())
            throw FormatError("config: continuous must list all 24 feature distributions");
        for (std::size_t i = 0; i < c.continuous.size(); i++) {
            get_if(arr[i], "mean", c.continuous[i].mean);
            get_if(arr[i], "sd", c.continuous[i].sd);
            get_if(arr[i], "t2d_shift_sd", c.continuous[i].t2d_shift_sd);
            get_if(arr[i], "floor", c.continuous[i].floor);
        }
    }
    if (j.contains("ecg_mod")) parse_group(j.at("ecg_mod"), c.ecg_mod);
    if (j.contains("ppg_mod")) parse_group(j.at("ppg_mod"), c.ppg_mod);
    if (j.contains("bia_mod")) parse_group(j.at("bia_mod"), c.bia_mod);
    if (j.contains("age_mod")) parse_group(j.at("age_mod"), c.age_mod);
}

void parse_qc(const json& j, ecg::QcOptions& q) {
    if (j.contains("filter")) {
        get_if(j.at("filter"), "low_hz", q.filter.low_hz);
        get_if(j.at("filter"), "high_hz", q.filter.high_hz);
        get_if(j.at("filter"), "hp_order", q.filter.hp_order);
        get_if(j.at("filter"), "lp_order", q.filter.lp_order);
    }
    get_if(j, "spike_amp_factor", q.spike_amp_factor);
    get_if(j, "spike_slope_factor", q.spike_slope_factor);
    get_if(j, "spike_guard_s", q.spike_guard_s);
    get_if(j, "refractory_s", q.refractory_s);
    get_if(j, "rr_min_s", q.rr_min_s);
    get_if(j, "rr_max_s", q.rr_max_s);
    get_if(j, "qt_min_s", q.qt_min_s);
    get_if(j, "qt_max_s", q.qt_max_s);
    get_if(j, "z_max", q.z_max);
    get_if(j, "survival_min", q.survival_min);
    get_if(j, "min_beats", q.min_beats);
}

void parse_model(const json& j, model::ModelConfig& m) {
    get_if(j, "layer_widths", m.layer_widths);
    get_if(j, "dropout_p", m.dropout_p);
    get_if(j, "batchnorm", m.batchnorm);
    get_if(j, "dropout", m.dropout);
    get_if(j, "epochs", m.epochs);
    get_if(j, "batch_size", m.batch_size);
    get_if(j, "seed", m.seed);
    if (j.contains("adam")) {
        get_if(j.at("adam"), "lr", m.adam.lr);
        get_if(j.at("adam"), "beta1", m.adam.beta1);
        get_if(j.at("adam"), "beta2", m.adam.beta2);
        get_if(j.at("adam"), "eps", m.adam.eps);
    }
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
    PipelineConfig cfg;
    if (path.empty()) return cfg;

    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("config file not found: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::exception& e) {
        throw FormatError(std::string("config file: invalid JSON: ") + e.what());
    }

    try {
        get_if(j, "seed", cfg.seed);
        if (j.contains("generator")) {
            const auto& g = j.at("generator");
            if (g.contains("cohort")) parse_cohort(g.at("cohort"), cfg.cohort);
            if (g.contains("ecg")) parse_beat(g.at("ecg"), cfg.beat);
            get_if(g, "duration_s", cfg.gen_duration_s);
            get_if(g, "fs_hz", cfg.gen_fs_hz);
        }
        if (j.contains("ecg_qc")) parse_qc(j.at("ecg_qc"), cfg.qc);
        if (j.contains("model")) parse_model(j.at("model"), cfg.net);
        if (j.contains("folds")) get_if(j.at("folds"), "seed", cfg.fold_seed);
        if (j.contains("smote")) get_if(j.at("smote"), "k", cfg.smote_k);
        if (j.contains("evaluate")) get_if(j.at("evaluate"), "threshold", cfg.threshold);
        if (j.contains("abstention")) {
            get_if(j.at("abstention"), "enabled", cfg.abstain_enabled);
            get_if(j.at("abstention"), "half_width", cfg.abstain_half_width);
            get_if(j.at("abstention"), "tune", cfg.abstain_tune);
        }
        if (j.contains("experiment")) {
            get_if(j.at("experiment"), "variants", cfg.experiment_variants);
            get_if(j.at("experiment"), "base_seed", cfg.experiment_seed);
        }
        if (j.contains("report")) get_if(j.at("report"), "histogram_bins", cfg.histogram_bins);
    } catch (const json::exception& e) {
        throw FormatError(std::string("config file: ") + e.what());
    }
    return cfg;
}

void apply_seed_override(PipelineConfig& cfg, std::uint64_t seed) {
    cfg.seed = seed;
    cfg.cohort.seed = derive_seed(seed, "gen-cohort");
    cfg.fold_seed = derive_seed(seed, "folds");
    cfg.net.seed = derive_seed(seed, "train");
    cfg.experiment_seed = derive_seed(seed, "experiment");
}

}  // namespace sweetdeep::cli
