#pragma once

// Nested pipeline configuration backing every CLI subcommand. Unset keys
// take the documented defaults; a global --seed derives per-stage streams
// by hashing (seed, stage name).

#include <cstdint>
#include <string>

#include "sweetdeep/ecgproc.hpp"
#include "sweetdeep/eval.hpp"
#include "sweetdeep/model.hpp"
#include "sweetdeep/signalgen.hpp"

namespace sweetdeep::cli {

struct PipelineConfig {
    std::uint64_t seed = 20250601;

    // generator
    signalgen::CohortSpec cohort = signalgen::CohortSpec::defaults();
    signalgen::BeatTemplateParams beat;
    double gen_duration_s = 120.0;
    double gen_fs_hz = 250.0;

    ecg::QcOptions qc;
    model::ModelConfig net;

    std::uint64_t fold_seed = 7;
    int smote_k = 5;
    double threshold = 0.5;

    bool abstain_enabled = true;
    double abstain_half_width = 0.08;
    bool abstain_tune = false;

    std::vector<std::string> experiment_variants;  // empty = all
    std::uint64_t experiment_seed = 1;

    int histogram_bins = 10;
};

// Parses the JSON config file (all keys optional); empty path keeps the
// defaults. Throws IoError / FormatError / ParamError.
PipelineConfig load_config(const std::string& path);

// Applies the global seed override: per-stage seeds become hash(seed, stage).
void apply_seed_override(PipelineConfig& cfg, std::uint64_t seed);

}  // namespace sweetdeep::cli
