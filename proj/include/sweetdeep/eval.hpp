#pragma once

// Classification metrics with cross-fold pooling, 10-bin calibration / ECE,
// the 3-fold cross-validation driver and the ablation / variant harness.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sweetdeep/dataset.hpp"
#include "sweetdeep/model.hpp"

namespace sweetdeep::eval {

// ── Counts and rates ─────────────────────────────────────

struct ConfusionCounts {
    long tp = 0, fp = 0, fn = 0, tn = 0;  // positive = T2D
    long total() const { return tp + fp + fn + tn; }
};

struct PredLabel {
    double p = 0.0;  // predicted P(T2D)
    int label = 0;   // 1 = T2D
};

// Threshold applied with >= semantics (p >= thr predicts T2D).
ConfusionCounts confusion(std::span<const PredLabel> preds, double threshold = 0.5);

// A zero denominator yields an empty optional, never a silent 0.
struct Rates {
    std::optional<double> accuracy, sensitivity, specificity, macro_f1;
};

Rates metrics_from_counts(const ConfusionCounts& c);

ConfusionCounts pooled_counts(std::span<const ConfusionCounts> folds);

// ── Calibration ──────────────────────────────────────────

struct CalibrationBin {
    double lo = 0.0, hi = 0.0;
    long count = 0;
    double mean_pred = 0.0;
    double frac_pos = 0.0;
};

struct CalibrationTable {
    std::array<CalibrationBin, 10> bins{};
    long total = 0;
    // bin-weighted mean |frac_pos - mean_pred| over non-empty bins
    double ece() const;
};

// Bins [0,0.1), ..., [0.9,1.0]; the last bin is closed so p = 1 is counted.
CalibrationTable calibration(std::span<const PredLabel> preds);

// ── Reports ──────────────────────────────────────────────

struct MetricsReport {
    std::string level;  // "instance" or "patient"
    ConfusionCounts counts;
    Rates rates;
    CalibrationTable calib;
    double ece = 0.0;
    double threshold = 0.5;
};

MetricsReport make_report(const std::string& level, std::span<const PredLabel> preds,
                          double threshold = 0.5);

// ── Cross-validation driver ──────────────────────────────

struct CvOptions {
    model::ModelConfig net;
    std::uint64_t fold_seed = 7;
    int smote_k = 5;
    double threshold = 0.5;
    // feature columns fed to the network (empty = all 35); normalization and
    // SMOTE always run on the full vector, ablations shrink the model input
    std::vector<int> keep_features;
};

struct PatientPred {
    std::string patient_id;
    double p = 0.0;
    int label = 0;
    long n_instances = 0;
};

// One trained fold (or full-cohort) model with its preprocessing state.
struct TrainedModel {
    model::ModelParams params;
    dataset::Normalizer normalizer;
    std::vector<int> keep_features;
    std::vector<model::EpochStats> trace;
};

TrainedModel train_on(const std::vector<dataset::InstanceRecord>& train_records,
                      const CvOptions& opt, std::uint64_t stream_seed);

// Instance probabilities for arbitrary records under a trained model.
std::vector<PredLabel> predict_instances(const TrainedModel& tm,
                                         const std::vector<dataset::InstanceRecord>& records);

struct CvResult {
    dataset::FoldSplit folds;
    std::vector<PredLabel> instance_preds;   // pooled out-of-fold predictions
    std::vector<PatientPred> patient_preds;  // pooled per-patient means
    std::array<ConfusionCounts, 3> fold_instance_counts{};
    std::array<ConfusionCounts, 3> fold_patient_counts{};
    MetricsReport instance_report;
    MetricsReport patient_report;
};

// Full inter-patient 3-fold cross-validation on the ND/T2D subset:
// per fold fit normalizer on train, SMOTE, train, predict the held-out
// patients; counts pooled across folds.
CvResult run_cv(const std::vector<dataset::InstanceRecord>& records, const CvOptions& opt);

// Re-threshold an existing result without retraining (calibration is
// threshold-free and carries over).
CvResult rethreshold(const CvResult& r, double threshold);

// ── Experiment harness ───────────────────────────────────

// Known variants: baseline; no-dropout, no-batchnorm, no-do-no-bn;
// wider, deeper, wider-deeper; no-ecg, no-ppg-bp, no-bia, no-age,
// no-family-history, no-time; threshold-0.4, threshold-0.6.
std::vector<std::string> known_variants();

struct ExperimentSpec {
    std::vector<std::string> variants;  // empty = all known variants
    std::uint64_t base_seed = 1;
    std::uint64_t fold_seed = 7;  // shared across variants for comparability
    model::ModelConfig net;       // baseline settings; variants derive from it
    int smote_k = 5;
};

struct VariantResult {
    std::string name;
    int input_width = 0;
    long param_count = 0;
    double threshold = 0.5;
    MetricsReport instance_report;
    MetricsReport patient_report;
};

// Runs each variant's full cross-validation; feature ablations drop the
// group's columns from the model input, architecture variants retrain with
// their own seed stream, threshold variants re-use the baseline model.
std::vector<VariantResult> run_experiment(const ExperimentSpec& spec,
                                          const std::vector<dataset::InstanceRecord>& cohort);

// Feature indices of a named group (ecg, ppg-bp, bia, age, family-history,
// time); throws ParamError for unknown names.
std::vector<int> feature_group_indices(const std::string& group);

}  // namespace sweetdeep::eval
