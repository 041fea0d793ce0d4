#pragma once

// File formats used by the CLI handoffs (documented in docs/FORMATS.md):
// ECG trace CSV + JSON sidecar, ground-truth JSON, instance JSONL, fold
// JSON, beat/QC JSON, normalizer JSON, metrics JSON, calibration / verdict
// CSVs and small SVG plots. All writers are deterministic: identical data
// produces byte-identical files.

#include <string>
#include <vector>

#include "sweetdeep/dataset.hpp"
#include "sweetdeep/ecgproc.hpp"
#include "sweetdeep/eval.hpp"
#include "sweetdeep/screen.hpp"
#include "sweetdeep/signalgen.hpp"

namespace sweetdeep::io {

// ── ECG traces ───────────────────────────────────────────

// <path> gets the CSV (header "t_s,voltage_mv"); <path minus .csv>.json the
// sidecar {fs_hz, start_epoch_s [, patient_id]}.
void write_ecg_csv(const ecg::EcgRecording& rec, const std::string& csv_path);
ecg::EcgRecording read_ecg_csv(const std::string& csv_path);

void write_ground_truth(const signalgen::GroundTruth& truth, const std::string& path);
signalgen::GroundTruth read_ground_truth(const std::string& path);

// ── Instances / folds ────────────────────────────────────

void write_instances_jsonl(const std::vector<dataset::InstanceRecord>& records,
                           const std::string& path);
std::vector<dataset::InstanceRecord> read_instances_jsonl(const std::string& path);

void write_folds(const dataset::FoldSplit& folds, const std::string& path);
dataset::FoldSplit read_folds(const std::string& path);

void write_normalizer(const dataset::Normalizer& n, const std::vector<int>& keep_features,
                      const std::string& path);
std::pair<dataset::Normalizer, std::vector<int>> read_normalizer(const std::string& path);

// ── Beats and QC ─────────────────────────────────────────

void write_beats_json(const ecg::EcgAnalysis& analysis, const std::string& path);
// returns the accepted beats plus the stored QC report
std::pair<std::vector<ecg::BeatAnnotation>, ecg::QcReport> read_beats_json(
    const std::string& path);

// per-recording acceptance table:
// recording,beats_total,beats_accepted,survival_fraction,instance_accepted
void write_qc_table_csv(const std::vector<std::pair<std::string, ecg::QcReport>>& rows,
                        const std::string& path);

// ── Provided (SDK) features for `extract` ────────────────

struct ProvidedRow {
    std::string beats_file;  // beats JSON produced by ecg-qc
    std::string patient_id;
    double timestamp_s = 0.0;
    int label = 0;
    features::ProvidedFeatures provided;
};
std::vector<ProvidedRow> read_provided_jsonl(const std::string& path);

// ── Metrics, calibration, verdicts ───────────────────────

void write_metrics_json(const eval::MetricsReport& instance_level,
                        const eval::MetricsReport& patient_level, const std::string& path);

// bin_lo,bin_hi,count,mean_pred,frac_pos
void write_calibration_csv(const eval::CalibrationTable& table, const std::string& path);

// patient_id,n_instances,p_t2d,verdict
void write_verdicts_csv(const std::vector<screen::PatientVerdict>& verdicts,
                        const std::string& path);

void write_abstention_json(const screen::AbstentionReport& report, const std::string& path);

// bin_lo,bin_hi,count
void write_histogram_csv(const screen::CohortDistribution& dist, const std::string& path);

void write_experiment_json(const std::vector<eval::VariantResult>& results,
                           const std::string& path);

// ── Rendering ────────────────────────────────────────────

std::string render_metrics_table(const std::vector<eval::VariantResult>& rows);
std::string render_report_table(const eval::MetricsReport& instance_level,
                                const eval::MetricsReport& patient_level);

void write_reliability_svg(const eval::CalibrationTable& table, const std::string& path);
void write_distribution_svg(const std::vector<screen::CohortDistribution>& dists,
                            const std::string& path);

// re-read a metrics JSON for the `report` subcommand
std::pair<eval::MetricsReport, eval::MetricsReport> read_metrics_json(const std::string& path);

}  // namespace sweetdeep::io
