#pragma once

// ECG cleaning and per-beat delineation: band-pass filtering, spike-artifact
// rejection, R-peak detection, R-onset / T-offset location, and interval
// quality control with the 10% survival rule.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sweetdeep/common.hpp"

namespace sweetdeep::ecg {

struct EcgRecording {
    std::vector<double> samples_mv;
    double fs_hz = 0.0;
    double start_epoch_s = 0.0;
    std::string patient_id;

    double duration_s() const { return samples_mv.empty() ? 0.0 : double(samples_mv.size()) / fs_hz; }
    // fs >= 100 Hz, non-empty, finite samples
    void validate() const;
};

struct SpikeSpan {
    double begin_s = 0.0;
    double end_s = 0.0;
    bool overlaps(double lo, double hi) const { return begin_s < hi && end_s > lo; }
    bool contains(double t) const { return t >= begin_s && t < end_s; }
};

enum class Reject {
    r_onset_not_found,
    t_offset_not_found,
    rr_out_of_range,
    qt_out_of_range,
    rr_outlier,
    qt_outlier,
};

const char* reject_name(Reject r);

struct BeatAnnotation {
    int index = 0;  // position in the detected R-peak sequence
    double r_peak_s = 0.0;
    std::optional<double> r_onset_s;
    std::optional<double> t_offset_s;
    std::optional<double> rr_prev_s;  // absent for the first beat
    std::optional<double> qt_s;       // t_offset - r_onset

    std::vector<Reject> quality_flags;  // empty = accepted

    bool accepted() const { return quality_flags.empty(); }
    bool has_flag(Reject r) const;
    void add_flag(Reject r);
};

struct QcReport {
    long beats_total = 0;
    long beats_accepted = 0;
    double survival_fraction = 0.0;  // accepted / total, 0 when total == 0
    bool instance_accepted = false;
    std::map<std::string, long> rejection_histogram;
};

// ── Tunables ─────────────────────────────────────────────

struct FilterSpec {
    double low_hz = 0.5;
    double high_hz = 40.0;
    int hp_order = 2;
    int lp_order = 4;
};

struct QcOptions {
    FilterSpec filter;
    // spike detector
    double spike_amp_factor = 2.5;    // × robust beat amplitude scale
    double spike_slope_factor = 4.0;  // × robust beat slope scale
    double spike_guard_s = 0.1;
    // R-peak detector
    double refractory_s = 0.25;
    // interval QC
    double rr_min_s = 0.33;  // HR 30-180 bpm
    double rr_max_s = 2.0;
    double qt_min_s = 0.20;
    double qt_max_s = 0.60;
    double z_max = 3.5;  // robust z cutoff
    // instance gate
    double survival_min = 0.10;
    long min_beats = 8;
};

// ── Operations ───────────────────────────────────────────

// Zero-phase Butterworth band-pass (forward-backward biquads), DC removed.
// Throws ParamError when the passband does not fit under fs/2.
EcgRecording bandpass_filter(const EcgRecording& rec, const FilterSpec& spec = {});

// Maximal spans where amplitude or slope exceed robust per-beat scales,
// padded by a guard interval and merged. Expects a filtered recording.
std::vector<SpikeSpan> detect_spikes(const EcgRecording& rec, const QcOptions& opt = {});

// Derivative-energy R-peak detection (band-limited, squared, window
// integrated, adaptive threshold, refractory period). Peaks inside
// excluded spans are dropped. Returns sorted times in seconds.
std::vector<double> detect_r_peaks(const EcgRecording& rec,
                                   const std::vector<SpikeSpan>& excluded = {},
                                   const QcOptions& opt = {});

// Per-beat R onset and T offset via smoothed multiscale analysis around
// each R peak. Beats whose fiducials cannot be located are flagged, never
// dropped. Samples inside `excluded` spans are masked out first.
std::vector<BeatAnnotation> delineate(const EcgRecording& rec, const std::vector<double>& r_peaks,
                                      const std::vector<SpikeSpan>& excluded = {},
                                      const QcOptions& opt = {});

// Clinical bounds on RR and QT, then an iterated robust-z outlier pass
// (run to fixed point, so re-applying to the accepted output is a no-op).
// In the accepted output rr_prev is kept only when the predecessor beat
// (index - 1) also survived, which is what makes an RR interval valid
// downstream. instance_accepted follows the survival rule.
std::pair<std::vector<BeatAnnotation>, QcReport> apply_interval_qc(
    const std::vector<BeatAnnotation>& beats, const QcOptions& opt = {});

// ── Whole-recording convenience pipeline ─────────────────

struct EcgAnalysis {
    EcgRecording filtered;
    std::vector<SpikeSpan> spikes;
    std::vector<double> r_peaks;
    std::vector<BeatAnnotation> beats;     // all delineated beats
    std::vector<BeatAnnotation> accepted;  // QC survivors
    QcReport report;
};

EcgAnalysis process_recording(const EcgRecording& raw, const QcOptions& opt = {});

}  // namespace sweetdeep::ecg
