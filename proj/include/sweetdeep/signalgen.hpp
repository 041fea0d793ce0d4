#pragma once

// Synthetic data with known ground truth: sum-of-Gaussians ECG beat trains
// (analytic fiducials, controllable artifacts) and ND/T2D/PD cohorts of
// instance records drawn from class-conditional feature distributions with
// circadian modulation.

#include <array>
#include <string>
#include <vector>

#include "sweetdeep/common.hpp"
#include "sweetdeep/dataset.hpp"
#include "sweetdeep/ecgproc.hpp"

namespace sweetdeep::signalgen {

// ── ECG trace synthesis ──────────────────────────────────

struct WaveParams {
    double amplitude_mv = 0.0;
    double center_s = 0.0;  // offset from the R peak
    double width_s = 0.01;  // Gaussian sigma
};

struct BeatTemplateParams {
    WaveParams p{0.15, -0.20, 0.030};
    WaveParams q{-0.10, -0.030, 0.010};
    WaveParams r{1.00, 0.0, 0.010};
    WaveParams s{-0.15, 0.030, 0.010};
    // t.center_s is derived from qt_base_s at synthesis time (T offset is
    // defined as T center + 2 sigma); the field itself is ignored.
    WaveParams t{0.30, 0.25, 0.055};

    double hr_mean_bpm = 65.0;
    double rr_std_s = 0.04;
    double qt_base_s = 0.40;

    double wander_amp_mv = 0.10;
    double wander_freq_hz = 0.25;
    double noise_std_mv = 0.02;

    double spike_rate_per_min = 2.0;
    double spike_amp_mv = 6.0;  // >= 5x R amplitude keeps artifacts unambiguous

    void validate() const;

    // analytic offsets from the R peak, fixed per template
    double r_onset_offset_s() const;                       // Q/R boundary crossing
    double t_offset_offset_s() const { return r_onset_offset_s() + qt_base_s; }

    // mean-square of the noise-free beat train, for SNR bookkeeping
    double signal_power_mv2() const;
    double noise_std_for_snr_db(double snr_db) const;
};

struct TrueBeat {
    double r_peak_s = 0.0;
    double r_onset_s = 0.0;
    double t_offset_s = 0.0;
};

struct GroundTruth {
    std::vector<TrueBeat> beats;
    std::vector<ecg::SpikeSpan> spikes;
};

// Sum-of-Gaussians beat train with truncated-normal RR intervals, baseline
// wander, white noise and rectangular spike artifacts. Identical seed gives
// bit-identical output.
std::pair<ecg::EcgRecording, GroundTruth> synthesize_ecg(const BeatTemplateParams& params,
                                                         double duration_s, double fs_hz,
                                                         std::uint64_t seed);

// ── Cohort synthesis ─────────────────────────────────────

struct FeatureDist {
    double mean = 0.0;
    double sd = 1.0;
    double t2d_shift_sd = 0.0;  // class shift in units of sd, scaled by separation
    double floor = -1e300;      // post-draw clamp (ECG intervals must stay positive)
};

struct GroupModulation {
    double patient_sd = 0.6;     // per-patient random effect, units of feature sd
    double circadian_amp = 0.3;  // sinusoidal day modulation, units of feature sd
    double circadian_phase = 0.0;
};

struct CohortSpec {
    int nd_count = 162;
    int t2d_count = 123;
    int pd_count = 153;

    int days = 6;
    int slots_per_day = 6;  // meal-anchored recording slots (max 6)
    double instances_per_patient_mean = 20.0;
    double jitter_minutes = 90.0;
    // fraction of instances at a uniform random time of day instead of a
    // meal slot, so every hour of the day gets some coverage
    double irregular_time_frac = 0.10;

    // scales every class shift; 0 makes the classes indistinguishable
    double separation = 1.0;

    std::array<FeatureDist, 24> continuous{};  // 3 ECG | 10 PPG-BP | 10 BIA | age
    GroupModulation ecg_mod{0.6, 0.3, 1.0};
    GroupModulation ppg_mod{0.6, 0.4, 4.0};
    GroupModulation bia_mod{0.7, 0.1, 0.0};
    GroupModulation age_mod{1.0, 0.0, 0.0};  // age: patient-level only

    std::array<double, 3> fh_probs_nd{0.62, 0.25, 0.13};
    std::array<double, 3> fh_probs_t2d{0.35, 0.30, 0.35};

    std::uint64_t seed = 20250601;

    static CohortSpec defaults();
    void validate() const;
};

// Deterministic synthetic cohort. Each patient gets one fixed age and
// family-history category; instance features are class-conditional draws
// with per-patient effects and time-of-day modulation. PD patients draw a
// latent ND-like or T2D-like state (their prediction distribution should
// come out bimodal).
std::vector<dataset::InstanceRecord> generate_cohort(const CohortSpec& spec);

}  // namespace sweetdeep::signalgen
