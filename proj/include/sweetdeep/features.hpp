#pragma once

// The 35-feature input vector: ECG-derived intervals (Fridericia-corrected
// QT, SDNN, RMSSD), SDK-provided PPG-BP and BIA values, questionnaire
// answers, and the eight sinusoidal time-of-day encodings.

#include <array>
#include <vector>

#include "sweetdeep/common.hpp"
#include "sweetdeep/ecgproc.hpp"

namespace sweetdeep::features {

inline constexpr int kFeatureCount = 35;

// fixed layout: [3 ECG | 10 PPG-BP | 10 BIA | 1 Age | 3 FamilyHistory | 8 Time]
inline constexpr int kQtcIdx = 0;
inline constexpr int kSdnnIdx = 1;
inline constexpr int kRmssdIdx = 2;
inline constexpr int kPpgBpIdx = 3;
inline constexpr int kBiaIdx = 13;
inline constexpr int kAgeIdx = 23;
inline constexpr int kFamilyHistoryIdx = 24;
inline constexpr int kTimeIdx = 27;

using FeatureVector = std::array<double, kFeatureCount>;

struct EcgFeatures {
    double qtc_s = 0.0;
    double sdnn_s = 0.0;
    double rmssd_s = 0.0;
};

struct ProvidedFeatures {
    std::array<double, 10> ppg_bp{};  // 8 TPR-related, 2 CO-related
    std::array<double, 10> bia{};     // BodMag, 4x ConMag, BodDeg, BFM, SMM, TBW, BMR
    double age_years = 0.0;
    int family_history = 0;  // 0 none, 1 second-degree, 2 first-degree
    void validate() const;
};

// ── ECG interval features ────────────────────────────────

// Instance QTc: median over per-beat qt / rr^(1/3). Needs at least one beat
// carrying both qt and rr_prev; throws DataError otherwise.
double compute_qtc(const std::vector<ecg::BeatAnnotation>& beats);

// Sample standard deviation of the RR intervals (N-1 denominator, N >= 2).
double compute_sdnn(const std::vector<double>& rr_s);

// Root mean square of successive RR differences over the M valid pairs.
// pair_ok[i] marks whether rr_s[i] and rr_s[i+1] are truly consecutive
// (pairs broken by rejected beats are excluded). M >= 1 required.
double compute_rmssd(const std::vector<double>& rr_s, const std::vector<bool>& pair_ok);

// RR series with pair adjacency, derived from QC-accepted beats: an RR
// sample exists where rr_prev survived QC, and two samples pair up when
// they share a middle beat (original indices are consecutive).
struct RrSeries {
    std::vector<double> rr_s;
    std::vector<bool> pair_ok;  // size rr_s.size()-1 (empty when < 2 samples)
};
RrSeries rr_series_from_beats(const std::vector<ecg::BeatAnnotation>& accepted);

EcgFeatures ecg_features_from_beats(const std::vector<ecg::BeatAnnotation>& accepted);

// ── Time-of-day encoding ─────────────────────────────────

// [sin p, cos p, sin 2p, cos 2p, sin 3p, cos 3p, sin 4p, cos 4p] with
// p = 2*pi*t/86400. t must already be reduced to [0, 86400).
std::array<double, 8> encode_time(double t_seconds_of_day);

// ── Assembly ─────────────────────────────────────────────

FeatureVector assemble(const EcgFeatures& ecg, const ProvidedFeatures& provided,
                       double t_seconds_of_day);

}  // namespace sweetdeep::features
