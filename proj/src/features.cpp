#include "sweetdeep/features.hpp"

#include <cmath>

namespace sweetdeep::features {

void ProvidedFeatures::validate() const {
    for (double v : ppg_bp)
        if (!std::isfinite(v)) throw ParamError("ProvidedFeatures: non-finite PPG-BP value");
    for (double v : bia)
        if (!std::isfinite(v)) throw ParamError("ProvidedFeatures: non-finite BIA value");
    if (!(age_years > 0.0 && age_years < 120.0))
        throw ParamError("ProvidedFeatures: age out of range (0, 120)");
    if (family_history < 0 || family_history > 2)
        throw ParamError("ProvidedFeatures: family_history must be 0, 1 or 2");
}

double compute_qtc(const std::vector<ecg::BeatAnnotation>& beats) {
    std::vector<double> per_beat;
    for (const auto& b : beats)
        if (b.qt_s && b.rr_prev_s && *b.rr_prev_s > 0.0)
            per_beat.push_back(*b.qt_s / std::cbrt(*b.rr_prev_s));
    if (per_beat.empty())
        throw DataError("compute_qtc: no beat with both qt and rr_prev");
    return vec_median(std::move(per_beat));
}

double compute_sdnn(const std::vector<double>& rr_s) {
    if (rr_s.size() < 2) throw DataError("compute_sdnn: need at least 2 RR intervals");
    return vec_sample_sd(rr_s);
}

double compute_rmssd(const std::vector<double>& rr_s, const std::vector<bool>& pair_ok) {
    double sum_sq = 0.0;
    long m = 0;
    for (std::size_t i = 0; i + 1 < rr_s.size(); i++) {
        if (i < pair_ok.size() && !pair_ok[i]) continue;
        double d = rr_s[i + 1] - rr_s[i];
        sum_sq += d * d;
        m++;
    }
    if (m == 0) throw DataError("compute_rmssd: no consecutive RR pair");
    return std::sqrt(sum_sq / double(m));
}

RrSeries rr_series_from_beats(const std::vector<ecg::BeatAnnotation>& accepted) {
    RrSeries s;
    std::vector<int> owner_index;  // beat index owning each RR sample
    for (const auto& b : accepted) {
        if (!b.rr_prev_s) continue;  // QC already cleared RR across rejected beats
        s.rr_s.push_back(*b.rr_prev_s);
        owner_index.push_back(b.index);
    }
    for (std::size_t i = 0; i + 1 < s.rr_s.size(); i++)
        s.pair_ok.push_back(owner_index[i + 1] == owner_index[i] + 1);
    return s;
}

EcgFeatures ecg_features_from_beats(const std::vector<ecg::BeatAnnotation>& accepted) {
    RrSeries rr = rr_series_from_beats(accepted);
    EcgFeatures f;
    f.qtc_s = compute_qtc(accepted);
    f.sdnn_s = compute_sdnn(rr.rr_s);
    f.rmssd_s = compute_rmssd(rr.rr_s, rr.pair_ok);
    return f;
}

std::array<double, 8> encode_time(double t) {
    if (!(t >= 0.0 && t < 86400.0))
        throw ParamError("encode_time: t must lie in [0, 86400); reduce modulo 86400 first");
    double phi = 2.0 * M_PI * t / 86400.0;
    std::array<double, 8> e{};
    for (int k = 1; k <= 4; k++) {
        e[std::size_t(2 * (k - 1))] = std::sin(double(k) * phi);
        e[std::size_t(2 * (k - 1) + 1)] = std::cos(double(k) * phi);
    }
    return e;
}

FeatureVector assemble(const EcgFeatures& ecg, const ProvidedFeatures& provided, double t) {
    provided.validate();
    if (!(std::isfinite(ecg.qtc_s) && std::isfinite(ecg.sdnn_s) && std::isfinite(ecg.rmssd_s)))
        throw DataError("assemble: non-finite ECG features");

    FeatureVector v{};
    v[kQtcIdx] = ecg.qtc_s;
    v[kSdnnIdx] = ecg.sdnn_s;
    v[kRmssdIdx] = ecg.rmssd_s;
    for (int i = 0; i < 10; i++) v[std::size_t(kPpgBpIdx + i)] = provided.ppg_bp[std::size_t(i)];
    for (int i = 0; i < 10; i++) v[std::size_t(kBiaIdx + i)] = provided.bia[std::size_t(i)];
    v[kAgeIdx] = provided.age_years;
    v[std::size_t(kFamilyHistoryIdx + provided.family_history)] = 1.0;
    auto time = encode_time(t);
    for (int i = 0; i < 8; i++) v[std::size_t(kTimeIdx + i)] = time[std::size_t(i)];
    return v;
}

}  // namespace sweetdeep::features
