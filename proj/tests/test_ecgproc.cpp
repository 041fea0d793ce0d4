#include <doctest.h>

#include <cmath>

#include "sweetdeep/ecgproc.hpp"
#include "sweetdeep/signalgen.hpp"

using namespace sweetdeep;
using ecg::apply_interval_qc;
using ecg::bandpass_filter;
using ecg::BeatAnnotation;
using ecg::delineate;
using ecg::detect_r_peaks;
using ecg::detect_spikes;
using ecg::EcgRecording;
using ecg::Reject;

namespace {

EcgRecording sine_trace(double freq, double amp, double fs, double duration) {
    EcgRecording rec;
    rec.fs_hz = fs;
    std::size_t n = std::size_t(duration * fs);
    for (std::size_t i = 0; i < n; i++)
        rec.samples_mv.push_back(amp * std::sin(2.0 * M_PI * freq * double(i) / fs));
    return rec;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

signalgen::BeatTemplateParams clean_params() {
    signalgen::BeatTemplateParams p;
    p.noise_std_mv = 0.0;
    p.wander_amp_mv = 0.0;
    p.spike_rate_per_min = 0.0;
    return p;
}

BeatAnnotation beat(int index, double r_peak, double rr, double qt) {
    BeatAnnotation b;
    b.index = index;
    b.r_peak_s = r_peak;
    b.r_onset_s = r_peak - 0.02;
    b.t_offset_s = r_peak - 0.02 + qt;
    b.qt_s = qt;
    if (index > 0) b.rr_prev_s = rr;
    return b;
}

}  // namespace

TEST_SUITE("ecgproc") {

TEST_CASE("filter response: drift killed, passband preserved") {
    // the filter-response oracle: measure sinusoid amplitude before/after
    auto drift = sine_trace(0.05, 1.0, 250.0, 60.0);
    auto out = bandpass_filter(drift);
    CHECK(max_abs(out.samples_mv) < 0.05);

    auto inband = sine_trace(10.0, 1.0, 250.0, 60.0);
    auto out2 = bandpass_filter(inband);
    // compare away from the ends
    double m = 0.0;
    for (std::size_t i = 1000; i + 1000 < out2.samples_mv.size(); i++)
        m = std::max(m, std::fabs(out2.samples_mv[i]));
    CHECK(m == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("filter: zeros map to zeros, DC removed") {
    EcgRecording zeros;
    zeros.fs_hz = 250.0;
    zeros.samples_mv.assign(5000, 0.0);
    auto out = bandpass_filter(zeros);
    CHECK(max_abs(out.samples_mv) == 0.0);

    EcgRecording dc;
    dc.fs_hz = 250.0;
    dc.samples_mv.assign(5000, 3.7);
    auto out2 = bandpass_filter(dc);
    CHECK(max_abs(out2.samples_mv) < 1e-6);
}

TEST_CASE("filter rejects an impossible passband") {
    EcgRecording rec = sine_trace(1.0, 1.0, 100.0, 10.0);
    ecg::FilterSpec spec;
    spec.high_hz = 60.0;  // above Nyquist at fs = 100
    CHECK_THROWS_AS(bandpass_filter(rec, spec), ParamError);
}

TEST_CASE("spike detection finds injected artifacts and nothing else") {
    auto p = clean_params();
    p.noise_std_mv = p.noise_std_for_snr_db(25.0);
    auto [raw, truth] = signalgen::synthesize_ecg(p, 120.0, 250.0, 21);
    auto filtered = bandpass_filter(raw);
    CHECK(detect_spikes(filtered).empty());

    // inject exactly 3 spikes by hand at known spots
    auto spiked = raw;
    std::vector<ecg::SpikeSpan> injected{{20.0, 20.05}, {60.3, 60.33}, {100.7, 100.76}};
    for (const auto& s : injected)
        for (std::size_t i = std::size_t(s.begin_s * 250.0); i < std::size_t(s.end_s * 250.0); i++)
            spiked.samples_mv[i] += 6.0;
    auto detected = detect_spikes(bandpass_filter(spiked));
    REQUIRE(detected.size() == 3);
    for (std::size_t i = 0; i < 3; i++)
        CHECK(detected[i].overlaps(injected[i].begin_s, injected[i].end_s));
}

TEST_CASE("spike detection on a constant-zero trace") {
    EcgRecording rec;
    rec.fs_hz = 250.0;
    rec.samples_mv.assign(30000, 0.0);
    CHECK(detect_spikes(rec).empty());
}

TEST_CASE("r-peak detection at 60 bpm over 120 s") {
    auto p = clean_params();
    p.hr_mean_bpm = 60.0;
    p.rr_std_s = 0.0;
    p.noise_std_mv = p.noise_std_for_snr_db(25.0);
    auto [raw, truth] = signalgen::synthesize_ecg(p, 120.0, 250.0, 31);
    auto filtered = bandpass_filter(raw);
    auto peaks = detect_r_peaks(filtered);

    CHECK(peaks.size() >= 119);
    CHECK(peaks.size() <= 121);
    // each detected peak within 10 ms of some true peak
    for (double t : peaks) {
        double best = 1e9;
        for (const auto& b : truth.beats) best = std::min(best, std::fabs(b.r_peak_s - t));
        CHECK(best <= 0.010);
    }
}

TEST_CASE("r-peak detection: 100 bpm mean RR") {
    auto p = clean_params();
    p.hr_mean_bpm = 100.0;
    p.rr_std_s = 0.0;
    p.qt_base_s = 0.36;
    p.noise_std_mv = p.noise_std_for_snr_db(25.0);
    auto [raw, truth] = signalgen::synthesize_ecg(p, 120.0, 250.0, 32);
    auto peaks = detect_r_peaks(bandpass_filter(raw));
    REQUIRE(peaks.size() > 100);
    double sum = 0.0;
    for (std::size_t i = 1; i < peaks.size(); i++) sum += peaks[i] - peaks[i - 1];
    double mean_rr = sum / double(peaks.size() - 1);
    CHECK(mean_rr == doctest::Approx(0.600).epsilon(0.005 / 0.600));
}

TEST_CASE("peaks inside excluded spans are dropped") {
    auto p = clean_params();
    auto [raw, truth] = signalgen::synthesize_ecg(p, 30.0, 250.0, 33);
    auto filtered = bandpass_filter(raw);
    std::vector<ecg::SpikeSpan> all{{0.0, 30.0}};
    CHECK(detect_r_peaks(filtered, all).empty());
}

TEST_CASE("delineation accuracy on clean traces") {
    auto p = clean_params();
    p.noise_std_mv = p.noise_std_for_snr_db(25.0);
    auto [raw, truth] = signalgen::synthesize_ecg(p, 120.0, 250.0, 41);
    auto filtered = bandpass_filter(raw);
    auto peaks = detect_r_peaks(filtered);
    auto beats = delineate(filtered, peaks);

    long total = 0, onset_ok = 0, toff_ok = 0;
    for (const auto& b : beats) {
        // match to the nearest true beat
        const signalgen::TrueBeat* best = nullptr;
        for (const auto& t : truth.beats)
            if (!best || std::fabs(t.r_peak_s - b.r_peak_s) < std::fabs(best->r_peak_s - b.r_peak_s))
                best = &t;
        REQUIRE(best != nullptr);
        if (std::fabs(best->r_peak_s - b.r_peak_s) > 0.010) continue;
        total++;
        if (b.r_onset_s && std::fabs(*b.r_onset_s - best->r_onset_s) <= 0.010) onset_ok++;
        if (b.t_offset_s && std::fabs(*b.t_offset_s - best->t_offset_s) <= 0.025) toff_ok++;
    }
    REQUIRE(total >= 119);
    CHECK(double(onset_ok) / double(total) >= 0.95);
    CHECK(double(toff_ok) / double(total) >= 0.95);
}

TEST_CASE("qt is definitional and flagged beats keep no qt") {
    auto p = clean_params();
    auto [raw, truth] = signalgen::synthesize_ecg(p, 60.0, 250.0, 42);
    auto filtered = bandpass_filter(raw);
    auto peaks = detect_r_peaks(filtered);
    auto beats = delineate(filtered, peaks);
    for (const auto& b : beats) {
        if (b.qt_s) {
            REQUIRE(b.r_onset_s.has_value());
            REQUIRE(b.t_offset_s.has_value());
            CHECK(*b.qt_s == *b.t_offset_s - *b.r_onset_s);  // exact
        }
    }
}

TEST_CASE("t wave inside an excluded span is flagged") {
    auto p = clean_params();
    auto [raw, truth] = signalgen::synthesize_ecg(p, 30.0, 250.0, 43);
    auto filtered = bandpass_filter(raw);
    auto peaks = detect_r_peaks(filtered);
    REQUIRE(peaks.size() > 5);
    // mask the whole T region of the third beat
    double r3 = peaks[3];
    std::vector<ecg::SpikeSpan> spans{{r3 + 0.10, r3 + 0.60}};
    auto beats = delineate(filtered, peaks, spans);
    CHECK(beats[3].has_flag(Reject::t_offset_not_found));
    CHECK(!beats[3].accepted());
}

TEST_CASE("interval QC: clinical bounds") {
    std::vector<BeatAnnotation> beats;
    for (int i = 0; i < 20; i++) beats.push_back(beat(i, i * 0.9, 0.9, 0.38));
    beats[7].rr_prev_s = 0.1;  // below any plausible clinical floor
    auto [accepted, report] = apply_interval_qc(beats);
    CHECK(report.beats_total == 20);
    CHECK(report.beats_accepted == 19);
    CHECK(report.rejection_histogram.at("rr_out_of_range") == 1);
    for (const auto& b : accepted) CHECK(b.index != 7);
}

TEST_CASE("interval QC: clean input survives fully") {
    std::vector<BeatAnnotation> beats;
    for (int i = 0; i < 120; i++) beats.push_back(beat(i, i * 0.9, 0.9, 0.38));
    auto [accepted, report] = apply_interval_qc(beats);
    CHECK(report.survival_fraction == 1.0);
    CHECK(report.instance_accepted);
    CHECK(accepted.size() == 120);
}

TEST_CASE("interval QC: heavy corruption rejects the instance") {
    std::vector<BeatAnnotation> beats;
    for (int i = 0; i < 100; i++) {
        auto b = beat(i, i * 0.9, 0.9, 0.38);
        if (i >= 5) {
            b.add_flag(Reject::t_offset_not_found);
            b.t_offset_s.reset();
            b.qt_s.reset();
        }
        beats.push_back(b);
    }
    auto [accepted, report] = apply_interval_qc(beats);
    CHECK(report.survival_fraction <= 0.05);
    CHECK(!report.instance_accepted);
}

TEST_CASE("interval QC: survival gate needs both rate and floor") {
    // 6 clean beats of 10: survival 0.6 but below the 8-beat floor
    std::vector<BeatAnnotation> beats;
    for (int i = 0; i < 10; i++) {
        auto b = beat(i, i * 0.9, 0.9, 0.38);
        if (i >= 6) b.add_flag(Reject::qt_out_of_range);
        beats.push_back(b);
    }
    auto [accepted, report] = apply_interval_qc(beats);
    CHECK(report.survival_fraction == doctest::Approx(0.6));
    CHECK(!report.instance_accepted);
    CHECK(report.instance_accepted ==
          (report.survival_fraction >= 0.10 && report.beats_accepted >= 8));
}

TEST_CASE("interval QC: robust outlier pass and idempotence") {
    std::vector<BeatAnnotation> beats;
    Rng rng(4);
    for (int i = 0; i < 60; i++)
        beats.push_back(beat(i, i * 0.9, 0.9 + rng.normal(0.0, 0.01), 0.38 + rng.normal(0.0, 0.004)));
    beats[30].qt_s = 0.55;  // inside clinical bounds but a gross outlier
    auto [accepted, report] = apply_interval_qc(beats);
    CHECK(report.rejection_histogram.count("qt_outlier"));
    CHECK(report.beats_accepted < 60);

    auto [accepted2, report2] = apply_interval_qc(accepted);
    CHECK(accepted2.size() == accepted.size());
    CHECK(report2.beats_accepted == report2.beats_total);
    for (std::size_t i = 0; i < accepted.size(); i++) {
        CHECK(accepted2[i].index == accepted[i].index);
        CHECK(accepted2[i].rr_prev_s == accepted[i].rr_prev_s);
    }
}

TEST_CASE("interval QC: accepted output is time sorted with increasing fiducials") {
    auto p = clean_params();
    p.noise_std_mv = p.noise_std_for_snr_db(22.0);
    p.spike_rate_per_min = 3.0;
    auto [raw, truth] = signalgen::synthesize_ecg(p, 120.0, 250.0, 44);
    auto analysis = ecg::process_recording(raw);
    double prev = -1.0;
    for (const auto& b : analysis.accepted) {
        REQUIRE(b.r_onset_s.has_value());
        REQUIRE(b.t_offset_s.has_value());
        CHECK(*b.r_onset_s < b.r_peak_s);
        CHECK(b.r_peak_s < *b.t_offset_s);
        CHECK(b.r_peak_s > prev);
        prev = b.r_peak_s;
    }
    CHECK(analysis.report.instance_accepted);
}

TEST_CASE("empty input yields an empty, rejected report") {
    auto [accepted, report] = apply_interval_qc({});
    CHECK(report.beats_total == 0);
    CHECK(report.survival_fraction == 0.0);
    CHECK(!report.instance_accepted);
}

}  // TEST_SUITE
