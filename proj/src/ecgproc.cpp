#include "sweetdeep/ecgproc.hpp"

#include <algorithm>
#include <cmath>

#include "sweetdeep/kernels.hpp"

namespace sweetdeep::ecg {

void EcgRecording::validate() const {
    if (fs_hz < 100.0) throw ParamError("EcgRecording: sampling rate must be >= 100 Hz");
    if (samples_mv.empty()) throw ParamError("EcgRecording: no samples");
    for (double v : samples_mv)
        if (!std::isfinite(v)) throw ParamError("EcgRecording: non-finite sample");
}

const char* reject_name(Reject r) {
    switch (r) {
        case Reject::r_onset_not_found: return "r_onset_not_found";
        case Reject::t_offset_not_found: return "t_offset_not_found";
        case Reject::rr_out_of_range: return "rr_out_of_range";
        case Reject::qt_out_of_range: return "qt_out_of_range";
        case Reject::rr_outlier: return "rr_outlier";
        case Reject::qt_outlier: return "qt_outlier";
    }
    return "unknown";
}

bool BeatAnnotation::has_flag(Reject r) const {
    return std::find(quality_flags.begin(), quality_flags.end(), r) != quality_flags.end();
}

void BeatAnnotation::add_flag(Reject r) {
    if (!has_flag(r)) quality_flags.push_back(r);
}

// ── Butterworth biquad filtering ─────────────────────────

namespace {

struct Biquad {
    double b0, b1, b2, a1, a2;  // normalized (a0 = 1)
};

// RBJ cookbook sections; Butterworth Q values per cascaded pair.
Biquad design_biquad(bool highpass, double fc, double fs, double q) {
    double w0 = 2.0 * M_PI * fc / fs;
    double cw = std::cos(w0), sw = std::sin(w0);
    double alpha = sw / (2.0 * q);
    double a0 = 1.0 + alpha;
    Biquad s{};
    if (highpass) {
        s.b0 = (1.0 + cw) / 2.0 / a0;
        s.b1 = -(1.0 + cw) / a0;
        s.b2 = (1.0 + cw) / 2.0 / a0;
    } else {
        s.b0 = (1.0 - cw) / 2.0 / a0;
        s.b1 = (1.0 - cw) / a0;
        s.b2 = (1.0 - cw) / 2.0 / a0;
    }
    s.a1 = (-2.0 * cw) / a0;
    s.a2 = (1.0 - alpha) / a0;
    return s;
}

std::vector<Biquad> butterworth_sections(bool highpass, double fc, double fs, int order) {
    if (order % 2 != 0) throw ParamError("filter order must be even");
    std::vector<Biquad> sections;
    int pairs = order / 2;
    for (int k = 0; k < pairs; k++) {
        // analog prototype pole angle for the k-th conjugate pair
        double theta = M_PI * (2.0 * k + 1.0) / (2.0 * order);
        double q = 1.0 / (2.0 * std::sin(theta));
        sections.push_back(design_biquad(highpass, fc, fs, q));
    }
    return sections;
}

void filter_forward(const Biquad& s, std::vector<double>& x) {
    double z1 = 0.0, z2 = 0.0;  // transposed direct form II
    for (double& v : x) {
        double in = v;
        double out = s.b0 * in + z1;
        z1 = s.b1 * in - s.a1 * out + z2;
        z2 = s.b2 * in - s.a2 * out;
        v = out;
    }
}

// Forward-backward application with odd-reflection padding at both ends.
void filtfilt(const std::vector<Biquad>& sections, std::vector<double>& x, int padlen) {
    const int n = int(x.size());
    padlen = std::min(padlen, n - 1);
    if (padlen < 0) padlen = 0;

    std::vector<double> ext;
    ext.reserve(std::size_t(n) + 2 * padlen);
    for (int i = padlen; i >= 1; i--) ext.push_back(2.0 * x[0] - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (int i = 1; i <= padlen; i++) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

    for (const Biquad& s : sections) filter_forward(s, ext);
    std::reverse(ext.begin(), ext.end());
    for (const Biquad& s : sections) filter_forward(s, ext);
    std::reverse(ext.begin(), ext.end());

    std::copy(ext.begin() + padlen, ext.begin() + padlen + n, x.begin());
}

std::vector<double> bandpass_samples(const std::vector<double>& in, double fs,
                                     const FilterSpec& spec) {
    std::vector<double> x = in;
    double mean = vec_mean(x);
    for (double& v : x) v -= mean;

    // long enough for the high-pass transient to settle inside the padding
    int padlen = int(3.0 * fs / spec.low_hz);
    auto hp = butterworth_sections(true, spec.low_hz, fs, spec.hp_order);
    auto lp = butterworth_sections(false, spec.high_hz, fs, spec.lp_order);
    hp.insert(hp.end(), lp.begin(), lp.end());
    filtfilt(hp, x, padlen);
    return x;
}

}  // namespace

EcgRecording bandpass_filter(const EcgRecording& rec, const FilterSpec& spec) {
    rec.validate();
    if (spec.high_hz >= rec.fs_hz / 2.0)
        throw ParamError("bandpass_filter: passband upper edge must be below fs/2");
    if (spec.low_hz <= 0.0 || spec.low_hz >= spec.high_hz)
        throw ParamError("bandpass_filter: invalid passband");

    EcgRecording out = rec;
    out.samples_mv = bandpass_samples(rec.samples_mv, rec.fs_hz, spec);
    return out;
}

// ── Spike detection ──────────────────────────────────────

namespace {

// Robust per-beat scale: median of |x| maxima over disjoint 1 s windows.
// Every window at physiological heart rates contains one R peak, so the
// median tracks the QRS amplitude and ignores a minority of spike windows.
double windowed_max_median(const std::vector<double>& absx, int win) {
    std::vector<double> maxima;
    for (std::size_t start = 0; start < absx.size(); start += std::size_t(win)) {
        std::size_t stop = std::min(absx.size(), start + std::size_t(win));
        double m = 0.0;
        for (std::size_t i = start; i < stop; i++) m = std::max(m, absx[i]);
        maxima.push_back(m);
    }
    return vec_median(std::move(maxima));
}

}  // namespace

std::vector<SpikeSpan> detect_spikes(const EcgRecording& rec, const QcOptions& opt) {
    const double fs = rec.fs_hz;
    const int n = int(rec.samples_mv.size());
    const int win = std::max(1, int(std::lround(fs)));

    std::vector<double> absx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; i++) absx[std::size_t(i)] = std::fabs(rec.samples_mv[std::size_t(i)]);
    std::vector<double> slope(std::size_t(n), 0.0);
    for (int i = 1; i < n; i++)
        slope[std::size_t(i)] = std::fabs(rec.samples_mv[std::size_t(i)] - rec.samples_mv[std::size_t(i - 1)]) * fs;

    double amp_scale = windowed_max_median(absx, win);
    double slope_scale = windowed_max_median(slope, win);
    double amp_thr = opt.spike_amp_factor * amp_scale;
    double slope_thr = opt.spike_slope_factor * slope_scale;

    std::vector<SpikeSpan> spans;
    int i = 0;
    while (i < n) {
        bool hit = (amp_scale > 0.0 && absx[std::size_t(i)] > amp_thr) ||
                   (slope_scale > 0.0 && slope[std::size_t(i)] > slope_thr);
        if (!hit) {
            i++;
            continue;
        }
        int j = i;
        while (j < n && ((amp_scale > 0.0 && absx[std::size_t(j)] > amp_thr) ||
                         (slope_scale > 0.0 && slope[std::size_t(j)] > slope_thr)))
            j++;
        double lo = std::max(0.0, double(i) / fs - opt.spike_guard_s);
        double hi = std::min(double(n) / fs, double(j) / fs + opt.spike_guard_s);
        if (!spans.empty() && lo <= spans.back().end_s)
            spans.back().end_s = std::max(spans.back().end_s, hi);
        else
            spans.push_back({lo, hi});
        i = j;
    }
    return spans;
}

// ── R-peak detection ─────────────────────────────────────

namespace {

struct Candidate {
    int sample;
    double height;  // integrated-energy peak height
};

std::vector<Candidate> energy_peaks(const std::vector<double>& mwi, double fs, double min_sep_s) {
    std::vector<Candidate> peaks;
    const int n = int(mwi.size());
    const int min_sep = std::max(1, int(std::lround(min_sep_s * fs)));
    for (int i = 1; i + 1 < n; i++) {
        if (!(mwi[std::size_t(i)] > mwi[std::size_t(i - 1)] && mwi[std::size_t(i)] >= mwi[std::size_t(i + 1)]))
            continue;
        if (!peaks.empty() && i - peaks.back().sample < min_sep) {
            if (mwi[std::size_t(i)] > peaks.back().height)
                peaks.back() = {i, mwi[std::size_t(i)]};
            continue;
        }
        peaks.push_back({i, mwi[std::size_t(i)]});
    }
    return peaks;
}

bool in_excluded(double t, const std::vector<SpikeSpan>& spans) {
    for (const auto& s : spans)
        if (s.contains(t)) return true;
    return false;
}

}  // namespace

std::vector<double> detect_r_peaks(const EcgRecording& rec, const std::vector<SpikeSpan>& excluded,
                                   const QcOptions& opt) {
    const double fs = rec.fs_hz;
    const int n = int(rec.samples_mv.size());
    if (n < int(fs)) return {};

    // Mask excluded spans so artifacts cannot steer the adaptive threshold.
    std::vector<double> x = rec.samples_mv;
    for (const auto& s : excluded) {
        int lo = std::max(0, int(std::floor(s.begin_s * fs)));
        int hi = std::min(n, int(std::ceil(s.end_s * fs)));
        for (int i = lo; i < hi; i++) x[std::size_t(i)] = 0.0;
    }

    // QRS emphasis band, then derivative energy with window integration.
    auto band = butterworth_sections(true, 5.0, fs, 2);
    auto lp = butterworth_sections(false, std::min(18.0, rec.fs_hz * 0.45), fs, 2);
    band.insert(band.end(), lp.begin(), lp.end());
    std::vector<double> f = x;
    filtfilt(band, f, int(fs));

    std::vector<double> energy(std::size_t(n), 0.0);
    for (int i = 1; i < n; i++) {
        double d = (f[std::size_t(i)] - f[std::size_t(i - 1)]) * fs;
        energy[std::size_t(i)] = d * d;
    }
    std::vector<double> mwi(std::size_t(n), 0.0);
    const int half_w = std::max(1, int(std::lround(0.075 * fs)));
    kernels::window_sum(energy, half_w, mwi);

    auto candidates = energy_peaks(mwi, fs, 0.20);
    if (candidates.empty()) return {};

    // Adaptive signal/noise levels (Pan-Tompkins style running estimates).
    const int warmup = std::min(n, int(2.0 * fs));
    double spki = 0.0;
    for (int i = 0; i < warmup; i++) spki = std::max(spki, mwi[std::size_t(i)]);
    double npki = spki * 0.1;

    std::vector<int> accepted;
    double last_t = -1e9;
    double rr_avg = 0.8;
    std::vector<Candidate> rejected_since_last;
    for (const auto& c : candidates) {
        double t = double(c.sample) / fs;
        double thr = npki + 0.25 * (spki - npki);
        if (c.height >= thr && t - last_t >= opt.refractory_s) {
            if (!accepted.empty() && t - last_t < 3.0)
                rr_avg = 0.75 * rr_avg + 0.25 * (t - last_t);
            accepted.push_back(c.sample);
            spki = 0.125 * c.height + 0.875 * spki;
            last_t = t;
            rejected_since_last.clear();
        } else if (c.height >= thr && t - last_t < opt.refractory_s) {
            // refractory duplicate; ignore without touching the noise level
        } else {
            npki = 0.125 * c.height + 0.875 * npki;
            rejected_since_last.push_back(c);
            // searchback: a long gap means a missed beat
            if (!accepted.empty() && t - last_t > 1.66 * rr_avg) {
                double half_thr = 0.5 * thr;
                const Candidate* best = nullptr;
                for (const auto& r : rejected_since_last)
                    if (r.height >= half_thr && double(r.sample) / fs - last_t >= opt.refractory_s)
                        if (!best || r.height > best->height) best = &r;
                if (best) {
                    accepted.push_back(best->sample);
                    spki = 0.25 * best->height + 0.75 * spki;
                    last_t = double(best->sample) / fs;
                    rejected_since_last.clear();
                }
            }
        }
    }

    // Refine: R peak is the voltage maximum near the energy peak.
    const int search = int(std::lround(0.10 * fs));
    std::vector<double> out;
    for (int s : accepted) {
        int lo = std::max(0, s - search);
        int hi = std::min(n - 1, s + search);
        int best = lo;
        for (int i = lo; i <= hi; i++)
            if (f[std::size_t(i)] > f[std::size_t(best)]) best = i;
        // final position on the cleaner 0.5-40 Hz trace
        int lo2 = std::max(0, best - 3);
        int hi2 = std::min(n - 1, best + 3);
        int final_best = lo2;
        for (int i = lo2; i <= hi2; i++)
            if (x[std::size_t(i)] > x[std::size_t(final_best)]) final_best = i;
        double t = double(final_best) / fs;
        if (in_excluded(t, excluded)) continue;
        out.push_back(t);
    }

    std::sort(out.begin(), out.end());
    // enforce refractory after refinement, keeping the earlier peak
    std::vector<double> dedup;
    for (double t : out)
        if (dedup.empty() || t - dedup.back() >= opt.refractory_s) dedup.push_back(t);
    return dedup;
}

// ── Delineation ──────────────────────────────────────────

namespace {

std::vector<double> gaussian_taps(double sigma_samples) {
    int half = std::max(1, int(std::lround(4.0 * sigma_samples)));
    std::vector<double> taps(std::size_t(2 * half + 1));
    double sum = 0.0;
    for (int i = -half; i <= half; i++) {
        double v = std::exp(-0.5 * double(i) * double(i) / (sigma_samples * sigma_samples));
        taps[std::size_t(i + half)] = v;
        sum += v;
    }
    for (double& v : taps) v /= sum;
    return taps;
}

// Linear-interpolated time where y crosses `level` between samples i and i+1.
double cross_time(double yi, double yj, int i, double level, double fs) {
    double denom = yj - yi;
    double frac = std::fabs(denom) < 1e-300 ? 0.0 : (level - yi) / denom;
    frac = std::clamp(frac, 0.0, 1.0);
    return (double(i) + frac) / fs;
}

}  // namespace

std::vector<BeatAnnotation> delineate(const EcgRecording& rec, const std::vector<double>& r_peaks,
                                      const std::vector<SpikeSpan>& excluded, const QcOptions& opt) {
    (void)opt;
    const double fs = rec.fs_hz;
    const int n = int(rec.samples_mv.size());

    std::vector<double> x = rec.samples_mv;
    for (const auto& s : excluded) {
        int lo = std::max(0, int(std::floor(s.begin_s * fs)));
        int hi = std::min(n, int(std::ceil(s.end_s * fs)));
        for (int i = lo; i < hi; i++) x[std::size_t(i)] = 0.0;
    }

    // two smoothing scales: fine for QRS edges, coarse for the T wave
    std::vector<double> fine(x.size()), coarse(x.size());
    kernels::convolve_same(x, gaussian_taps(0.006 * fs), fine);
    kernels::convolve_same(x, gaussian_taps(0.012 * fs), coarse);

    std::vector<BeatAnnotation> beats;
    beats.reserve(r_peaks.size());

    for (std::size_t bi = 0; bi < r_peaks.size(); bi++) {
        BeatAnnotation beat;
        beat.index = int(bi);
        beat.r_peak_s = r_peaks[bi];
        if (bi > 0) beat.rr_prev_s = r_peaks[bi] - r_peaks[bi - 1];

        const int r = int(std::lround(r_peaks[bi] * fs));
        const double r_height = (r >= 0 && r < n) ? fine[std::size_t(r)] : 0.0;

        // R onset: walk back from the R peak to the Q/R boundary, i.e. the
        // last point where the fine-smoothed trace is at or below zero
        // (falls back to 5% of the R height when there is no Q trough).
        {
            int limit = std::max(0, r - int(std::lround(0.08 * fs)));
            int found = -1;
            double level = 0.0;
            for (int i = r - 1; i >= limit; i--) {
                if (fine[std::size_t(i)] <= level) {
                    found = i;
                    break;
                }
            }
            if (found < 0) {
                level = 0.05 * r_height;
                for (int i = r - 1; i >= limit; i--) {
                    if (fine[std::size_t(i)] <= level) {
                        found = i;
                        break;
                    }
                }
            }
            if (found >= 0 && r_height > 0.0)
                beat.r_onset_s = cross_time(fine[std::size_t(found)], fine[std::size_t(found + 1)],
                                            found, level, fs);
            else
                beat.add_flag(Reject::r_onset_not_found);
        }

        // T offset: locate the T peak after the QRS, then the decay of the
        // coarse-smoothed wave to exp(-2) of its height above the local
        // isoelectric level (the 2-sigma tail point of a Gaussian-shaped T
        // wave). The zero-phase high-pass leaves a per-beat undershoot, so
        // the level is measured from the post-S / pre-T baseline segment.
        {
            double rr_next = (bi + 1 < r_peaks.size()) ? r_peaks[bi + 1] - r_peaks[bi] : 1e9;
            int w_lo = r + int(std::lround(0.12 * fs));
            int w_hi = r + int(std::lround(std::min(0.60, 0.75 * rr_next) * fs));
            w_hi = std::min(w_hi, n - 1);

            int b_lo = std::max(0, r + int(std::lround(0.06 * fs)));
            int b_hi = std::min(n - 1, r + int(std::lround(0.12 * fs)));
            std::vector<double> base_win;
            for (int i = b_lo; i <= b_hi; i++) base_win.push_back(coarse[std::size_t(i)]);
            double baseline = vec_median(std::move(base_win));

            if (w_lo >= w_hi) {
                beat.add_flag(Reject::t_offset_not_found);
            } else {
                int tp = w_lo;
                for (int i = w_lo; i <= w_hi; i++)
                    if (std::fabs(coarse[std::size_t(i)] - baseline) >
                        std::fabs(coarse[std::size_t(tp)] - baseline))
                        tp = i;
                double t_amp = coarse[std::size_t(tp)] - baseline;
                double sign = t_amp >= 0.0 ? 1.0 : -1.0;
                double mag = std::fabs(t_amp);
                // too flat to be a T wave (masked span or lost wave)
                if (mag < 0.05 * std::max(r_height, 1e-9)) {
                    beat.add_flag(Reject::t_offset_not_found);
                } else {
                    double level = mag * std::exp(-2.0);
                    int limit = std::min(n - 1, tp + int(std::lround(0.35 * fs)));
                    int found = -1;
                    for (int i = tp; i < limit; i++) {
                        if (sign * (coarse[std::size_t(i + 1)] - baseline) <= level) {
                            found = i;
                            break;
                        }
                    }
                    if (found >= 0)
                        beat.t_offset_s =
                            cross_time(sign * (coarse[std::size_t(found)] - baseline),
                                       sign * (coarse[std::size_t(found + 1)] - baseline), found,
                                       level, fs);
                    else
                        beat.add_flag(Reject::t_offset_not_found);
                }
            }
        }

        if (beat.r_onset_s && beat.t_offset_s) {
            beat.qt_s = *beat.t_offset_s - *beat.r_onset_s;
            if (*beat.qt_s <= 0.0) {
                beat.qt_s.reset();
                beat.add_flag(Reject::t_offset_not_found);
            }
        }
        beats.push_back(std::move(beat));
    }
    return beats;
}

// ── Interval quality control ─────────────────────────────

namespace {

// Robust z; zero-MAD collapses to an equality test.
double robust_z(double x, double med, double mad) {
    double s = kMadToSigma * mad;
    if (s < 1e-9) return std::fabs(x - med) < 1e-9 ? 0.0 : 1e18;
    return (x - med) / s;
}

}  // namespace

std::pair<std::vector<BeatAnnotation>, QcReport> apply_interval_qc(
    const std::vector<BeatAnnotation>& beats, const QcOptions& opt) {
    std::vector<BeatAnnotation> work = beats;

    // pass 1: delineation flags already reject; add clinical bounds
    for (auto& b : work) {
        if (b.rr_prev_s && (*b.rr_prev_s < opt.rr_min_s || *b.rr_prev_s > opt.rr_max_s))
            b.add_flag(Reject::rr_out_of_range);
        if (b.qt_s && (*b.qt_s < opt.qt_min_s || *b.qt_s > opt.qt_max_s))
            b.add_flag(Reject::qt_out_of_range);
    }

    // pass 2: robust-z outliers, iterated to a fixed point. An RR value
    // participates only while its predecessor beat is still accepted, so the
    // statistics match what a re-run on the accepted output would see.
    auto accepted_in = [&](const std::vector<BeatAnnotation>& v, int index) {
        for (const auto& b : v)
            if (b.index == index) return b.accepted();
        return false;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<double> rrs, qts;
        for (const auto& b : work) {
            if (!b.accepted()) continue;
            if (b.rr_prev_s && accepted_in(work, b.index - 1)) rrs.push_back(*b.rr_prev_s);
            if (b.qt_s) qts.push_back(*b.qt_s);
        }
        double rr_med = vec_median(rrs), rr_mad = vec_mad(rrs, rr_med);
        double qt_med = vec_median(qts), qt_mad = vec_mad(qts, qt_med);
        for (auto& b : work) {
            if (!b.accepted()) continue;
            if (!rrs.empty() && b.rr_prev_s && accepted_in(work, b.index - 1) &&
                std::fabs(robust_z(*b.rr_prev_s, rr_med, rr_mad)) > opt.z_max) {
                b.add_flag(Reject::rr_outlier);
                changed = true;
            }
            if (!qts.empty() && b.qt_s &&
                std::fabs(robust_z(*b.qt_s, qt_med, qt_mad)) > opt.z_max) {
                b.add_flag(Reject::qt_outlier);
                changed = true;
            }
        }
    }

    QcReport report;
    report.beats_total = long(work.size());
    std::vector<BeatAnnotation> accepted;
    for (const auto& b : work) {
        if (b.accepted())
            accepted.push_back(b);
        else
            for (Reject r : b.quality_flags) report.rejection_histogram[reject_name(r)]++;
    }
    // invalidate RR intervals that now span a rejected beat
    for (auto& b : accepted) {
        bool prev_ok = false;
        for (const auto& a : accepted)
            if (a.index == b.index - 1) prev_ok = true;
        if (!prev_ok) b.rr_prev_s.reset();
    }

    report.beats_accepted = long(accepted.size());
    report.survival_fraction =
        report.beats_total == 0 ? 0.0 : double(report.beats_accepted) / double(report.beats_total);
    report.instance_accepted = report.survival_fraction >= opt.survival_min &&
                               report.beats_accepted >= opt.min_beats;
    return {std::move(accepted), report};
}

EcgAnalysis process_recording(const EcgRecording& raw, const QcOptions& opt) {
    EcgAnalysis a;
    a.filtered = bandpass_filter(raw, opt.filter);
    a.spikes = detect_spikes(a.filtered, opt);
    a.r_peaks = detect_r_peaks(a.filtered, a.spikes, opt);
    a.beats = delineate(a.filtered, a.r_peaks, a.spikes, opt);
    auto [accepted, report] = apply_interval_qc(a.beats, opt);
    a.accepted = std::move(accepted);
    a.report = report;
    return a;
}

}  // namespace sweetdeep::ecg
