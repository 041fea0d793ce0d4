#include "sweetdeep/signalgen.hpp"

#include <algorithm>
#include <cmath>

#include "sweetdeep/features.hpp"
#include "sweetdeep/kernels.hpp"

namespace sweetdeep::signalgen {

// ── Template validation and analytic fiducials ───────────

void BeatTemplateParams::validate() const {
    for (const WaveParams* w : {&p, &q, &r, &s, &t})
        if (!(w->width_s > 0.0)) throw ParamError("BeatTemplateParams: wave width must be > 0");
    if (!(hr_mean_bpm > 0.0)) throw ParamError("BeatTemplateParams: heart rate must be > 0");
    if (rr_std_s < 0.0) throw ParamError("BeatTemplateParams: RR std must be >= 0");
    if (!(qt_base_s > 0.0)) throw ParamError("BeatTemplateParams: QT base must be > 0");
    double min_rr = 60.0 / hr_mean_bpm - 4.0 * rr_std_s;
    if (!(qt_base_s < min_rr))
        throw ParamError("BeatTemplateParams: QT base must fit inside the minimum RR interval");
    if (spike_rate_per_min < 0.0) throw ParamError("BeatTemplateParams: spike rate must be >= 0");
    if (noise_std_mv < 0.0) throw ParamError("BeatTemplateParams: noise std must be >= 0");
    if (!(r.amplitude_mv > 0.0)) throw ParamError("BeatTemplateParams: R amplitude must be > 0");
}

double BeatTemplateParams::r_onset_offset_s() const {
    // Crossing point between the Q trough and the R peak where the R
    // Gaussian overtakes |Q|; with no Q wave, fall back to R center - 2 sigma.
    double aq = std::fabs(q.amplitude_mv);
    auto r_env = [&](double x) {
        double d = x - r.center_s;
        return r.amplitude_mv * std::exp(-d * d / (2.0 * r.width_s * r.width_s));
    };
    auto q_env = [&](double x) {
        double d = x - q.center_s;
        return aq * std::exp(-d * d / (2.0 * q.width_s * q.width_s));
    };
    if (aq <= 0.0 || q.center_s >= r.center_s || r_env(q.center_s) >= aq)
        return r.center_s - 2.0 * r.width_s;
    double lo = q.center_s, hi = r.center_s;
    for (int it = 0; it < 80; it++) {
        double mid = 0.5 * (lo + hi);
        if (r_env(mid) - q_env(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double BeatTemplateParams::signal_power_mv2() const {
    // integral of (A exp(-t^2/2s^2))^2 over a beat = A^2 s sqrt(pi)
    double energy = 0.0;
    for (const WaveParams* w : {&p, &q, &r, &s, &t})
        energy += w->amplitude_mv * w->amplitude_mv * w->width_s * std::sqrt(M_PI);
    return energy / (60.0 / hr_mean_bpm);
}

double BeatTemplateParams::noise_std_for_snr_db(double snr_db) const {
    return std::sqrt(signal_power_mv2() / std::pow(10.0, snr_db / 10.0));
}

// ── Trace synthesis ──────────────────────────────────────

std::pair<ecg::EcgRecording, GroundTruth> synthesize_ecg(const BeatTemplateParams& params,
                                                         double duration_s, double fs_hz,
                                                         std::uint64_t seed) {
    params.validate();
    if (!(duration_s > 0.0)) throw ParamError("synthesize_ecg: duration must be > 0");
    if (!(fs_hz >= 100.0)) throw ParamError("synthesize_ecg: fs must be >= 100 Hz");

    Rng rng(seed);
    auto rr_rng = rng.fork("rr");
    auto wander_rng = rng.fork("wander");
    auto noise_rng = rng.fork("noise");
    auto spike_rng = rng.fork("spikes");

    const double mean_rr = 60.0 / params.hr_mean_bpm;
    const double onset_off = params.r_onset_offset_s();
    const double t_off = params.t_offset_offset_s();
    const double start_margin = 0.4;
    const double end_margin = std::max(0.45, t_off + 4.0 * params.t.width_s);

    GroundTruth truth;
    double t = start_margin;
    while (t < duration_s - end_margin) {
        truth.beats.push_back({t, t + onset_off, t + t_off});
        t += rr_rng.truncated_normal(mean_rr, params.rr_std_s, 4.0);
    }

    // flatten beats into sorted Gaussian terms (T center derived from QT)
    const double t_center = t_off - 2.0 * params.t.width_s;
    std::vector<kernels::GaussTerm> terms;
    double cutoff = 0.0;
    for (const auto& beat : truth.beats) {
        auto add = [&](const WaveParams& w, double center) {
            if (w.amplitude_mv == 0.0) return;
            terms.push_back({beat.r_peak_s + center, w.amplitude_mv,
                             1.0 / (2.0 * w.width_s * w.width_s)});
            cutoff = std::max(cutoff, std::fabs(center) + 6.0 * w.width_s);
        };
        add(params.p, params.p.center_s);
        add(params.q, params.q.center_s);
        add(params.r, params.r.center_s);
        add(params.s, params.s.center_s);
        add(params.t, t_center);
    }
    std::sort(terms.begin(), terms.end(),
              [](const kernels::GaussTerm& a, const kernels::GaussTerm& b) {
                  return a.center < b.center;
              });

    const std::size_t n = std::size_t(std::llround(duration_s * fs_hz));
    ecg::EcgRecording rec;
    rec.fs_hz = fs_hz;
    rec.samples_mv.assign(n, 0.0);
    kernels::add_gaussians(rec.samples_mv, 0.0, 1.0 / fs_hz, terms, cutoff);

    if (params.wander_amp_mv > 0.0) {
        double phase = wander_rng.uniform(0.0, 2.0 * M_PI);
        for (std::size_t i = 0; i < n; i++)
            rec.samples_mv[i] += params.wander_amp_mv *
                                 std::sin(2.0 * M_PI * params.wander_freq_hz * double(i) / fs_hz + phase);
    }
    if (params.noise_std_mv > 0.0)
        for (std::size_t i = 0; i < n; i++)
            rec.samples_mv[i] += noise_rng.normal(0.0, params.noise_std_mv);

    int n_spikes = spike_rng.poisson(params.spike_rate_per_min * duration_s / 60.0);
    for (int k = 0; k < n_spikes; k++) {
        double dur = spike_rng.uniform(0.020, 0.080);
        double begin = spike_rng.uniform(0.0, std::max(1e-9, duration_s - dur));
        double sign = spike_rng.uniform() < 0.5 ? 1.0 : -1.0;
        std::size_t lo = std::size_t(std::llround(begin * fs_hz));
        std::size_t hi = std::min(n, std::size_t(std::llround((begin + dur) * fs_hz)));
        for (std::size_t i = lo; i < hi; i++) rec.samples_mv[i] += sign * params.spike_amp_mv;
        truth.spikes.push_back({begin, begin + dur});
    }
    std::sort(truth.spikes.begin(), truth.spikes.end(),
              [](const ecg::SpikeSpan& a, const ecg::SpikeSpan& b) { return a.begin_s < b.begin_s; });

    return {std::move(rec), std::move(truth)};
}

// ── Cohort synthesis ─────────────────────────────────────

namespace {

// meal-anchored recording slots, seconds of day
constexpr std::array<double, 6> kSlotAnchors = {7.5 * 3600.0,  9.5 * 3600.0,  12.5 * 3600.0,
                                                14.5 * 3600.0, 19.0 * 3600.0, 21.0 * 3600.0};

enum Group { kEcg, kPpg, kBia, kAge };

Group group_of(int feature) {
    if (feature < 3) return kEcg;
    if (feature < 13) return kPpg;
    if (feature < 23) return kBia;
    return kAge;
}

const GroupModulation& mod_of(const CohortSpec& spec, Group g) {
    switch (g) {
        case kEcg: return spec.ecg_mod;
        case kPpg: return spec.ppg_mod;
        case kBia: return spec.bia_mod;
        default: return spec.age_mod;
    }
}

}  // namespace

CohortSpec CohortSpec::defaults() {
    CohortSpec s;
    auto& f = s.continuous;
    // ECG: T2D shifts QTc up and HRV down (CAN-like direction); values are
    // tunable defaults, not clinical claims
    f[0] = {0.410, 0.025, +0.9, 0.20};   // QTc (s)
    f[1] = {0.050, 0.018, -0.9, 0.004};  // SDNN (s)
    f[2] = {0.042, 0.016, -0.9, 0.003};  // RMSSD (s)
    // PPG-BP: 8 TPR-related, 2 CO-related
    for (int i = 0; i < 8; i++) f[std::size_t(3 + i)] = {1150.0 + 12.0 * i, 140.0, +0.5, 0.0};
    f[11] = {5.4, 0.8, -0.4, 0.1};
    f[12] = {5.1, 0.8, -0.4, 0.1};
    // BIA: BodMag, 4x ConMag, BodDeg, BFM, SMM, TBW, BMR
    f[13] = {520.0, 55.0, -0.2, 1.0};
    for (int i = 0; i < 4; i++) f[std::size_t(14 + i)] = {470.0 - 20.0 * i, 50.0, -0.2, 1.0};
    f[18] = {6.5, 1.1, -0.4, 0.1};
    f[19] = {24.0, 7.0, +0.8, 1.0};   // BFM (kg)
    f[20] = {29.0, 6.0, -0.3, 5.0};   // SMM (kg)
    f[21] = {39.0, 6.0, +0.2, 10.0};  // TBW (kg)
    f[22] = {1520.0, 210.0, +0.3, 600.0};
    // Age
    f[23] = {48.0, 13.0, +0.8, 20.0};
    return s;
}

void CohortSpec::validate() const {
    if (nd_count < 0 || t2d_count < 0 || pd_count < 0)
        throw ParamError("CohortSpec: patient counts must be >= 0");
    if (days < 1 || slots_per_day < 1 || slots_per_day > int(kSlotAnchors.size()))
        throw ParamError("CohortSpec: days >= 1 and 1 <= slots_per_day <= 6 required");
    if (!(instances_per_patient_mean > 0.0))
        throw ParamError("CohortSpec: instances_per_patient_mean must be > 0");
    if (irregular_time_frac < 0.0 || irregular_time_frac > 1.0)
        throw ParamError("CohortSpec: irregular_time_frac must lie in [0, 1]");
    for (const auto& d : continuous)
        if (!(d.sd >= 0.0)) throw ParamError("CohortSpec: feature sd must be >= 0");
}

std::vector<dataset::InstanceRecord> generate_cohort(const CohortSpec& spec) {
    spec.validate();

    const double keep_prob =
        std::min(1.0, spec.instances_per_patient_mean / double(spec.days * spec.slots_per_day));

    std::vector<dataset::InstanceRecord> out;
    auto gen_class = [&](dataset::Label label, int count, const char* prefix) {
        for (int pi = 0; pi < count; pi++) {
            Rng prng = Rng(spec.seed).fork(std::string(prefix) + "-" + std::to_string(pi));

            // latent class shift: ND 0, T2D 1, PD either (bimodal cohort)
            double shift_factor = 0.0;
            if (label == dataset::Label::t2d) shift_factor = 1.0;
            if (label == dataset::Label::pd) shift_factor = prng.uniform() < 0.5 ? 0.0 : 1.0;
            double shift = shift_factor * spec.separation;

            char idbuf[32];
            std::snprintf(idbuf, sizeof idbuf, "%s-%04d", prefix, pi);

            // fixed per-patient draws
            const auto& age_dist = spec.continuous[23];
            double age = prng.normal(age_dist.mean + shift * age_dist.t2d_shift_sd * age_dist.sd,
                                     spec.age_mod.patient_sd * age_dist.sd);
            age = std::clamp(age, 21.0, 90.0);

            const auto& p0 = spec.fh_probs_nd;
            const auto& p1 = spec.fh_probs_t2d;
            std::array<double, 3> fh_probs{};
            double norm = 0.0;
            for (int c = 0; c < 3; c++) {
                fh_probs[std::size_t(c)] =
                    std::max(0.0, p0[std::size_t(c)] + shift * (p1[std::size_t(c)] - p0[std::size_t(c)]));
                norm += fh_probs[std::size_t(c)];
            }
            double u = prng.uniform() * norm;
            int fh = u < fh_probs[0] ? 0 : (u < fh_probs[0] + fh_probs[1] ? 1 : 2);

            std::array<double, 23> patient_effect{};
            for (int fidx = 0; fidx < 23; fidx++) {
                const auto& d = spec.continuous[std::size_t(fidx)];
                patient_effect[std::size_t(fidx)] =
                    prng.normal(0.0, mod_of(spec, group_of(fidx)).patient_sd * d.sd);
            }

            for (int day = 0; day < spec.days; day++) {
                for (int slot = 0; slot < spec.slots_per_day; slot++) {
                    if (keep_prob < 1.0 && prng.uniform() >= keep_prob) continue;

                    double sod;
                    if (prng.uniform() < spec.irregular_time_frac) {
                        sod = prng.uniform(0.0, 86400.0);
                    } else {
                        sod = kSlotAnchors[std::size_t(slot)] +
                              prng.uniform(-spec.jitter_minutes, spec.jitter_minutes) * 60.0;
                    }
                    sod = std::clamp(sod, 0.0, 86400.0 - 1e-6);

                    dataset::InstanceRecord rec;
                    rec.patient_id = idbuf;
                    rec.timestamp_s = double(day) * 86400.0 + sod;
                    rec.label = label;

                    double phi = 2.0 * M_PI * sod / 86400.0;
                    features::EcgFeatures ecgf{};
                    features::ProvidedFeatures prov{};
                    for (int fidx = 0; fidx < 23; fidx++) {
                        const auto& d = spec.continuous[std::size_t(fidx)];
                        const auto& m = mod_of(spec, group_of(fidx));
                        double v = d.mean + shift * d.t2d_shift_sd * d.sd +
                                   patient_effect[std::size_t(fidx)] +
                                   m.circadian_amp * d.sd * std::sin(phi + m.circadian_phase) +
                                   prng.normal(0.0, d.sd);
                        v = std::max(v, d.floor);
                        if (fidx == 0) ecgf.qtc_s = v;
                        else if (fidx == 1) ecgf.sdnn_s = v;
                        else if (fidx == 2) ecgf.rmssd_s = v;
                        else if (fidx < 13) prov.ppg_bp[std::size_t(fidx - 3)] = v;
                        else prov.bia[std::size_t(fidx - 13)] = v;
                    }
                    prov.age_years = age;
                    prov.family_history = fh;
                    rec.features = features::assemble(ecgf, prov, sod);
                    out.push_back(std::move(rec));
                }
            }
        }
    };

    gen_class(dataset::Label::nd, spec.nd_count, "nd");
    gen_class(dataset::Label::t2d, spec.t2d_count, "t2d");
    gen_class(dataset::Label::pd, spec.pd_count, "pd");
    return out;
}

}  // namespace sweetdeep::signalgen
