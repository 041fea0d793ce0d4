// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Everything runs on synthetic data with frozen seeds; tolerances are
// pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "sweetdeep/eval.hpp"
#include "sweetdeep/io.hpp"
#include "sweetdeep/screen.hpp"
#include "sweetdeep/signalgen.hpp"

using namespace sweetdeep;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void criterion(int n, bool ok, const std::string& what, const std::string& detail = "") {
    std::printf("[criterion %2d] %s  %s%s%s\n", n, ok ? "PASS" : "FAIL", what.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!ok) failures++;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt_s(double v) {
    char b[48];
    std::snprintf(b, sizeof b, "%.2f s", v);
    return b;
}

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

// ── independent formula oracles (kept local to the suite) ──

double oracle_qtc(double qt, double rr) { return qt / std::pow(rr, 1.0 / 3.0); }

double oracle_sdnn(const std::vector<double>& rr) {
    double sum = 0.0, sum_sq = 0.0;
    for (double x : rr) {
        sum += x;
        sum_sq += x * x;
    }
    double n = double(rr.size());
    return std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0)));
}

double oracle_rmssd(const std::vector<double>& rr, const std::vector<bool>& ok) {
    double acc = 0.0;
    long m = 0;
    for (std::size_t i = 0; i + 1 < rr.size(); i++) {
        if (!ok[i]) continue;
        double d = rr[i + 1] - rr[i];
        acc += d * d;
        m++;
    }
    return std::sqrt(acc / double(m));
}

bool close_rel(double a, double b, double tol) {
    double denom = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / denom < tol || std::fabs(a - b) < 1e-15;
}

}  // namespace

// ── criterion bodies ─────────────────────────────────────

static void run_criterion_1() {
    Timer timer;
    Rng rng(1001);
    bool ok = true;

    for (int rep = 0; rep < 1000 && ok; rep++) {
        int n = 2 + int(rng.uniform_int(60));
        std::vector<double> rr;
        std::vector<bool> pair_ok;
        std::vector<ecg::BeatAnnotation> beats;
        for (int i = 0; i < n; i++) {
            rr.push_back(rng.uniform(0.4, 1.8));
            ecg::BeatAnnotation b;
            b.qt_s = rng.uniform(0.25, 0.55);
            b.rr_prev_s = rr.back();
            beats.push_back(b);
            if (i > 0) pair_ok.push_back(rng.uniform() < 0.85);
        }
        if (std::find(pair_ok.begin(), pair_ok.end(), true) == pair_ok.end()) pair_ok[0] = true;

        if (!close_rel(features::compute_sdnn(rr), oracle_sdnn(rr), 1e-12)) ok = false;
        if (!close_rel(features::compute_rmssd(rr, pair_ok), oracle_rmssd(rr, pair_ok), 1e-12))
            ok = false;
        std::vector<double> per_beat;
        for (const auto& b : beats) per_beat.push_back(oracle_qtc(*b.qt_s, *b.rr_prev_s));
        std::sort(per_beat.begin(), per_beat.end());
        double med = per_beat.size() % 2 ? per_beat[per_beat.size() / 2]
                                         : 0.5 * (per_beat[per_beat.size() / 2 - 1] +
                                                  per_beat[per_beat.size() / 2]);
        if (!close_rel(features::compute_qtc(beats), med, 1e-12)) ok = false;

        // metric formulas on random counts
        eval::ConfusionCounts c{1 + long(rng.uniform_int(400)), 1 + long(rng.uniform_int(400)),
                                1 + long(rng.uniform_int(400)), 1 + long(rng.uniform_int(400))};
        auto r = eval::metrics_from_counts(c);
        double tp = double(c.tp), fp = double(c.fp), fn = double(c.fn), tn = double(c.tn);
        if (!close_rel(*r.accuracy, (tp + tn) / (tp + fp + fn + tn), 1e-12)) ok = false;
        if (!close_rel(*r.sensitivity, tp / (tp + fn), 1e-12)) ok = false;
        if (!close_rel(*r.specificity, tn / (tn + fp), 1e-12)) ok = false;
        if (!close_rel(*r.macro_f1,
                       0.5 * (2 * tp / (2 * tp + fp + fn) + 2 * tn / (2 * tn + fp + fn)), 1e-12))
            ok = false;
    }
    double t = timer.seconds();
    criterion(1, ok && t < 5.0,
              "formula oracles match brute force on 1000 random inputs (< 1e-12 rel)", fmt_s(t));
}

static void run_criterion_2() {
    auto r = eval::metrics_from_counts({98, 25, 25, 137});
    bool ok = std::fabs(*r.accuracy * 100.0 - 82.5) <= 0.1 &&
              std::fabs(*r.sensitivity * 100.0 - 79.7) <= 0.1 &&
              std::fabs(*r.specificity * 100.0 - 84.6) <= 0.1;
    char detail[96];
    std::snprintf(detail, sizeof detail, "acc %.2f sens %.2f spec %.2f", *r.accuracy * 100.0,
                  *r.sensitivity * 100.0, *r.specificity * 100.0);
    criterion(2, ok, "back-solved counts reproduce the published patient-level row (±0.1 pp)",
              detail);
}

static void run_criterion_3() {
    model::ModelConfig baseline;
    long params = model::count_params(baseline);
    criterion(3, params == 2986 && params < 3000, "baseline parameter budget",
              "count_params = " + std::to_string(params));
}

static void run_criterion_4() {
    Timer timer;
    // 512-instance batch drawn from the synthetic cohort, normalized
    auto spec = signalgen::CohortSpec::defaults();
    spec.nd_count = 16;
    spec.t2d_count = 16;
    spec.pd_count = 0;
    spec.seed = 321;
    auto records = signalgen::generate_cohort(spec);
    auto norm = dataset::fit_normalizer(records);
    records = dataset::apply_normalizer(norm, records);

    Matrix x(512, features::kFeatureCount);
    std::vector<int> y;
    for (int i = 0; i < 512; i++) {
        const auto& r = records[std::size_t(i) % records.size()];
        for (int j = 0; j < features::kFeatureCount; j++) x(i, j) = r.features[std::size_t(j)];
        y.push_back(int(r.label));
    }

    model::ModelConfig cfg;
    cfg.seed = 2024;
    auto params = model::init_params(cfg);
    auto grads = model::batch_gradients(params, x, y);
    auto gview = model::grad_view(grads);
    auto pview = model::param_view(params);

    const double h = 1e-5;
    double worst = 0.0;
    bool ok = long(pview.size()) == model::count_params(cfg);
    for (std::size_t i = 0; i < pview.size(); i++) {
        double orig = *pview[i];
        *pview[i] = orig + h;
        double up = model::batch_loss(params, x, y);
        *pview[i] = orig - h;
        double down = model::batch_loss(params, x, y);
        *pview[i] = orig;
        double fd = (up - down) / (2.0 * h);
        double denom = std::max({std::fabs(fd), std::fabs(*gview[i]), 1e-6});
        double rel = std::fabs(fd - *gview[i]) / denom;
        worst = std::max(worst, rel);
        if (rel >= 1e-4) ok = false;
    }
    double t = timer.seconds();
    char detail[96];
    std::snprintf(detail, sizeof detail, "%zu params, worst rel err %.2e, %s", pview.size(), worst,
                  fmt_s(t).c_str());
    criterion(4, ok && t < 60.0, "analytic gradients match central differences (512x35 batch)",
              detail);
}

static void run_criterion_5() {
    Timer timer;
    long beats_total = 0, r_peak_ok = 0, t_off_ok = 0;
    long corrupted_total = 0, corrupted_rejected = 0;

    for (int trial = 0; trial < 100; trial++) {
        signalgen::BeatTemplateParams p;
        p.hr_mean_bpm = 55.0 + 2.5 * (trial % 16);
        p.rr_std_s = 0.03;
        p.qt_base_s = 0.36 + 0.002 * (trial % 10);
        p.noise_std_mv = p.noise_std_for_snr_db(22.0);  // SNR >= 20 dB
        p.spike_rate_per_min = trial % 2 ? 3.0 : 0.0;
        auto [raw, truth] = signalgen::synthesize_ecg(p, 120.0, 250.0, 9000 + std::uint64_t(trial));

        auto analysis = ecg::process_recording(raw);

        // fiducial accuracy over clean beats
        for (const auto& tb : truth.beats) {
            bool corrupted = false;
            for (const auto& s : truth.spikes)
                if (s.overlaps(tb.r_onset_s, tb.t_offset_s)) corrupted = true;

            const ecg::BeatAnnotation* match = nullptr;
            for (const auto& b : analysis.accepted)
                if (std::fabs(b.r_peak_s - tb.r_peak_s) <= 0.030)
                    if (!match || std::fabs(b.r_peak_s - tb.r_peak_s) <
                                      std::fabs(match->r_peak_s - tb.r_peak_s))
                        match = &b;

            if (corrupted) {
                corrupted_total++;
                if (!match) corrupted_rejected++;
                continue;
            }
            beats_total++;
            if (match && std::fabs(match->r_peak_s - tb.r_peak_s) <= 0.010) r_peak_ok++;
            if (match && match->t_offset_s &&
                std::fabs(*match->t_offset_s - tb.t_offset_s) <= 0.025)
                t_off_ok++;
        }
    }

    double t = timer.seconds();
    double r_frac = double(r_peak_ok) / double(beats_total);
    double t_frac = double(t_off_ok) / double(beats_total);
    double rejected_frac =
        corrupted_total == 0 ? 1.0 : double(corrupted_rejected) / double(corrupted_total);
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "R-peak %.2f%%, T-offset %.2f%% of %ld beats; %.2f%% of %ld corrupted rejected; %s",
                  r_frac * 100.0, t_frac * 100.0, beats_total, rejected_frac * 100.0,
                  corrupted_total, fmt_s(t).c_str());
    criterion(5,
              r_frac >= 0.95 && t_frac >= 0.95 && rejected_frac >= 0.99 && corrupted_total > 100 &&
                  t < 120.0,
              "delineation accuracy and spike rejection on 100 seeded traces", detail);
}

static void run_criterion_6() {
    // 100 beats, 95 corrupted: survival 0.05 -> excluded, exact rule check
    std::vector<ecg::BeatAnnotation> beats;
    for (int i = 0; i < 100; i++) {
        ecg::BeatAnnotation b;
        b.index = i;
        b.r_peak_s = 0.9 * i;
        b.r_onset_s = b.r_peak_s - 0.02;
        b.t_offset_s = b.r_peak_s + 0.36;
        b.qt_s = 0.38;
        if (i > 0) b.rr_prev_s = 0.9;
        if (i >= 5) b.add_flag(ecg::Reject::t_offset_not_found);
        beats.push_back(b);
    }
    auto [accepted, report] = ecg::apply_interval_qc(beats);
    bool gate_formula = report.instance_accepted ==
                        (report.survival_fraction >= 0.10 && report.beats_accepted >= 8);
    bool ok = report.survival_fraction <= 0.05 && !report.instance_accepted && gate_formula;

    // clean control stays accepted
    std::vector<ecg::BeatAnnotation> clean(beats.begin(), beats.begin() + 5);
    for (int i = 5; i < 100; i++) {
        auto b = beats[std::size_t(i)];
        b.quality_flags.clear();
        b.t_offset_s = b.r_peak_s + 0.36;
        b.qt_s = 0.38;
        clean.push_back(b);
    }
    auto [accepted2, report2] = ecg::apply_interval_qc(clean);
    ok = ok && report2.instance_accepted && report2.survival_fraction == 1.0;
    char detail[96];
    std::snprintf(detail, sizeof detail, "survival %.3f excluded, clean control survival %.3f",
                  report.survival_fraction, report2.survival_fraction);
    criterion(6, ok, "10% survival rule excludes >90%-corrupted instances", detail);
}

static void run_criterion_7() {
    // synthetic 162 ND + 123 T2D patients
    std::vector<dataset::InstanceRecord> records;
    auto add = [&](dataset::Label label, const char* prefix, int count) {
        for (int i = 0; i < count; i++) {
            dataset::InstanceRecord r;
            r.patient_id = std::string(prefix) + std::to_string(i);
            r.label = label;
            r.features.fill(0.5);
            records.push_back(r);
        }
    };
    add(dataset::Label::nd, "nd-", 162);
    add(dataset::Label::t2d, "t2d-", 123);
    auto split = dataset::make_folds(records, 7);

    bool sizes_ok = split.folds[0].size() == 95 && split.folds[1].size() == 95 &&
                    split.folds[2].size() == 95;
    bool disjoint = true;
    std::set<std::string> seen;
    for (int k = 0; k < 3; k++) {
        std::set<std::string> test_set(split.folds[std::size_t(k)].begin(),
                                       split.folds[std::size_t(k)].end());
        for (const auto& id : split.complement(k))
            if (test_set.count(id)) disjoint = false;
        for (const auto& id : split.folds[std::size_t(k)]) {
            if (seen.count(id)) disjoint = false;
            seen.insert(id);
        }
    }
    criterion(7, sizes_ok && disjoint && seen.size() == 285,
              "fold leakage guard and exact 95/95/95 split",
              "folds " + std::to_string(split.folds[0].size()) + "/" +
                  std::to_string(split.folds[1].size()) + "/" +
                  std::to_string(split.folds[2].size()));
}

static void run_criterion_8() {
    Rng rng(888);
    std::vector<dataset::InstanceRecord> train;
    auto add = [&](dataset::Label label, const char* prefix, int count) {
        for (int i = 0; i < count; i++) {
            dataset::InstanceRecord r;
            r.patient_id = std::string(prefix) + std::to_string(i);
            r.label = label;
            for (auto& v : r.features) v = rng.normal();
            train.push_back(r);
        }
    };
    add(dataset::Label::nd, "nd-", 300);
    add(dataset::Label::t2d, "t2d-", 200);

    auto out = dataset::smote_rebalance(train, 5, 4321);
    long n_nd = 0, n_t2d = 0;
    for (const auto& r : out) (r.label == dataset::Label::nd ? n_nd : n_t2d)++;
    bool counts_ok = n_nd == 300 && n_t2d == 300;

    // per-coordinate hull of the minority set
    std::array<double, features::kFeatureCount> lo{}, hi{};
    lo.fill(1e300);
    hi.fill(-1e300);
    for (const auto& r : train)
        if (r.label == dataset::Label::t2d)
            for (int j = 0; j < features::kFeatureCount; j++) {
                lo[std::size_t(j)] = std::min(lo[std::size_t(j)], r.features[std::size_t(j)]);
                hi[std::size_t(j)] = std::max(hi[std::size_t(j)], r.features[std::size_t(j)]);
            }
    bool hull_ok = true;
    for (std::size_t i = train.size(); i < out.size(); i++)
        for (int j = 0; j < features::kFeatureCount; j++)
            if (out[i].features[std::size_t(j)] < lo[std::size_t(j)] - 1e-9 ||
                out[i].features[std::size_t(j)] > hi[std::size_t(j)] + 1e-9)
                hull_ok = false;

    // two-parent segment check with known parents (k = 1)
    std::vector<dataset::InstanceRecord> seg = train;
    dataset::InstanceRecord a = train[0], b = train[0];
    a.patient_id = "ta";
    a.label = dataset::Label::t2d;
    b.patient_id = "tb";
    b.label = dataset::Label::t2d;
    for (auto& v : a.features) v = rng.normal();
    for (auto& v : b.features) v = rng.normal();
    seg.erase(std::remove_if(seg.begin(), seg.end(),
                             [](const dataset::InstanceRecord& r) {
                                 return r.label == dataset::Label::t2d;
                             }),
              seg.end());
    seg.push_back(a);
    seg.push_back(b);
    auto seg_out = dataset::smote_rebalance(seg, 1, 99);
    bool segment_ok = true;
    for (std::size_t i = seg.size(); i < seg_out.size(); i++) {
        double lambda = -1.0;
        for (int j = 0; j < features::kFeatureCount; j++) {
            double denom = b.features[std::size_t(j)] - a.features[std::size_t(j)];
            if (std::fabs(denom) < 1e-12) continue;
            double l = (seg_out[i].features[std::size_t(j)] - a.features[std::size_t(j)]) / denom;
            if (lambda < -0.5)
                lambda = l;
            else if (std::fabs(l - lambda) > 1e-9)
                segment_ok = false;
        }
        if (lambda < -1e-9 || lambda > 1.0 + 1e-9) segment_ok = false;
    }

    // determinism
    auto rerun = dataset::smote_rebalance(train, 5, 4321);
    bool det_ok = rerun.size() == out.size();
    for (std::size_t i = 0; det_ok && i < out.size(); i++)
        if (rerun[i].features != out[i].features) det_ok = false;

    criterion(8, counts_ok && hull_ok && segment_ok && det_ok,
              "SMOTE balances counts with convex-combination synthetics",
              "counts " + std::to_string(n_nd) + "/" + std::to_string(n_t2d));
}

static void run_criterion_9() {
    Timer timer;
    Rng rng(909);
    std::vector<eval::PredLabel> preds, inverted;
    for (int i = 0; i < 10000; i++) {
        double p = rng.uniform();
        int label = rng.uniform() < p ? 1 : 0;
        preds.push_back({p, label});
        inverted.push_back({p, 1 - label});
    }
    double ece_cal = eval::calibration(preds).ece();
    double ece_inv = eval::calibration(inverted).ece();
    double t = timer.seconds();
    char detail[96];
    std::snprintf(detail, sizeof detail, "calibrated %.2f%%, inverted %.2f%%, %s", ece_cal * 100.0,
                  ece_inv * 100.0, fmt_s(t).c_str());
    criterion(9, ece_cal < 0.03 && ece_inv > 0.40 && t < 5.0,
              "ECE separates calibrated from anti-calibrated predictions", detail);
}

// shared across criteria 10-13
struct CvBundle {
    std::vector<dataset::InstanceRecord> cohort;
    eval::CvResult cv;
    eval::CvOptions opt;
};

static CvBundle run_default_cv() {
    CvBundle b;
    auto spec = signalgen::CohortSpec::defaults();
    b.cohort = signalgen::generate_cohort(spec);
    b.opt.net.seed = 12;
    b.opt.fold_seed = 7;
    b.cv = eval::run_cv(b.cohort, b.opt);
    return b;
}

static void run_criterion_10(const CvBundle& b, double cv_seconds) {
    const auto& pr = b.cv.patient_report;
    bool deterministic = true;
    {
        auto again = eval::run_cv(b.cohort, b.opt);
        if (again.patient_preds.size() != b.cv.patient_preds.size()) deterministic = false;
        for (std::size_t i = 0; deterministic && i < again.patient_preds.size(); i++)
            if (again.patient_preds[i].p != b.cv.patient_preds[i].p) deterministic = false;
    }
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "patient acc %.1f%%, patient ECE %.1f%%, instances %ld, %s%s",
                  *pr.rates.accuracy * 100.0, pr.ece * 100.0, b.cv.instance_report.counts.total(),
                  fmt_s(cv_seconds).c_str(), deterministic ? ", deterministic" : ", NONDETERMINISTIC");
    criterion(10,
              *pr.rates.accuracy >= 0.90 && pr.ece <= 0.10 && deterministic &&
                  cv_seconds < 600.0 && pr.counts.total() == 285,
              "end-to-end synthetic benchmark (285 patients, 3-fold CV)", detail);
}

static void run_criterion_11(const CvBundle& b) {
    // aggregation exactness against an independent mean over the raw preds
    bool agg_ok = true;
    {
        std::vector<double> probs{0.125, 0.25, 0.5, 0.875};
        double expect = (0.125 + 0.25 + 0.5 + 0.875) / 4.0;
        if (std::fabs(screen::aggregate_patient(probs) - expect) > 1e-12) agg_ok = false;
    }

    std::vector<screen::PatientOutcome> outcomes;
    std::set<std::string> expected_abstained;
    for (const auto& pp : b.cv.patient_preds) {
        if (screen::in_abstention_band(pp.p, 0.08)) expected_abstained.insert(pp.patient_id);
        outcomes.push_back(
            {screen::make_verdict(pp.patient_id, pp.p, pp.n_instances, 0.5, true, 0.08),
             pp.label});
    }
    std::set<std::string> abstained;
    for (const auto& o : outcomes)
        if (o.verdict.verdict == screen::Verdict::dont_know)
            abstained.insert(o.verdict.patient_id);
    bool set_ok = abstained == expected_abstained;

    auto rep = screen::abstention_report(outcomes);
    bool coverage_ok =
        rep.coverage + double(rep.abstained) / double(rep.total) == 1.0 && rep.total == 285;
    bool direction_ok = rep.retained == 0 ||
                        *rep.retained_metrics.rates.accuracy >=
                            *b.cv.patient_report.rates.accuracy - 1e-12;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "abstained %ld, coverage %.1f%%, retained acc %.1f%% vs overall %.1f%%",
                  rep.abstained, rep.coverage * 100.0,
                  rep.retained > 0 ? *rep.retained_metrics.rates.accuracy * 100.0 : 0.0,
                  *b.cv.patient_report.rates.accuracy * 100.0);
    criterion(11, agg_ok && set_ok && coverage_ok && direction_ok,
              "patient aggregation and abstention exactness", detail);
}

static void run_criterion_12(const CvBundle& b) {
    auto low = eval::rethreshold(b.cv, 0.4);
    auto mid = eval::rethreshold(b.cv, 0.5);
    auto high = eval::rethreshold(b.cv, 0.6);
    auto sens = [](const eval::CvResult& r) { return *r.patient_report.rates.sensitivity; };
    auto spec = [](const eval::CvResult& r) { return *r.patient_report.rates.specificity; };
    bool ok = sens(low) >= sens(mid) && sens(mid) >= sens(high) && spec(low) <= spec(mid) &&
              spec(mid) <= spec(high);
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "sens %.1f/%.1f/%.1f, spec %.1f/%.1f/%.1f at 0.4/0.5/0.6", sens(low) * 100.0,
                  sens(mid) * 100.0, sens(high) * 100.0, spec(low) * 100.0, spec(mid) * 100.0,
                  spec(high) * 100.0);
    criterion(12, ok, "threshold sweep moves sensitivity down and specificity up", detail);
}

static void run_criterion_13() {
    // two full in-process pipeline runs writing every stage artifact
    fs::path base = fs::temp_directory_path() / "sweetdeep-acceptance-13";
    fs::remove_all(base);

    auto run_pipeline = [&](const std::string& tag) {
        fs::path dir = base / tag;
        fs::create_directories(dir);
        auto spec = signalgen::CohortSpec::defaults();
        spec.nd_count = 30;
        spec.t2d_count = 24;
        spec.pd_count = 0;
        spec.seed = 555;
        auto cohort = signalgen::generate_cohort(spec);
        io::write_instances_jsonl(cohort, (dir / "cohort.jsonl").string());

        auto records = io::read_instances_jsonl((dir / "cohort.jsonl").string());
        auto folds = dataset::make_folds(records, 7);
        io::write_folds(folds, (dir / "folds.json").string());

        eval::CvOptions opt;
        opt.net.epochs = 20;
        opt.net.seed = 99;
        opt.fold_seed = 7;
        auto tm = eval::train_on(records, opt, derive_seed(opt.net.seed, "full"));
        model::save_params(tm.params, (dir / "model.json").string());

        auto cv = eval::run_cv(records, opt);
        io::write_metrics_json(cv.instance_report, cv.patient_report,
                               (dir / "metrics.json").string());
        return dir;
    };

    auto d1 = run_pipeline("run1");
    auto d2 = run_pipeline("run2");
    bool ok = true;
    for (const char* f : {"cohort.jsonl", "folds.json", "model.json", "metrics.json"}) {
        if (slurp((d1 / f).string()) != slurp((d2 / f).string())) {
            ok = false;
            std::printf("  mismatch in %s\n", f);
        }
    }
    fs::remove_all(base);
    criterion(13, ok, "full pipeline reruns are byte-identical",
              "cohort, folds, weights and metrics compared");
}

int main() {
    std::printf("SweetDeep acceptance suite\n==========================\n");
    run_criterion_1();
    run_criterion_2();
    run_criterion_3();
    run_criterion_4();
    run_criterion_5();
    run_criterion_6();
    run_criterion_7();
    run_criterion_8();
    run_criterion_9();

    Timer cv_timer;
    CvBundle bundle = run_default_cv();
    double cv_seconds = cv_timer.seconds();
    run_criterion_10(bundle, cv_seconds);
    run_criterion_11(bundle);
    run_criterion_12(bundle);
    run_criterion_13();

    std::printf("==========================\n%s (%d failure%s)\n",
                failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED", failures,
                failures == 1 ? "" : "s");
    return failures == 0 ? 0 : 1;
}
