#include "sweetdeep/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace sweetdeep::eval {

// ── Counts and rates ─────────────────────────────────────

ConfusionCounts confusion(std::span<const PredLabel> preds, double threshold) {
    ConfusionCounts c;
    for (const auto& pl : preds) {
        if (!(pl.p >= 0.0 && pl.p <= 1.0)) throw ParamError("confusion: probability outside [0, 1]");
        bool pred_pos = pl.p >= threshold;
        bool is_pos = pl.label == 1;
        if (pred_pos && is_pos) c.tp++;
        else if (pred_pos && !is_pos) c.fp++;
        else if (!pred_pos && is_pos) c.fn++;
        else c.tn++;
    }
    return c;
}

Rates metrics_from_counts(const ConfusionCounts& c) {
    Rates r;
    double tp = double(c.tp), fp = double(c.fp), fn = double(c.fn), tn = double(c.tn);
    if (c.total() > 0) r.accuracy = (tp + tn) / double(c.total());
    if (c.tp + c.fn > 0) r.sensitivity = tp / (tp + fn);
    if (c.tn + c.fp > 0) r.specificity = tn / (tn + fp);
    double dpos = 2.0 * tp + fp + fn;
    double dneg = 2.0 * tn + fp + fn;
    if (dpos > 0.0 && dneg > 0.0) r.macro_f1 = 0.5 * (2.0 * tp / dpos + 2.0 * tn / dneg);
    return r;
}

ConfusionCounts pooled_counts(std::span<const ConfusionCounts> folds) {
    ConfusionCounts out;
    for (const auto& c : folds) {
        out.tp += c.tp;
        out.fp += c.fp;
        out.fn += c.fn;
        out.tn += c.tn;
    }
    return out;
}

// ── Calibration ──────────────────────────────────────────

double CalibrationTable::ece() const {
    if (total == 0) return 0.0;
    double e = 0.0;
    for (const auto& b : bins)
        if (b.count > 0)
            e += double(b.count) / double(total) * std::fabs(b.frac_pos - b.mean_pred);
    return e;
}

CalibrationTable calibration(std::span<const PredLabel> preds) {
    if (preds.empty()) throw DataError("calibration: empty prediction list");
    CalibrationTable t;
    std::array<double, 10> sum_p{}, sum_pos{};
    for (const auto& pl : preds) {
        if (!(pl.p >= 0.0 && pl.p <= 1.0))
            throw ParamError("calibration: probability outside [0, 1]");
        int b = std::min(9, int(pl.p * 10.0));  // last bin closed at 1.0
        t.bins[std::size_t(b)].count++;
        sum_p[std::size_t(b)] += pl.p;
        sum_pos[std::size_t(b)] += pl.label == 1 ? 1.0 : 0.0;
    }
    t.total = long(preds.size());
    for (int b = 0; b < 10; b++) {
        auto& bin = t.bins[std::size_t(b)];
        bin.lo = double(b) / 10.0;
        bin.hi = double(b + 1) / 10.0;
        if (bin.count > 0) {
            bin.mean_pred = sum_p[std::size_t(b)] / double(bin.count);
            bin.frac_pos = sum_pos[std::size_t(b)] / double(bin.count);
        }
    }
    return t;
}

MetricsReport make_report(const std::string& level, std::span<const PredLabel> preds,
                          double threshold) {
    MetricsReport r;
    r.level = level;
    r.threshold = threshold;
    r.counts = confusion(preds, threshold);
    r.rates = metrics_from_counts(r.counts);
    if (!preds.empty()) {
        r.calib = calibration(preds);
        r.ece = r.calib.ece();
    }
    return r;
}

// ── Cross-validation driver ──────────────────────────────

namespace {

Matrix to_matrix(const std::vector<dataset::InstanceRecord>& records,
                 const std::vector<int>& keep) {
    const int width = keep.empty() ? features::kFeatureCount : int(keep.size());
    Matrix x(int(records.size()), width);
    for (std::size_t i = 0; i < records.size(); i++) {
        if (keep.empty()) {
            for (int j = 0; j < width; j++) x(int(i), j) = records[i].features[std::size_t(j)];
        } else {
            for (int j = 0; j < width; j++)
                x(int(i), j) = records[i].features[std::size_t(keep[std::size_t(j)])];
        }
    }
    return x;
}

std::vector<PatientPred> aggregate_by_patient(const std::vector<dataset::InstanceRecord>& records,
                                              const std::vector<PredLabel>& preds) {
    // per-patient empirical mean of the instance probabilities
    std::map<std::string, PatientPred> agg;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < records.size(); i++) {
        auto it = agg.find(records[i].patient_id);
        if (it == agg.end()) {
            order.push_back(records[i].patient_id);
            agg[records[i].patient_id] = {records[i].patient_id, preds[i].p, preds[i].label, 1};
        } else {
            it->second.p += preds[i].p;
            it->second.n_instances++;
        }
    }
    std::vector<PatientPred> out;
    for (const auto& id : order) {
        PatientPred p = agg[id];
        p.p /= double(p.n_instances);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

TrainedModel train_on(const std::vector<dataset::InstanceRecord>& train_records,
                      const CvOptions& opt, std::uint64_t stream_seed) {
    if (train_records.empty()) throw DataError("train_on: empty training set");

    TrainedModel tm;
    tm.keep_features = opt.keep_features;
    tm.normalizer = dataset::fit_normalizer(train_records);
    auto train_n = dataset::apply_normalizer(tm.normalizer, train_records);
    auto balanced =
        dataset::smote_rebalance(train_n, opt.smote_k, derive_seed(stream_seed, "smote"));

    Matrix x = to_matrix(balanced, opt.keep_features);
    std::vector<int> y;
    y.reserve(balanced.size());
    for (const auto& r : balanced) y.push_back(int(r.label));

    model::ModelConfig cfg = opt.net;
    cfg.layer_widths[0] = x.cols;
    cfg.seed = derive_seed(stream_seed, "net");
    auto result = model::train(cfg, x, y);
    tm.params = std::move(result.params);
    tm.trace = std::move(result.trace);
    return tm;
}

std::vector<PredLabel> predict_instances(const TrainedModel& tm,
                                         const std::vector<dataset::InstanceRecord>& records) {
    auto normed = dataset::apply_normalizer(tm.normalizer, records);
    Matrix x = to_matrix(normed, tm.keep_features);
    Matrix probs = model::forward_eval_batch(tm.params, x);
    std::vector<PredLabel> out(records.size());
    for (std::size_t i = 0; i < records.size(); i++)
        out[i] = {probs(int(i), 1), records[i].label == dataset::Label::t2d ? 1 : 0};
    return out;
}

CvResult run_cv(const std::vector<dataset::InstanceRecord>& records, const CvOptions& opt) {
    auto binary = dataset::binary_subset(records);
    CvResult result;
    result.folds = dataset::make_folds(binary, opt.fold_seed);

    for (int k = 0; k < 3; k++) {
        auto train_recs = dataset::filter_by_patients(binary, result.folds.complement(k));
        auto test_recs =
            dataset::filter_by_patients(binary, result.folds.folds[std::size_t(k)]);

        TrainedModel tm =
            train_on(train_recs, opt, derive_seed(opt.net.seed, "fold-" + std::to_string(k)));
        auto preds = predict_instances(tm, test_recs);

        result.fold_instance_counts[std::size_t(k)] = confusion(preds, opt.threshold);
        auto patient = aggregate_by_patient(test_recs, preds);
        std::vector<PredLabel> patient_pl;
        for (const auto& pp : patient) patient_pl.push_back({pp.p, pp.label});
        result.fold_patient_counts[std::size_t(k)] = confusion(patient_pl, opt.threshold);

        result.instance_preds.insert(result.instance_preds.end(), preds.begin(), preds.end());
        result.patient_preds.insert(result.patient_preds.end(), patient.begin(), patient.end());
    }

    result.instance_report = make_report("instance", result.instance_preds, opt.threshold);
    result.patient_report = [&] {
        std::vector<PredLabel> pl;
        for (const auto& pp : result.patient_preds) pl.push_back({pp.p, pp.label});
        return make_report("patient", pl, opt.threshold);
    }();
    return result;
}

CvResult rethreshold(const CvResult& r, double threshold) {
    CvResult out = r;
    for (int k = 0; k < 3; k++) {
        out.fold_instance_counts[std::size_t(k)] = ConfusionCounts{};
        out.fold_patient_counts[std::size_t(k)] = ConfusionCounts{};
    }
    out.instance_report = make_report("instance", out.instance_preds, threshold);
    std::vector<PredLabel> pl;
    for (const auto& pp : out.patient_preds) pl.push_back({pp.p, pp.label});
    out.patient_report = make_report("patient", pl, threshold);
    return out;
}

// ── Experiment harness ───────────────────────────────────

std::vector<int> feature_group_indices(const std::string& group) {
    auto range = [](int lo, int n) {
        std::vector<int> v;
        for (int i = 0; i < n; i++) v.push_back(lo + i);
        return v;
    };
    if (group == "ecg") return range(features::kQtcIdx, 3);
    if (group == "ppg-bp") return range(features::kPpgBpIdx, 10);
    if (group == "bia") return range(features::kBiaIdx, 10);
    if (group == "age") return range(features::kAgeIdx, 1);
    if (group == "family-history") return range(features::kFamilyHistoryIdx, 3);
    if (group == "time") return range(features::kTimeIdx, 8);
    throw ParamError("unknown feature group: " + group);
}

std::vector<std::string> known_variants() {
    return {"baseline",  "no-dropout", "no-batchnorm", "no-do-no-bn",       "wider",
            "deeper",    "wider-deeper", "no-ecg",     "no-ppg-bp",         "no-bia",
            "no-age",    "no-family-history", "no-time", "threshold-0.4",   "threshold-0.6"};
}

namespace {

std::vector<int> all_but_group(const std::string& group) {
    auto drop = feature_group_indices(group);
    std::set<int> dropped(drop.begin(), drop.end());
    std::vector<int> keep;
    for (int i = 0; i < features::kFeatureCount; i++)
        if (!dropped.count(i)) keep.push_back(i);
    return keep;
}

}  // namespace

std::vector<VariantResult> run_experiment(const ExperimentSpec& spec,
                                          const std::vector<dataset::InstanceRecord>& cohort) {
    std::vector<std::string> names = spec.variants.empty() ? known_variants() : spec.variants;
    auto known = known_variants();
    for (const auto& n : names)
        if (std::find(known.begin(), known.end(), n) == known.end())
            throw ParamError("run_experiment: unknown variant '" + n + "'");

    // threshold variants reuse the baseline model, so compute it on demand
    std::optional<CvResult> baseline_cv;
    auto get_baseline = [&]() -> const CvResult& {
        if (!baseline_cv) {
            CvOptions opt;
            opt.net = spec.net;
            opt.net.seed = derive_seed(spec.base_seed, "baseline");
            opt.fold_seed = spec.fold_seed;
            opt.smote_k = spec.smote_k;
            baseline_cv = run_cv(cohort, opt);
        }
        return *baseline_cv;
    };

    std::vector<VariantResult> results;
    for (const auto& name : names) {
        VariantResult vr;
        vr.name = name;

        if (name == "threshold-0.4" || name == "threshold-0.6") {
            vr.threshold = name == "threshold-0.4" ? 0.4 : 0.6;
            CvResult r = rethreshold(get_baseline(), vr.threshold);
            vr.input_width = features::kFeatureCount;
            model::ModelConfig cfg = spec.net;
            vr.param_count = model::count_params(cfg);
            vr.instance_report = r.instance_report;
            vr.patient_report = r.patient_report;
            results.push_back(std::move(vr));
            continue;
        }

        CvOptions opt;
        opt.net = spec.net;
        opt.fold_seed = spec.fold_seed;
        opt.smote_k = spec.smote_k;
        opt.net.seed = derive_seed(spec.base_seed, name);

        if (name == "no-dropout") opt.net.dropout = false;
        else if (name == "no-batchnorm") opt.net.batchnorm = false;
        else if (name == "no-do-no-bn") {
            opt.net.dropout = false;
            opt.net.batchnorm = false;
        } else if (name == "wider") opt.net.layer_widths = {35, 128, 16, 2};
        else if (name == "deeper") opt.net.layer_widths = {35, 64, 64, 8, 2};
        else if (name == "wider-deeper") opt.net.layer_widths = {35, 128, 128, 16, 2};
        else if (name.rfind("no-", 0) == 0)
            opt.keep_features = all_but_group(name.substr(3));

        if (name == "baseline") {
            const CvResult& r = get_baseline();
            vr.input_width = features::kFeatureCount;
            vr.param_count = model::count_params(opt.net);
            vr.instance_report = r.instance_report;
            vr.patient_report = r.patient_report;
            results.push_back(std::move(vr));
            continue;
        }

        CvResult r = run_cv(cohort, opt);
        vr.input_width =
            opt.keep_features.empty() ? features::kFeatureCount : int(opt.keep_features.size());
        model::ModelConfig counted = opt.net;
        counted.layer_widths[0] = vr.input_width;
        vr.param_count = model::count_params(counted);
        vr.threshold = opt.threshold;
        vr.instance_report = r.instance_report;
        vr.patient_report = r.patient_report;
        results.push_back(std::move(vr));
    }
    return results;
}

}  // namespace sweetdeep::eval
