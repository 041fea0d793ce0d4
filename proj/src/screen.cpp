#include "sweetdeep/screen.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sweetdeep::screen {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::nd: return "ND";
        case Verdict::t2d: return "T2D";
        case Verdict::dont_know: return "DontKnow";
    }
    return "?";
}

double aggregate_patient(std::span<const double> instance_probs) {
    if (instance_probs.empty()) throw DataError("aggregate_patient: no instance predictions");
    double s = 0.0;
    for (double p : instance_probs) s += p;
    return s / double(instance_probs.size());
}

bool in_abstention_band(double p, double half_width) {
    return std::fabs(p - 0.5) < half_width - 1e-12;
}

PatientVerdict make_verdict(const std::string& patient_id, double p_t2d, long n_instances,
                            double threshold, bool abstain, double half_width) {
    if (!(p_t2d >= 0.0 && p_t2d <= 1.0))
        throw ParamError("make_verdict: probability outside [0, 1]");
    PatientVerdict v;
    v.patient_id = patient_id;
    v.p_t2d = p_t2d;
    v.n_instances = n_instances;
    v.threshold = threshold;
    if (abstain && in_abstention_band(p_t2d, half_width))
        v.verdict = Verdict::dont_know;
    else
        v.verdict = p_t2d >= threshold ? Verdict::t2d : Verdict::nd;
    return v;
}

AbstentionReport abstention_report(const std::vector<PatientOutcome>& outcomes) {
    AbstentionReport r;
    r.total = long(outcomes.size());
    std::vector<eval::PredLabel> retained;
    for (const auto& o : outcomes) {
        if (o.verdict.verdict == Verdict::dont_know) {
            r.abstained++;
        } else {
            r.retained++;
            retained.push_back({o.verdict.p_t2d, o.label});
        }
    }
    r.coverage = r.total == 0 ? 0.0 : double(r.retained) / double(r.total);
    if (!retained.empty()) {
        double thr = outcomes.front().verdict.threshold;
        r.retained_metrics = eval::make_report("patient-retained", retained, thr);
    } else {
        r.retained_metrics.level = "patient-retained";  // rates stay empty
    }
    return r;
}

double tune_half_width(std::span<const double> patient_probs, double max_abstain_frac) {
    if (patient_probs.empty()) throw DataError("tune_half_width: no patient probabilities");
    double best = 0.0;
    for (int step = 0; step <= 50; step++) {
        double h = double(step) * 0.005;
        long abstained = 0;
        for (double p : patient_probs)
            if (in_abstention_band(p, h)) abstained++;
        if (double(abstained) / double(patient_probs.size()) <= max_abstain_frac) best = h;
    }
    return best;
}

CohortDistribution cohort_distribution(const eval::TrainedModel& tm,
                                       const std::vector<dataset::InstanceRecord>& instances,
                                       dataset::Label filter, int bins) {
    if (bins < 1) throw ParamError("cohort_distribution: bins must be >= 1");
    auto subset = dataset::filter_by_label(instances, filter);

    CohortDistribution d;
    d.cohort = filter;
    d.histogram.assign(std::size_t(bins), 0);
    if (subset.empty()) return d;

    auto preds = eval::predict_instances(tm, subset);
    std::map<std::string, std::vector<double>> by_patient;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < subset.size(); i++) {
        if (!by_patient.count(subset[i].patient_id)) order.push_back(subset[i].patient_id);
        by_patient[subset[i].patient_id].push_back(preds[i].p);
    }
    for (const auto& id : order) {
        const auto& probs = by_patient[id];
        double p = aggregate_patient(probs);
        d.patients.push_back({id, p, long(probs.size())});
        int b = std::min(bins - 1, int(p * double(bins)));
        d.histogram[std::size_t(b)]++;
    }
    return d;
}

}  // namespace sweetdeep::screen
