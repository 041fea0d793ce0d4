#pragma once

// Patient-level screening: probability aggregation across a patient's
// recordings, hard verdicts with an optional "Don't Know" abstention band,
// coverage reporting, and cohort prediction distributions.

#include <span>
#include <string>
#include <vector>

#include "sweetdeep/eval.hpp"

namespace sweetdeep::screen {

enum class Verdict { nd, t2d, dont_know };
const char* verdict_name(Verdict v);

struct PatientVerdict {
    std::string patient_id;
    double p_t2d = 0.0;  // aggregated probability
    long n_instances = 0;
    Verdict verdict = Verdict::nd;
    double threshold = 0.5;
};

// Arithmetic mean of the instance probabilities, exactly.
double aggregate_patient(std::span<const double> instance_probs);

// The abstention band |p - 0.5| < half_width is open at both ends;
// differences within 1e-12 of the half-width count as on the edge, so
// decimal edge values like 0.58 classify.
bool in_abstention_band(double p, double half_width);

// With abstention on, band membership gives Don't Know; otherwise T2D iff
// p >= threshold.
PatientVerdict make_verdict(const std::string& patient_id, double p_t2d, long n_instances,
                            double threshold = 0.5, bool abstain = false,
                            double half_width = 0.08);

struct PatientOutcome {
    PatientVerdict verdict;
    int label = 0;  // 1 = T2D
};

struct AbstentionReport {
    long total = 0;
    long retained = 0;
    long abstained = 0;
    double coverage = 0.0;  // retained / total
    // metrics over retained patients only; not comparable with full-coverage
    // numbers, which is why the level string says so
    eval::MetricsReport retained_metrics;
};

AbstentionReport abstention_report(const std::vector<PatientOutcome>& outcomes);

// Largest half-width on a 0.005 grid in [0, 0.25] that keeps the abstained
// fraction at or below max_abstain_frac.
double tune_half_width(std::span<const double> patient_probs, double max_abstain_frac = 0.10);

// ── Cohort distributions ─────────────────────────────────

struct PatientProb {
    std::string patient_id;
    double p = 0.0;
    long n_instances = 0;
};

struct CohortDistribution {
    dataset::Label cohort = dataset::Label::nd;
    std::vector<PatientProb> patients;
    std::vector<long> histogram;  // counts over [0,1], uniform bins
};

// Aggregated per-patient probabilities for every patient of `filter` class
// under a trained model, plus a histogram over [0,1].
CohortDistribution cohort_distribution(const eval::TrainedModel& tm,
                                       const std::vector<dataset::InstanceRecord>& instances,
                                       dataset::Label filter, int bins = 10);

}  // namespace sweetdeep::screen
