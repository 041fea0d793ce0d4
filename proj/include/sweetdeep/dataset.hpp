#pragma once

// Instance table handling: class-stratified inter-patient folds, train-side
// min-max normalization (Time features pass through), and SMOTE rebalancing.

#include <array>
#include <string>
#include <vector>

#include "sweetdeep/common.hpp"
#include "sweetdeep/features.hpp"

namespace sweetdeep::dataset {

enum class Label : int { nd = 0, t2d = 1, pd = 2 };

const char* label_name(Label l);
Label label_from_int(int v);

struct InstanceRecord {
    std::string patient_id;
    double timestamp_s = 0.0;  // epoch seconds
    features::FeatureVector features{};
    Label label = Label::nd;

    double seconds_of_day() const {
        double t = std::fmod(timestamp_s, 86400.0);
        return t < 0.0 ? t + 86400.0 : t;
    }
};

struct FoldSplit {
    std::array<std::vector<std::string>, 3> folds;  // patient ids
    std::uint64_t seed = 0;

    bool contains(int fold, const std::string& id) const;
    // all ids not in `fold` (the training patients for that rotation)
    std::vector<std::string> complement(int fold) const;
};

// Patients (not instances) are shuffled per class and dealt round-robin
// into three folds. PD patients are excluded. Throws DataError when fewer
// than two classes are present or a class has under 3 patients.
FoldSplit make_folds(const std::vector<InstanceRecord>& records, std::uint64_t seed);

// Per-feature min/max for the 27 non-Time features; Time indices pass
// through untouched. Values map to (x-min)/(max-min); a constant training
// column maps everything to 0; held-out data is not clipped.
struct Normalizer {
    std::array<double, features::kFeatureCount> min{};
    std::array<double, features::kFeatureCount> max{};

    double apply_one(int idx, double x) const;
    features::FeatureVector apply(const features::FeatureVector& v) const;
};

Normalizer fit_normalizer(const std::vector<InstanceRecord>& train);
std::vector<InstanceRecord> apply_normalizer(const Normalizer& n,
                                             const std::vector<InstanceRecord>& records);

// SMOTE over instances of the minority class: synthetic records are
// x + lambda*(nn - x) between a minority instance and one of its k nearest
// minority neighbours (Euclidean over all 35 features). Output class counts
// are equal; synthetic records get fresh synthetic patient ids. Balanced
// input is returned unchanged. Throws DataError when the minority class has
// fewer than k+1 instances.
std::vector<InstanceRecord> smote_rebalance(const std::vector<InstanceRecord>& train, int k,
                                            std::uint64_t seed);

// ── Helpers shared by the pipeline ───────────────────────

std::vector<InstanceRecord> filter_by_patients(const std::vector<InstanceRecord>& records,
                                               const std::vector<std::string>& patient_ids);
std::vector<InstanceRecord> filter_by_label(const std::vector<InstanceRecord>& records, Label l);
// instances with label ND or T2D only
std::vector<InstanceRecord> binary_subset(const std::vector<InstanceRecord>& records);

struct PatientInfo {
    std::string id;
    Label label;
    long n_instances;
};
// unique patients in first-appearance order; throws DataError if a patient
// carries inconsistent labels
std::vector<PatientInfo> patients_of(const std::vector<InstanceRecord>& records);

}  // namespace sweetdeep::dataset
