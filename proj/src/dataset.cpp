#include "sweetdeep/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "sweetdeep/kernels.hpp"

namespace sweetdeep::dataset {

const char* label_name(Label l) {
    switch (l) {
        case Label::nd: return "ND";
        case Label::t2d: return "T2D";
        case Label::pd: return "PD";
    }
    return "?";
}

Label label_from_int(int v) {
    if (v < 0 || v > 2) throw FormatError("label must be 0 (ND), 1 (T2D) or 2 (PD)");
    return Label(v);
}

bool FoldSplit::contains(int fold, const std::string& id) const {
    const auto& f = folds[std::size_t(fold)];
    return std::find(f.begin(), f.end(), id) != f.end();
}

std::vector<std::string> FoldSplit::complement(int fold) const {
    std::vector<std::string> out;
    for (int k = 0; k < 3; k++) {
        if (k == fold) continue;
        out.insert(out.end(), folds[std::size_t(k)].begin(), folds[std::size_t(k)].end());
    }
    return out;
}

std::vector<PatientInfo> patients_of(const std::vector<InstanceRecord>& records) {
    std::vector<PatientInfo> out;
    std::map<std::string, std::size_t> pos;
    for (const auto& r : records) {
        auto it = pos.find(r.patient_id);
        if (it == pos.end()) {
            pos[r.patient_id] = out.size();
            out.push_back({r.patient_id, r.label, 1});
        } else {
            PatientInfo& p = out[it->second];
            if (p.label != r.label)
                throw DataError("patient " + r.patient_id + " carries inconsistent labels");
            p.n_instances++;
        }
    }
    return out;
}

FoldSplit make_folds(const std::vector<InstanceRecord>& records, std::uint64_t seed) {
    auto patients = patients_of(records);

    std::vector<std::string> nd_ids, t2d_ids;
    for (const auto& p : patients) {
        if (p.n_instances < 1) throw DataError("make_folds: patient without instances");
        if (p.label == Label::nd) nd_ids.push_back(p.id);
        if (p.label == Label::t2d) t2d_ids.push_back(p.id);
    }
    if (nd_ids.empty() || t2d_ids.empty())
        throw DataError("make_folds: both ND and T2D patients are required");
    if (nd_ids.size() < 3 || t2d_ids.size() < 3)
        throw DataError("make_folds: every class needs at least 3 patients");

    // stable starting order, then a seeded shuffle per class
    std::sort(nd_ids.begin(), nd_ids.end());
    std::sort(t2d_ids.begin(), t2d_ids.end());
    Rng rng(seed);
    auto nd_rng = rng.fork("folds-nd");
    auto t2d_rng = rng.fork("folds-t2d");
    nd_rng.shuffle(nd_ids);
    t2d_rng.shuffle(t2d_ids);

    FoldSplit split;
    split.seed = seed;
    for (std::size_t i = 0; i < nd_ids.size(); i++) split.folds[i % 3].push_back(nd_ids[i]);
    for (std::size_t i = 0; i < t2d_ids.size(); i++) split.folds[i % 3].push_back(t2d_ids[i]);
    return split;
}

// ── Normalization ────────────────────────────────────────

namespace {
inline bool is_time_feature(int idx) { return idx >= features::kTimeIdx; }
}

double Normalizer::apply_one(int idx, double x) const {
    if (is_time_feature(idx)) return x;
    double lo = min[std::size_t(idx)], hi = max[std::size_t(idx)];
    if (!(hi > lo)) return 0.0;  // constant training column
    return (x - lo) / (hi - lo);
}

features::FeatureVector Normalizer::apply(const features::FeatureVector& v) const {
    features::FeatureVector out{};
    for (int i = 0; i < features::kFeatureCount; i++) out[std::size_t(i)] = apply_one(i, v[std::size_t(i)]);
    return out;
}

Normalizer fit_normalizer(const std::vector<InstanceRecord>& train) {
    if (train.empty()) throw DataError("fit_normalizer: empty training set");
    Normalizer n;
    for (int j = 0; j < features::kFeatureCount; j++) {
        double lo = train[0].features[std::size_t(j)], hi = lo;
        for (const auto& r : train) {
            lo = std::min(lo, r.features[std::size_t(j)]);
            hi = std::max(hi, r.features[std::size_t(j)]);
        }
        n.min[std::size_t(j)] = lo;
        n.max[std::size_t(j)] = hi;
    }
    return n;
}

std::vector<InstanceRecord> apply_normalizer(const Normalizer& n,
                                             const std::vector<InstanceRecord>& records) {
    std::vector<InstanceRecord> out = records;
    for (auto& r : out) r.features = n.apply(r.features);
    return out;
}

// ── SMOTE ────────────────────────────────────────────────

std::vector<InstanceRecord> smote_rebalance(const std::vector<InstanceRecord>& train, int k,
                                            std::uint64_t seed) {
    if (k < 1) throw ParamError("smote_rebalance: k must be >= 1");
    long n_nd = 0, n_t2d = 0;
    for (const auto& r : train) {
        if (r.label == Label::nd) n_nd++;
        if (r.label == Label::t2d) n_t2d++;
        if (r.label == Label::pd) throw DataError("smote_rebalance: PD instances in training set");
    }
    if (n_nd == n_t2d) return train;

    Label minority = n_nd < n_t2d ? Label::nd : Label::t2d;
    long need = std::labs(n_nd - n_t2d);
    std::vector<std::size_t> min_idx;
    for (std::size_t i = 0; i < train.size(); i++)
        if (train[i].label == minority) min_idx.push_back(i);
    if (long(min_idx.size()) < long(k) + 1)
        throw DataError("smote_rebalance: minority class smaller than k+1 instances");

    Matrix pts(int(min_idx.size()), features::kFeatureCount);
    for (std::size_t i = 0; i < min_idx.size(); i++)
        for (int j = 0; j < features::kFeatureCount; j++)
            pts(int(i), j) = train[min_idx[i]].features[std::size_t(j)];
    std::vector<int> nns = kernels::knn_indices(pts, k);

    Rng rng = Rng(seed).fork("smote");
    std::vector<InstanceRecord> out = train;
    out.reserve(train.size() + std::size_t(need));
    for (long s = 0; s < need; s++) {
        std::size_t base = std::size_t(rng.uniform_int(min_idx.size()));
        int nn = nns[base * std::size_t(k) + rng.uniform_int(std::uint64_t(k))];
        double lambda = rng.uniform();

        const InstanceRecord& a = train[min_idx[base]];
        const InstanceRecord& b = train[min_idx[std::size_t(nn)]];
        InstanceRecord synth;
        synth.patient_id = "synthetic-" + std::to_string(s);
        synth.timestamp_s = a.timestamp_s;
        synth.label = minority;
        for (int j = 0; j < features::kFeatureCount; j++)
            synth.features[std::size_t(j)] =
                a.features[std::size_t(j)] +
                lambda * (b.features[std::size_t(j)] - a.features[std::size_t(j)]);
        out.push_back(std::move(synth));
    }
    return out;
}

// ── Subset helpers ───────────────────────────────────────

std::vector<InstanceRecord> filter_by_patients(const std::vector<InstanceRecord>& records,
                                               const std::vector<std::string>& patient_ids) {
    std::set<std::string> keep(patient_ids.begin(), patient_ids.end());
    std::vector<InstanceRecord> out;
    for (const auto& r : records)
        if (keep.count(r.patient_id)) out.push_back(r);
    return out;
}

std::vector<InstanceRecord> filter_by_label(const std::vector<InstanceRecord>& records, Label l) {
    std::vector<InstanceRecord> out;
    for (const auto& r : records)
        if (r.label == l) out.push_back(r);
    return out;
}

std::vector<InstanceRecord> binary_subset(const std::vector<InstanceRecord>& records) {
    std::vector<InstanceRecord> out;
    for (const auto& r : records)
        if (r.label != Label::pd) out.push_back(r);
    return out;
}

}  // namespace sweetdeep::dataset
