#include "sweetdeep/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sweetdeep::io {

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
}

json parse(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(what + ": invalid JSON: " + e.what());
    }
}

std::string sidecar_path(const std::string& csv_path) {
    if (csv_path.size() > 4 && csv_path.substr(csv_path.size() - 4) == ".csv")
        return csv_path.substr(0, csv_path.size() - 4) + ".json";
    return csv_path + ".json";
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

json opt_to_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::optional<double> opt_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

}  // namespace

// ── ECG traces ───────────────────────────────────────────

void write_ecg_csv(const ecg::EcgRecording& rec, const std::string& csv_path) {
    std::ostringstream out;
    out << "t_s,voltage_mv\n";
    for (std::size_t i = 0; i < rec.samples_mv.size(); i++)
        out << fmt("%.6f", double(i) / rec.fs_hz) << "," << fmt("%.6f", rec.samples_mv[i]) << "\n";
    spit(csv_path, out.str());

    json side{{"fs_hz", rec.fs_hz}, {"start_epoch_s", rec.start_epoch_s}};
    if (!rec.patient_id.empty()) side["patient_id"] = rec.patient_id;
    spit(sidecar_path(csv_path), side.dump(1) + "\n");
}

ecg::EcgRecording read_ecg_csv(const std::string& csv_path) {
    json side = parse(slurp(sidecar_path(csv_path)), "ECG sidecar");
    ecg::EcgRecording rec;
    try {
        rec.fs_hz = side.at("fs_hz").get<double>();
        rec.start_epoch_s = side.at("start_epoch_s").get<double>();
        if (side.contains("patient_id")) rec.patient_id = side.at("patient_id").get<std::string>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("ECG sidecar: ") + e.what());
    }

    std::istringstream in(slurp(csv_path));
    std::string line;
    if (!std::getline(in, line) || line.rfind("t_s,voltage_mv", 0) != 0)
        throw FormatError(csv_path + ": missing t_s,voltage_mv header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw FormatError(csv_path + ": malformed row");
        try {
            rec.samples_mv.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw FormatError(csv_path + ": non-numeric voltage");
        }
    }
    rec.validate();
    return rec;
}

void write_ground_truth(const signalgen::GroundTruth& truth, const std::string& path) {
    json beats = json::array();
    for (const auto& b : truth.beats)
        beats.push_back(
            {{"r_peak_s", b.r_peak_s}, {"r_onset_s", b.r_onset_s}, {"t_offset_s", b.t_offset_s}});
    json spikes = json::array();
    for (const auto& s : truth.spikes)
        spikes.push_back({{"begin_s", s.begin_s}, {"end_s", s.end_s}});
    spit(path, json{{"beats", beats}, {"spikes", spikes}}.dump(1) + "\n");
}

signalgen::GroundTruth read_ground_truth(const std::string& path) {
    json j = parse(slurp(path), "ground truth");
    signalgen::GroundTruth t;
    try {
        for (const auto& b : j.at("beats"))
            t.beats.push_back({b.at("r_peak_s").get<double>(), b.at("r_onset_s").get<double>(),
                               b.at("t_offset_s").get<double>()});
        for (const auto& s : j.at("spikes"))
            t.spikes.push_back({s.at("begin_s").get<double>(), s.at("end_s").get<double>()});
    } catch (const json::exception& e) {
        throw FormatError(std::string("ground truth: ") + e.what());
    }
    return t;
}

// ── Instances / folds ────────────────────────────────────

void write_instances_jsonl(const std::vector<dataset::InstanceRecord>& records,
                           const std::string& path) {
    std::ostringstream out;
    for (const auto& r : records) {
        json j{{"patient_id", r.patient_id},
               {"timestamp_s", r.timestamp_s},
               {"label", int(r.label)},
               {"features", std::vector<double>(r.features.begin(), r.features.end())}};
        out << j.dump() << "\n";
    }
    spit(path, out.str());
}

std::vector<dataset::InstanceRecord> read_instances_jsonl(const std::string& path) {
    std::istringstream in(slurp(path));
    std::vector<dataset::InstanceRecord> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty()) continue;
        json j = parse(line, path + ":" + std::to_string(lineno));
        dataset::InstanceRecord r;
        try {
            r.patient_id = j.at("patient_id").get<std::string>();
            r.timestamp_s = j.at("timestamp_s").get<double>();
            r.label = dataset::label_from_int(j.at("label").get<int>());
            auto feats = j.at("features").get<std::vector<double>>();
            if (int(feats.size()) != features::kFeatureCount)
                throw FormatError(path + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(features::kFeatureCount) + " features");
            for (double v : feats)
                if (!std::isfinite(v))
                    throw FormatError(path + ":" + std::to_string(lineno) + ": non-finite feature");
            std::copy(feats.begin(), feats.end(), r.features.begin());
        } catch (const json::exception& e) {
            throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        out.push_back(std::move(r));
    }
    return out;
}

void write_folds(const dataset::FoldSplit& folds, const std::string& path) {
    json j{{"fold_0", folds.folds[0]},
           {"fold_1", folds.folds[1]},
           {"fold_2", folds.folds[2]},
           {"seed", folds.seed}};
    spit(path, j.dump(1) + "\n");
}

dataset::FoldSplit read_folds(const std::string& path) {
    json j = parse(slurp(path), "fold file");
    dataset::FoldSplit f;
    try {
        f.folds[0] = j.at("fold_0").get<std::vector<std::string>>();
        f.folds[1] = j.at("fold_1").get<std::vector<std::string>>();
        f.folds[2] = j.at("fold_2").get<std::vector<std::string>>();
        f.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("fold file: ") + e.what());
    }
    return f;
}

void write_normalizer(const dataset::Normalizer& n, const std::vector<int>& keep_features,
                      const std::string& path) {
    json j{{"format", "sweetdeep-preproc"},
           {"version", 1},
           {"min", std::vector<double>(n.min.begin(), n.min.end())},
           {"max", std::vector<double>(n.max.begin(), n.max.end())},
           {"keep_features", keep_features}};
    spit(path, j.dump(1) + "\n");
}

std::pair<dataset::Normalizer, std::vector<int>> read_normalizer(const std::string& path) {
    json j = parse(slurp(path), "preproc file");
    try {
        if (j.at("format").get<std::string>() != "sweetdeep-preproc" ||
            j.at("version").get<int>() != 1)
            throw FormatError("preproc file: unknown format or version");
        auto mins = j.at("min").get<std::vector<double>>();
        auto maxs = j.at("max").get<std::vector<double>>();
        if (int(mins.size()) != features::kFeatureCount || int(maxs.size()) != features::kFeatureCount)
            throw FormatError("preproc file: min/max length mismatch");
        dataset::Normalizer n;
        std::copy(mins.begin(), mins.end(), n.min.begin());
        std::copy(maxs.begin(), maxs.end(), n.max.begin());
        return {n, j.at("keep_features").get<std::vector<int>>()};
    } catch (const json::exception& e) {
        throw FormatError(std::string("preproc file: ") + e.what());
    }
}

// ── Beats and QC ─────────────────────────────────────────

namespace {

json beat_to_json(const ecg::BeatAnnotation& b) {
    json j{{"index", b.index}, {"r_peak_s", b.r_peak_s}};
    j["r_onset_s"] = b.r_onset_s ? json(*b.r_onset_s) : json(nullptr);
    j["t_offset_s"] = b.t_offset_s ? json(*b.t_offset_s) : json(nullptr);
    j["rr_prev_s"] = b.rr_prev_s ? json(*b.rr_prev_s) : json(nullptr);
    j["qt_s"] = b.qt_s ? json(*b.qt_s) : json(nullptr);
    json flags = json::array();
    for (auto r : b.quality_flags) flags.push_back(ecg::reject_name(r));
    j["flags"] = flags;
    return j;
}

ecg::BeatAnnotation beat_from_json(const json& j) {
    ecg::BeatAnnotation b;
    b.index = j.at("index").get<int>();
    b.r_peak_s = j.at("r_peak_s").get<double>();
    if (!j.at("r_onset_s").is_null()) b.r_onset_s = j.at("r_onset_s").get<double>();
    if (!j.at("t_offset_s").is_null()) b.t_offset_s = j.at("t_offset_s").get<double>();
    if (!j.at("rr_prev_s").is_null()) b.rr_prev_s = j.at("rr_prev_s").get<double>();
    if (!j.at("qt_s").is_null()) b.qt_s = j.at("qt_s").get<double>();
    return b;  // flags on stored accepted beats are empty by construction
}

json qc_to_json(const ecg::QcReport& r) {
    return json{{"beats_total", r.beats_total},
                {"beats_accepted", r.beats_accepted},
                {"survival_fraction", r.survival_fraction},
                {"instance_accepted", r.instance_accepted},
                {"rejection_histogram", r.rejection_histogram}};
}

ecg::QcReport qc_from_json(const json& j) {
    ecg::QcReport r;
    r.beats_total = j.at("beats_total").get<long>();
    r.beats_accepted = j.at("beats_accepted").get<long>();
    r.survival_fraction = j.at("survival_fraction").get<double>();
    r.instance_accepted = j.at("instance_accepted").get<bool>();
    r.rejection_histogram = j.at("rejection_histogram").get<std::map<std::string, long>>();
    return r;
}

}  // namespace

void write_beats_json(const ecg::EcgAnalysis& analysis, const std::string& path) {
    json beats = json::array();
    for (const auto& b : analysis.beats) beats.push_back(beat_to_json(b));
    json accepted = json::array();
    for (const auto& b : analysis.accepted) accepted.push_back(beat_to_json(b));
    json spikes = json::array();
    for (const auto& s : analysis.spikes)
        spikes.push_back({{"begin_s", s.begin_s}, {"end_s", s.end_s}});
    json j{{"format", "sweetdeep-beats"}, {"version", 1},
           {"patient_id", analysis.filtered.patient_id},
           {"start_epoch_s", analysis.filtered.start_epoch_s},
           {"fs_hz", analysis.filtered.fs_hz},
           {"spikes", spikes},
           {"beats", beats},
           {"accepted", accepted},
           {"qc", qc_to_json(analysis.report)}};
    spit(path, j.dump(1) + "\n");
}

std::pair<std::vector<ecg::BeatAnnotation>, ecg::QcReport> read_beats_json(
    const std::string& path) {
    json j = parse(slurp(path), "beats file");
    try {
        if (j.at("format").get<std::string>() != "sweetdeep-beats" ||
            j.at("version").get<int>() != 1)
            throw FormatError("beats file: unknown format or version");
        std::vector<ecg::BeatAnnotation> accepted;
        for (const auto& bj : j.at("accepted")) accepted.push_back(beat_from_json(bj));
        return {accepted, qc_from_json(j.at("qc"))};
    } catch (const json::exception& e) {
        throw FormatError(std::string("beats file: ") + e.what());
    }
}

void write_qc_table_csv(const std::vector<std::pair<std::string, ecg::QcReport>>& rows,
                        const std::string& path) {
    std::ostringstream out;
    out << "recording,beats_total,beats_accepted,survival_fraction,instance_accepted\n";
    for (const auto& [name, r] : rows)
        out << name << "," << r.beats_total << "," << r.beats_accepted << ","
            << fmt("%.6f", r.survival_fraction) << "," << (r.instance_accepted ? 1 : 0) << "\n";
    spit(path, out.str());
}

std::vector<ProvidedRow> read_provided_jsonl(const std::string& path) {
    std::istringstream in(slurp(path));
    std::vector<ProvidedRow> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty()) continue;
        json j = parse(line, path + ":" + std::to_string(lineno));
        ProvidedRow row;
        try {
            row.beats_file = j.at("beats_file").get<std::string>();
            row.patient_id = j.at("patient_id").get<std::string>();
            row.timestamp_s = j.at("timestamp_s").get<double>();
            row.label = j.at("label").get<int>();
            auto ppg = j.at("ppg_bp").get<std::vector<double>>();
            auto bia = j.at("bia").get<std::vector<double>>();
            if (ppg.size() != 10 || bia.size() != 10)
                throw FormatError(path + ":" + std::to_string(lineno) +
                                  ": ppg_bp and bia must each hold 10 values");
            std::copy(ppg.begin(), ppg.end(), row.provided.ppg_bp.begin());
            std::copy(bia.begin(), bia.end(), row.provided.bia.begin());
            row.provided.age_years = j.at("age").get<double>();
            row.provided.family_history = j.at("family_history").get<int>();
        } catch (const json::exception& e) {
            throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        out.push_back(std::move(row));
    }
    return out;
}

// ── Metrics, calibration, verdicts ───────────────────────

namespace {

json report_to_json(const eval::MetricsReport& r) {
    json bins = json::array();
    for (const auto& b : r.calib.bins)
        bins.push_back({{"lo", b.lo},
                        {"hi", b.hi},
                        {"count", b.count},
                        {"mean_pred", b.mean_pred},
                        {"frac_pos", b.frac_pos}});
    return json{{"level", r.level},
                {"threshold", r.threshold},
                {"counts",
                 {{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"fn", r.counts.fn}, {"tn", r.counts.tn}}},
                {"rates",
                 {{"accuracy", opt_to_json(r.rates.accuracy)},
                  {"sensitivity", opt_to_json(r.rates.sensitivity)},
                  {"specificity", opt_to_json(r.rates.specificity)},
                  {"macro_f1", opt_to_json(r.rates.macro_f1)}}},
                {"ece", r.ece},
                {"calibration", {{"total", r.calib.total}, {"bins", bins}}}};
}

eval::MetricsReport report_from_json(const json& j) {
    eval::MetricsReport r;
    r.level = j.at("level").get<std::string>();
    r.threshold = j.at("threshold").get<double>();
    r.counts.tp = j.at("counts").at("tp").get<long>();
    r.counts.fp = j.at("counts").at("fp").get<long>();
    r.counts.fn = j.at("counts").at("fn").get<long>();
    r.counts.tn = j.at("counts").at("tn").get<long>();
    r.rates.accuracy = opt_from_json(j.at("rates").at("accuracy"));
    r.rates.sensitivity = opt_from_json(j.at("rates").at("sensitivity"));
    r.rates.specificity = opt_from_json(j.at("rates").at("specificity"));
    r.rates.macro_f1 = opt_from_json(j.at("rates").at("macro_f1"));
    r.ece = j.at("ece").get<double>();
    r.calib.total = j.at("calibration").at("total").get<long>();
    const auto& bins = j.at("calibration").at("bins");
    for (std::size_t b = 0; b < r.calib.bins.size() && b < bins.size(); b++) {
        auto& bin = r.calib.bins[b];
        bin.lo = bins[b].at("lo").get<double>();
        bin.hi = bins[b].at("hi").get<double>();
        bin.count = bins[b].at("count").get<long>();
        bin.mean_pred = bins[b].at("mean_pred").get<double>();
        bin.frac_pos = bins[b].at("frac_pos").get<double>();
    }
    return r;
}

}  // namespace

void write_metrics_json(const eval::MetricsReport& instance_level,
                        const eval::MetricsReport& patient_level, const std::string& path) {
    json j{{"format", "sweetdeep-metrics"},
           {"version", 1},
           {"instance", report_to_json(instance_level)},
           {"patient", report_to_json(patient_level)}};
    spit(path, j.dump(1) + "\n");
}

std::pair<eval::MetricsReport, eval::MetricsReport> read_metrics_json(const std::string& path) {
    json j = parse(slurp(path), "metrics file");
    try {
        if (j.at("format").get<std::string>() != "sweetdeep-metrics" ||
            j.at("version").get<int>() != 1)
            throw FormatError("metrics file: unknown format or version");
        return {report_from_json(j.at("instance")), report_from_json(j.at("patient"))};
    } catch (const json::exception& e) {
        throw FormatError(std::string("metrics file: ") + e.what());
    }
}

void write_calibration_csv(const eval::CalibrationTable& table, const std::string& path) {
    std::ostringstream out;
    out << "bin_lo,bin_hi,count,mean_pred,frac_pos\n";
    for (const auto& b : table.bins)
        out << fmt("%.1f", b.lo) << "," << fmt("%.1f", b.hi) << "," << b.count << ","
            << fmt("%.6f", b.mean_pred) << "," << fmt("%.6f", b.frac_pos) << "\n";
    spit(path, out.str());
}

void write_verdicts_csv(const std::vector<screen::PatientVerdict>& verdicts,
                        const std::string& path) {
    std::ostringstream out;
    out << "patient_id,n_instances,p_t2d,verdict\n";
    for (const auto& v : verdicts)
        out << v.patient_id << "," << v.n_instances << "," << fmt("%.6f", v.p_t2d) << ","
            << screen::verdict_name(v.verdict) << "\n";
    spit(path, out.str());
}

void write_abstention_json(const screen::AbstentionReport& report, const std::string& path) {
    json j{{"total", report.total},
           {"retained", report.retained},
           {"abstained", report.abstained},
           {"coverage", report.coverage},
           {"retained_metrics", report_to_json(report.retained_metrics)}};
    spit(path, j.dump(1) + "\n");
}

void write_histogram_csv(const screen::CohortDistribution& dist, const std::string& path) {
    std::ostringstream out;
    out << "bin_lo,bin_hi,count\n";
    const int bins = int(dist.histogram.size());
    for (int b = 0; b < bins; b++)
        out << fmt("%.4f", double(b) / bins) << "," << fmt("%.4f", double(b + 1) / bins) << ","
            << dist.histogram[std::size_t(b)] << "\n";
    spit(path, out.str());
}

void write_experiment_json(const std::vector<eval::VariantResult>& results,
                           const std::string& path) {
    json variants = json::array();
    for (const auto& v : results)
        variants.push_back({{"name", v.name},
                            {"input_width", v.input_width},
                            {"param_count", v.param_count},
                            {"threshold", v.threshold},
                            {"instance", report_to_json(v.instance_report)},
                            {"patient", report_to_json(v.patient_report)}});
    json j{{"format", "sweetdeep-experiment"}, {"version", 1}, {"variants", variants}};
    spit(path, j.dump(1) + "\n");
}

// ── Rendering ────────────────────────────────────────────

namespace {

std::string pct(const std::optional<double>& v) {
    if (!v) return "   n/a";
    return fmt("%6.1f", *v * 100.0);
}

}  // namespace

std::string render_report_table(const eval::MetricsReport& instance_level,
                                const eval::MetricsReport& patient_level) {
    std::ostringstream out;
    out << "Level      Acc(%)  Sens(%)  Spec(%)   F1(%)  ECE(%)   TP   FP   FN   TN\n";
    for (const auto* r : {&instance_level, &patient_level}) {
        char line[160];
        std::snprintf(line, sizeof line, "%-9s %s  %s   %s  %s  %s %5ld %4ld %4ld %5ld\n",
                      r->level.c_str(), pct(r->rates.accuracy).c_str(),
                      pct(r->rates.sensitivity).c_str(), pct(r->rates.specificity).c_str(),
                      pct(r->rates.macro_f1).c_str(), fmt("%6.1f", r->ece * 100.0).c_str(),
                      r->counts.tp, r->counts.fp, r->counts.fn, r->counts.tn);
        out << line;
    }
    return out.str();
}

std::string render_metrics_table(const std::vector<eval::VariantResult>& rows) {
    std::ostringstream out;
    out << "Variant             Width  Params  Thr   Acc(%)  Sens(%)  Spec(%)   F1(%)  ECE(%)\n";
    for (const auto& v : rows) {
        const auto& r = v.patient_report;
        char line[200];
        std::snprintf(line, sizeof line, "%-19s %5d  %6ld  %.2f  %s   %s   %s  %s  %s\n",
                      v.name.c_str(), v.input_width, v.param_count, v.threshold,
                      pct(r.rates.accuracy).c_str(), pct(r.rates.sensitivity).c_str(),
                      pct(r.rates.specificity).c_str(), pct(r.rates.macro_f1).c_str(),
                      fmt("%6.1f", r.ece * 100.0).c_str());
        out << line;
    }
    return out.str();
}

namespace {

constexpr int kSvgSize = 440;
constexpr int kSvgPad = 50;

double sx(double v) { return kSvgPad + v * (kSvgSize - 2 * kSvgPad); }
double sy(double v) { return kSvgSize - kSvgPad - v * (kSvgSize - 2 * kSvgPad); }

void svg_header(std::ostringstream& out) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgSize << "\" height=\""
        << kSvgSize << "\" viewBox=\"0 0 " << kSvgSize << " " << kSvgSize << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void svg_axes(std::ostringstream& out, const char* xlabel, const char* ylabel) {
    out << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(1) << "\" y2=\""
        << sy(0) << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(0) << "\" y2=\""
        << sy(1) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 10; i += 2) {
        double v = double(i) / 10.0;
        out << "<text x=\"" << sx(v) << "\" y=\"" << sy(0) + 18 << "\" font-size=\"11\" "
            << "text-anchor=\"middle\">" << fmt("%.1f", v) << "</text>\n";
        out << "<text x=\"" << sx(0) - 10 << "\" y=\"" << sy(v) + 4 << "\" font-size=\"11\" "
            << "text-anchor=\"end\">" << fmt("%.1f", v) << "</text>\n";
    }
    out << "<text x=\"" << sx(0.5) << "\" y=\"" << kSvgSize - 8 << "\" font-size=\"12\" "
        << "text-anchor=\"middle\">" << xlabel << "</text>\n";
    out << "<text x=\"14\" y=\"" << sy(0.5) << "\" font-size=\"12\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 14 " << sy(0.5) << ")\">" << ylabel << "</text>\n";
}

}  // namespace

void write_reliability_svg(const eval::CalibrationTable& table, const std::string& path) {
    std::ostringstream out;
    svg_header(out);
    svg_axes(out, "mean predicted probability", "fraction of positives");
    out << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(1) << "\" y2=\""
        << sy(1) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

    std::ostringstream pts;
    bool first = true;
    for (const auto& b : table.bins) {
        if (b.count == 0) continue;
        pts << (first ? "" : " ") << fmt("%.2f", sx(b.mean_pred)) << "," << fmt("%.2f", sy(b.frac_pos));
        first = false;
    }
    out << "<polyline points=\"" << pts.str()
        << "\" fill=\"none\" stroke=\"seagreen\" stroke-width=\"2\"/>\n";
    for (const auto& b : table.bins) {
        if (b.count == 0) continue;
        out << "<circle cx=\"" << fmt("%.2f", sx(b.mean_pred)) << "\" cy=\""
            << fmt("%.2f", sy(b.frac_pos)) << "\" r=\"3.5\" fill=\"seagreen\"/>\n";
    }
    out << "</svg>\n";
    spit(path, out.str());
}

void write_distribution_svg(const std::vector<screen::CohortDistribution>& dists,
                            const std::string& path) {
    long max_count = 1;
    for (const auto& d : dists)
        for (long c : d.histogram) max_count = std::max(max_count, c);

    static const char* colors[] = {"steelblue", "darkorange", "crimson"};
    std::ostringstream out;
    svg_header(out);
    svg_axes(out, "patient-level predicted probability", "patients (scaled)");
    for (std::size_t di = 0; di < dists.size(); di++) {
        const auto& d = dists[di];
        const int bins = int(d.histogram.size());
        const char* color = colors[di % 3];
        for (int b = 0; b < bins; b++) {
            double h = double(d.histogram[std::size_t(b)]) / double(max_count);
            double x0 = sx(double(b) / bins), x1 = sx(double(b + 1) / bins);
            double w = (x1 - x0) / double(dists.size());
            out << "<rect x=\"" << fmt("%.2f", x0 + w * double(di)) << "\" y=\""
                << fmt("%.2f", sy(h)) << "\" width=\"" << fmt("%.2f", w * 0.9) << "\" height=\""
                << fmt("%.2f", sy(0) - sy(h)) << "\" fill=\"" << color << "\" opacity=\"0.8\"/>\n";
        }
        out << "<text x=\"" << sx(0.02) << "\" y=\"" << sy(0.96) + double(di) * 16
            << "\" font-size=\"12\" fill=\"" << color << "\">" << dataset::label_name(d.cohort)
            << "</text>\n";
    }
    out << "</svg>\n";
    spit(path, out.str());
}

}  // namespace sweetdeep::io
