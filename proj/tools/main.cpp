// sweetdeep — ECG quality control, feature extraction, compact-network
// training and patient-level screening as composable subcommands with
// file-based handoffs.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pipeline_config.hpp"
#include "sweetdeep/io.hpp"
#include "sweetdeep/screen.hpp"

namespace fs = std::filesystem;
using namespace sweetdeep;

namespace {

// exit codes: 0 ok, 2 parameter/config, 3 missing file, 4 schema/format,
// 5 data precondition, 1 anything else
constexpr int kExitParam = 2;
constexpr int kExitIo = 3;
constexpr int kExitFormat = 4;
constexpr int kExitData = 5;

void error_json(const char* code, const std::string& message) {
    nlohmann::json j{{"error", {{"code", code}, {"message", message}}}};
    std::cerr << j.dump() << "\n";
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir);
}

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed_override = 0;
    bool has_seed_override = false;

    cli::PipelineConfig load() const {
        auto cfg = cli::load_config(config_path);
        if (has_seed_override) cli::apply_seed_override(cfg, seed_override);
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "pipeline config file (JSON)");
    cmd->add_option("--seed", args.seed_override,
                    "override all stage seeds, derived by hashing (seed, stage)")
        ->each([&args](const std::string&) { args.has_seed_override = true; });
}

void write_trace_csv(const std::vector<model::EpochStats>& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "epoch,loss,accuracy\n";
    char buf[96];
    for (std::size_t e = 0; e < trace.size(); e++) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g\n", e, trace[e].loss, trace[e].accuracy);
        out << buf;
    }
}

// evaluate writes these; screen can reuse them for out-of-fold verdicts
void write_patient_preds_csv(const std::vector<eval::PatientPred>& preds,
                             const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "patient_id,label,n_instances,p_t2d\n";
    char buf[160];
    for (const auto& p : preds) {
        std::snprintf(buf, sizeof buf, "%s,%d,%ld,%.12g\n", p.patient_id.c_str(), p.label,
                      p.n_instances, p.p);
        out << buf;
    }
}

std::vector<eval::PatientPred> read_patient_preds_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("patient_id,label,n_instances,p_t2d", 0) != 0)
        throw FormatError(path + ": missing patient_id,label,n_instances,p_t2d header");
    std::vector<eval::PatientPred> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        eval::PatientPred p;
        std::size_t a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
        if (a == std::string::npos || b == std::string::npos || c == std::string::npos)
            throw FormatError(path + ": malformed row");
        try {
            p.patient_id = line.substr(0, a);
            p.label = std::stoi(line.substr(a + 1, b - a - 1));
            p.n_instances = std::stol(line.substr(b + 1, c - b - 1));
            p.p = std::stod(line.substr(c + 1));
        } catch (const std::exception&) {
            throw FormatError(path + ": malformed row");
        }
        out.push_back(std::move(p));
    }
    return out;
}

// ── subcommand bodies ────────────────────────────────────

struct GenEcgArgs : CommonArgs {
    std::string out_prefix;
    double duration = 0.0, fs = 0.0;
};

void run_gen_ecg(const GenEcgArgs& args) {
    auto cfg = args.load();
    double duration = args.duration > 0.0 ? args.duration : cfg.gen_duration_s;
    double fs = args.fs > 0.0 ? args.fs : cfg.gen_fs_hz;
    std::uint64_t seed =
        args.has_seed_override ? derive_seed(args.seed_override, "gen-ecg") : cfg.seed;

    auto [rec, truth] = signalgen::synthesize_ecg(cfg.beat, duration, fs, seed);
    io::write_ecg_csv(rec, args.out_prefix + ".csv");
    io::write_ground_truth(truth, args.out_prefix + ".truth.json");
    std::cout << "wrote " << args.out_prefix << ".csv (" << rec.samples_mv.size() << " samples, "
              << truth.beats.size() << " beats, " << truth.spikes.size() << " spikes)\n";
}

struct GenCohortArgs : CommonArgs {
    std::string out_path;
};

void run_gen_cohort(const GenCohortArgs& args) {
    auto cfg = args.load();
    auto records = signalgen::generate_cohort(cfg.cohort);
    io::write_instances_jsonl(records, args.out_path);
    auto patients = dataset::patients_of(records);
    std::cout << "wrote " << args.out_path << " (" << records.size() << " instances, "
              << patients.size() << " patients)\n";
}

struct EcgQcArgs : CommonArgs {
    std::vector<std::string> inputs;
    std::string out_dir;
};

void run_ecg_qc(const EcgQcArgs& args) {
    auto cfg = args.load();
    ensure_dir(args.out_dir);
    std::vector<std::pair<std::string, ecg::QcReport>> table;
    for (const auto& input : args.inputs) {
        auto rec = io::read_ecg_csv(input);
        auto analysis = ecg::process_recording(rec, cfg.qc);
        auto out = (fs::path(args.out_dir) / (stem_of(input) + ".beats.json")).string();
        io::write_beats_json(analysis, out);
        table.emplace_back(stem_of(input), analysis.report);
    }
    auto table_path = (fs::path(args.out_dir) / "qc_table.csv").string();
    io::write_qc_table_csv(table, table_path);
    std::cout << "wrote " << table_path << " (" << table.size() << " recordings)\n";
}

struct ExtractArgs : CommonArgs {
    std::string provided_path;
    std::string beats_dir;
    std::string out_path;
};

void run_extract(const ExtractArgs& args) {
    auto rows = io::read_provided_jsonl(args.provided_path);
    std::vector<dataset::InstanceRecord> instances;
    long skipped = 0;
    for (const auto& row : rows) {
        fs::path bp(row.beats_file);
        if (!bp.is_absolute() && !args.beats_dir.empty()) bp = fs::path(args.beats_dir) / bp;
        auto [accepted, report] = io::read_beats_json(bp.string());
        if (!report.instance_accepted) {
            skipped++;
            continue;
        }
        dataset::InstanceRecord rec;
        rec.patient_id = row.patient_id;
        rec.timestamp_s = row.timestamp_s;
        rec.label = dataset::label_from_int(row.label);
        auto ef = features::ecg_features_from_beats(accepted);
        double sod = std::fmod(row.timestamp_s, 86400.0);
        if (sod < 0.0) sod += 86400.0;
        rec.features = features::assemble(ef, row.provided, sod);
        instances.push_back(std::move(rec));
    }
    io::write_instances_jsonl(instances, args.out_path);
    std::cout << "wrote " << args.out_path << " (" << instances.size() << " instances, " << skipped
              << " rejected by QC)\n";
}

struct FoldsArgs : CommonArgs {
    std::string input_path;
    std::string out_path;
};

void run_folds(const FoldsArgs& args) {
    auto cfg = args.load();
    auto records = io::read_instances_jsonl(args.input_path);
    auto split = dataset::make_folds(records, cfg.fold_seed);
    io::write_folds(split, args.out_path);
    std::cout << "wrote " << args.out_path << " (" << split.folds[0].size() << "/"
              << split.folds[1].size() << "/" << split.folds[2].size() << " patients)\n";
}

struct TrainArgs : CommonArgs {
    std::string input_path;
    std::string folds_path;
    std::string out_prefix;
    std::string fold = "all";  // 0|1|2|all|full
};

void run_train(const TrainArgs& args) {
    auto cfg = args.load();
    auto records = dataset::binary_subset(io::read_instances_jsonl(args.input_path));

    eval::CvOptions opt;
    opt.net = cfg.net;
    opt.fold_seed = cfg.fold_seed;
    opt.smote_k = cfg.smote_k;

    auto train_one = [&](const std::vector<dataset::InstanceRecord>& train_recs,
                         const std::string& tag, std::uint64_t stream_seed) {
        auto tm = eval::train_on(train_recs, opt, stream_seed);
        model::save_params(tm.params, args.out_prefix + "." + tag + ".model.json");
        io::write_normalizer(tm.normalizer, tm.keep_features,
                             args.out_prefix + "." + tag + ".preproc.json");
        write_trace_csv(tm.trace, args.out_prefix + "." + tag + ".trace.csv");
        std::cout << "trained " << tag << ": " << args.out_prefix << "." << tag
                  << ".model.json (final loss "
                  << (tm.trace.empty() ? 0.0 : tm.trace.back().loss) << ")\n";
    };

    if (args.fold == "full") {
        train_one(records, "full", derive_seed(cfg.net.seed, "full"));
        return;
    }
    auto split = args.folds_path.empty() ? dataset::make_folds(records, cfg.fold_seed)
                                         : io::read_folds(args.folds_path);
    auto run_fold = [&](int k) {
        auto train_recs = dataset::filter_by_patients(records, split.complement(k));
        train_one(train_recs, "fold" + std::to_string(k),
                  derive_seed(cfg.net.seed, "fold-" + std::to_string(k)));
    };
    if (args.fold == "all") {
        for (int k = 0; k < 3; k++) run_fold(k);
    } else if (args.fold == "0" || args.fold == "1" || args.fold == "2") {
        run_fold(std::stoi(args.fold));
    } else {
        throw ParamError("--fold must be 0, 1, 2, all or full");
    }
}

struct EvaluateArgs : CommonArgs {
    std::string input_path;
    std::string folds_path;
    std::string models_prefix;
    std::string out_dir;
    double threshold = -1.0;
};

void run_evaluate(const EvaluateArgs& args) {
    auto cfg = args.load();
    double threshold = args.threshold >= 0.0 ? args.threshold : cfg.threshold;
    ensure_dir(args.out_dir);

    auto records = dataset::binary_subset(io::read_instances_jsonl(args.input_path));
    auto split = io::read_folds(args.folds_path);

    std::vector<eval::PredLabel> instance_preds;
    std::vector<eval::PatientPred> patient_preds;
    for (int k = 0; k < 3; k++) {
        std::string tag = "fold" + std::to_string(k);
        eval::TrainedModel tm;
        tm.params = model::load_params(args.models_prefix + "." + tag + ".model.json");
        std::tie(tm.normalizer, tm.keep_features) =
            io::read_normalizer(args.models_prefix + "." + tag + ".preproc.json");

        auto test_recs = dataset::filter_by_patients(records, split.folds[std::size_t(k)]);
        auto preds = eval::predict_instances(tm, test_recs);
        instance_preds.insert(instance_preds.end(), preds.begin(), preds.end());

        // per-patient means
        std::map<std::string, std::pair<std::vector<double>, int>> agg;
        std::vector<std::string> order;
        for (std::size_t i = 0; i < test_recs.size(); i++) {
            if (!agg.count(test_recs[i].patient_id)) order.push_back(test_recs[i].patient_id);
            agg[test_recs[i].patient_id].first.push_back(preds[i].p);
            agg[test_recs[i].patient_id].second = preds[i].label;
        }
        for (const auto& id : order) {
            const auto& [probs, label] = agg[id];
            patient_preds.push_back(
                {id, screen::aggregate_patient(probs), label, long(probs.size())});
        }
    }

    auto instance_report = eval::make_report("instance", instance_preds, threshold);
    std::vector<eval::PredLabel> patient_pl;
    for (const auto& pp : patient_preds) patient_pl.push_back({pp.p, pp.label});
    auto patient_report = eval::make_report("patient", patient_pl, threshold);

    fs::path dir(args.out_dir);
    io::write_metrics_json(instance_report, patient_report, (dir / "metrics.json").string());
    io::write_calibration_csv(instance_report.calib, (dir / "calibration_instance.csv").string());
    io::write_calibration_csv(patient_report.calib, (dir / "calibration_patient.csv").string());
    write_patient_preds_csv(patient_preds, (dir / "patient_preds.csv").string());

    std::cout << io::render_report_table(instance_report, patient_report);
    std::cout << "wrote " << (dir / "metrics.json").string() << "\n";
}

struct ScreenArgs : CommonArgs {
    std::string input_path;
    std::string full_model_prefix;
    std::string cv_preds_path;  // optional out-of-fold patient predictions
    std::string out_dir;
    double threshold = -1.0;
    double half_width = -1.0;
    bool no_abstain = false;
    bool tune = false;
};

void run_screen(const ScreenArgs& args) {
    auto cfg = args.load();
    double threshold = args.threshold >= 0.0 ? args.threshold : cfg.threshold;
    double half_width = args.half_width >= 0.0 ? args.half_width : cfg.abstain_half_width;
    bool abstain = !args.no_abstain && cfg.abstain_enabled;
    ensure_dir(args.out_dir);
    fs::path dir(args.out_dir);

    auto records = io::read_instances_jsonl(args.input_path);

    eval::TrainedModel tm;
    tm.params = model::load_params(args.full_model_prefix + ".full.model.json");
    std::tie(tm.normalizer, tm.keep_features) =
        io::read_normalizer(args.full_model_prefix + ".full.preproc.json");

    // ND/T2D patient probabilities: out-of-fold file when given, otherwise
    // in-sample under the full model
    std::vector<eval::PatientPred> preds;
    if (!args.cv_preds_path.empty()) {
        preds = read_patient_preds_csv(args.cv_preds_path);
    } else {
        for (auto label : {dataset::Label::nd, dataset::Label::t2d}) {
            auto dist = screen::cohort_distribution(tm, records, label, cfg.histogram_bins);
            for (const auto& p : dist.patients)
                preds.push_back({p.patient_id, p.p, label == dataset::Label::t2d ? 1 : 0,
                                 p.n_instances});
        }
    }

    if (args.tune || cfg.abstain_tune) {
        std::vector<double> probs;
        for (const auto& p : preds) probs.push_back(p.p);
        half_width = screen::tune_half_width(probs, 0.10);
        std::cout << "tuned abstention half-width: " << half_width << "\n";
    }

    std::vector<screen::PatientVerdict> verdicts;
    std::vector<screen::PatientOutcome> outcomes;
    for (const auto& p : preds) {
        auto v = screen::make_verdict(p.patient_id, p.p, p.n_instances, threshold, abstain,
                                      half_width);
        verdicts.push_back(v);
        outcomes.push_back({v, p.label});
    }
    io::write_verdicts_csv(verdicts, (dir / "verdicts.csv").string());

    auto report = screen::abstention_report(outcomes);
    io::write_abstention_json(report, (dir / "abstention.json").string());

    std::vector<screen::CohortDistribution> dists;
    for (auto label : {dataset::Label::nd, dataset::Label::pd, dataset::Label::t2d}) {
        auto dist = screen::cohort_distribution(tm, records, label, cfg.histogram_bins);
        if (dist.patients.empty()) continue;
        std::string name = std::string("distribution_") + dataset::label_name(label) + ".csv";
        io::write_histogram_csv(dist, (dir / name).string());
        dists.push_back(std::move(dist));
    }
    if (!dists.empty()) io::write_distribution_svg(dists, (dir / "distributions.svg").string());

    char line[160];
    std::snprintf(line, sizeof line,
                  "screened %ld patients: coverage %.1f%%, abstained %ld (half-width %.3f)\n",
                  report.total, report.coverage * 100.0, report.abstained, half_width);
    std::cout << line;
}

struct ExperimentArgs : CommonArgs {
    std::string input_path;
    std::string out_dir;
    std::vector<std::string> variants;
};

void run_experiment_cmd(const ExperimentArgs& args) {
    auto cfg = args.load();
    ensure_dir(args.out_dir);
    auto records = io::read_instances_jsonl(args.input_path);

    eval::ExperimentSpec spec;
    spec.variants = args.variants.empty() ? cfg.experiment_variants : args.variants;
    spec.base_seed = cfg.experiment_seed;
    spec.fold_seed = cfg.fold_seed;
    spec.net = cfg.net;
    spec.smote_k = cfg.smote_k;

    auto results = eval::run_experiment(spec, records);
    fs::path dir(args.out_dir);
    io::write_experiment_json(results, (dir / "experiment.json").string());
    auto table = io::render_metrics_table(results);
    std::ofstream(dir / "experiment_table.txt") << table;
    std::cout << table;
    std::cout << "wrote " << (dir / "experiment.json").string() << "\n";
}

struct ReportArgs : CommonArgs {
    std::string metrics_path;
    std::string experiment_path;
    std::string abstention_path;
    std::string out_path;
    std::string svg_dir;
};

void run_report(const ReportArgs& args) {
    std::ostringstream out;
    std::optional<std::pair<eval::MetricsReport, eval::MetricsReport>> metrics;
    if (!args.metrics_path.empty()) {
        metrics = io::read_metrics_json(args.metrics_path);
        out << "Cross-validation metrics\n";
        out << io::render_report_table(metrics->first, metrics->second) << "\n";
    }
    if (!args.experiment_path.empty()) {
        std::ifstream in(args.experiment_path, std::ios::binary);
        if (!in) throw IoError("cannot open " + args.experiment_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("experiment file: ") + e.what());
        }
        out << "Experiment variants (patient level)\n";
        char line[200];
        out << "Variant             Width  Params  Thr   Acc(%)  Sens(%)  Spec(%)   F1(%)  "
               "ECE(%)\n";
        try {
            for (const auto& v : j.at("variants")) {
                const auto& r = v.at("patient").at("rates");
                auto pc = [&](const char* key) {
                    return r.at(key).is_null() ? std::string("   n/a")
                                               : [&] {
                                                     char b[32];
                                                     std::snprintf(b, sizeof b, "%6.1f",
                                                                   r.at(key).get<double>() * 100.0);
                                                     return std::string(b);
                                                 }();
                };
                std::snprintf(line, sizeof line, "%-19s %5d  %6ld  %.2f  %s   %s   %s  %s  %6.1f\n",
                              v.at("name").get<std::string>().c_str(),
                              v.at("input_width").get<int>(), v.at("param_count").get<long>(),
                              v.at("threshold").get<double>(), pc("accuracy").c_str(),
                              pc("sensitivity").c_str(), pc("specificity").c_str(),
                              pc("macro_f1").c_str(),
                              v.at("patient").at("ece").get<double>() * 100.0);
                out << line;
            }
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("experiment file: ") + e.what());
        }
        out << "\n";
    }
    if (!args.abstention_path.empty()) {
        std::ifstream in(args.abstention_path, std::ios::binary);
        if (!in) throw IoError("cannot open " + args.abstention_path);
        nlohmann::json j;
        try {
            in >> j;
            char line[200];
            std::snprintf(line, sizeof line,
                          "Abstention: coverage %.1f%% (%ld of %ld patients retained)\n",
                          j.at("coverage").get<double>() * 100.0, j.at("retained").get<long>(),
                          j.at("total").get<long>());
            out << line;
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("abstention file: ") + e.what());
        }
    }

    if (args.out_path.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream f(args.out_path, std::ios::binary);
        if (!f) throw IoError("cannot open " + args.out_path + " for writing");
        f << out.str();
        std::cout << "wrote " << args.out_path << "\n";
    }

    if (!args.svg_dir.empty() && metrics) {
        ensure_dir(args.svg_dir);
        fs::path dir(args.svg_dir);
        io::write_reliability_svg(metrics->first.calib,
                                  (dir / "reliability_instance.svg").string());
        io::write_reliability_svg(metrics->second.calib,
                                  (dir / "reliability_patient.svg").string());
        std::cout << "wrote SVG plots under " << args.svg_dir << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SweetDeep screening pipeline (synthetic-cohort edition)"};
    app.require_subcommand(1);

    GenEcgArgs gen_ecg_args;
    auto* gen_ecg = app.add_subcommand("gen-ecg", "synthesize an ECG trace with ground truth");
    add_common(gen_ecg, gen_ecg_args);
    gen_ecg->add_option("-o,--out", gen_ecg_args.out_prefix,
                        "output prefix (.csv, .json sidecar, .truth.json)")
        ->required();
    gen_ecg->add_option("--duration", gen_ecg_args.duration, "trace length in seconds");
    gen_ecg->add_option("--fs", gen_ecg_args.fs, "sampling rate in Hz");

    GenCohortArgs gen_cohort_args;
    auto* gen_cohort =
        app.add_subcommand("gen-cohort", "synthesize an ND/T2D/PD instance cohort (JSONL)");
    add_common(gen_cohort, gen_cohort_args);
    gen_cohort->add_option("-o,--out", gen_cohort_args.out_path, "output JSONL path")->required();

    EcgQcArgs ecg_qc_args;
    auto* ecg_qc = app.add_subcommand("ecg-qc", "filter, delineate and QC ECG recordings");
    add_common(ecg_qc, ecg_qc_args);
    ecg_qc->add_option("-i,--input", ecg_qc_args.inputs, "ECG CSV files (JSON sidecars alongside)")
        ->required()
        ->expected(-1);
    ecg_qc->add_option("-d,--out-dir", ecg_qc_args.out_dir,
                       "directory for beats JSON files and the acceptance table")
        ->required();

    ExtractArgs extract_args;
    auto* extract =
        app.add_subcommand("extract", "assemble 35-feature instances from beats + provided data");
    add_common(extract, extract_args);
    extract->add_option("-p,--provided", extract_args.provided_path,
                        "provided-features JSONL (one row per recording)")
        ->required();
    extract->add_option("-b,--beats-dir", extract_args.beats_dir,
                        "directory that beats_file paths are relative to");
    extract->add_option("-o,--out", extract_args.out_path, "output instances JSONL")->required();

    FoldsArgs folds_args;
    auto* folds = app.add_subcommand("folds", "build class-stratified inter-patient folds");
    add_common(folds, folds_args);
    folds->add_option("-i,--input", folds_args.input_path, "instances JSONL")->required();
    folds->add_option("-o,--out", folds_args.out_path, "output folds JSON")->required();

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "train fold or full models");
    add_common(train, train_args);
    train->add_option("-i,--input", train_args.input_path, "instances JSONL")->required();
    train->add_option("-f,--folds", train_args.folds_path, "folds JSON (built on the fly if absent)");
    train->add_option("-o,--out-prefix", train_args.out_prefix,
                      "prefix for model/preproc/trace files")
        ->required();
    train->add_option("--fold", train_args.fold, "which model to train: 0, 1, 2, all or full")
        ->capture_default_str();

    EvaluateArgs evaluate_args;
    auto* evaluate = app.add_subcommand("evaluate", "3-fold cross-validation metrics");
    add_common(evaluate, evaluate_args);
    evaluate->add_option("-i,--input", evaluate_args.input_path, "instances JSONL")->required();
    evaluate->add_option("-f,--folds", evaluate_args.folds_path, "folds JSON")->required();
    evaluate->add_option("-m,--models", evaluate_args.models_prefix,
                         "model prefix from the train subcommand")
        ->required();
    evaluate->add_option("-d,--out-dir", evaluate_args.out_dir, "output directory")->required();
    evaluate->add_option("-t,--threshold", evaluate_args.threshold, "decision threshold");

    ScreenArgs screen_args;
    auto* screen_cmd =
        app.add_subcommand("screen", "patient verdicts with abstention and cohort distributions");
    add_common(screen_cmd, screen_args);
    screen_cmd->add_option("-i,--input", screen_args.input_path, "instances JSONL")->required();
    screen_cmd->add_option("-m,--model", screen_args.full_model_prefix,
                           "prefix of the full-cohort model (train --fold full)")
        ->required();
    screen_cmd->add_option("--cv-preds", screen_args.cv_preds_path,
                           "patient_preds.csv from evaluate, for out-of-fold verdicts");
    screen_cmd->add_option("-d,--out-dir", screen_args.out_dir, "output directory")->required();
    screen_cmd->add_option("-t,--threshold", screen_args.threshold, "decision threshold");
    screen_cmd->add_option("--half-width", screen_args.half_width, "abstention half-width");
    screen_cmd->add_flag("--no-abstain", screen_args.no_abstain, "disable the Don't Know band");
    screen_cmd->add_flag("--tune", screen_args.tune,
                         "pick the largest half-width with abstention <= 10%");

    ExperimentArgs experiment_args;
    auto* experiment =
        app.add_subcommand("experiment", "ablation / size / threshold variant matrix");
    add_common(experiment, experiment_args);
    experiment->add_option("-i,--input", experiment_args.input_path, "instances JSONL")->required();
    experiment->add_option("-d,--out-dir", experiment_args.out_dir, "output directory")->required();
    experiment->add_option("-v,--variant", experiment_args.variants,
                           "variant names (default: full matrix)");

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "render metric files into tables and SVG plots");
    add_common(report, report_args);
    report->add_option("-m,--metrics", report_args.metrics_path, "metrics.json from evaluate");
    report->add_option("-e,--experiment", report_args.experiment_path,
                       "experiment.json from experiment");
    report->add_option("-a,--abstention", report_args.abstention_path,
                       "abstention.json from screen");
    report->add_option("-o,--out", report_args.out_path, "output text file (stdout if absent)");
    report->add_option("--svg-dir", report_args.svg_dir, "directory for SVG plots");

    gen_ecg->callback([&] { run_gen_ecg(gen_ecg_args); });
    gen_cohort->callback([&] { run_gen_cohort(gen_cohort_args); });
    ecg_qc->callback([&] { run_ecg_qc(ecg_qc_args); });
    extract->callback([&] { run_extract(extract_args); });
    folds->callback([&] { run_folds(folds_args); });
    train->callback([&] { run_train(train_args); });
    evaluate->callback([&] { run_evaluate(evaluate_args); });
    screen_cmd->callback([&] { run_screen(screen_args); });
    experiment->callback([&] { run_experiment_cmd(experiment_args); });
    report->callback([&] { run_report(report_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_json("usage", e.what());
        return kExitParam;
    } catch (const ParamError& e) {
        error_json("param", e.what());
        return kExitParam;
    } catch (const IoError& e) {
        error_json("io", e.what());
        return kExitIo;
    } catch (const FormatError& e) {
        error_json("format", e.what());
        return kExitFormat;
    } catch (const DataError& e) {
        error_json("data", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        error_json("internal", e.what());
        return 1;
    }
    return 0;
}
