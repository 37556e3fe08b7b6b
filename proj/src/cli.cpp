#include "qgate/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgate/error.hpp"
#include "qgate/experiments.hpp"
#include "qgate/gates.hpp"
#include "qgate/inference.hpp"
#include "qgate/linalg.hpp"
#include "qgate/matrix_io.hpp"
#include "qgate/rnn_solver.hpp"
#include "qgate/run_io.hpp"
#include "qgate/slm.hpp"

namespace qgate::cli {
namespace {

using nlohmann::json;

struct Common {
    std::uint64_t seed = 0;
    std::string out;
    bool strict = false;
    bool no_timestamps = false;
};

struct GateOpts {
    std::string name = "x";
    std::size_t dim = 3;
    std::string file;  // custom gate, overrides name
};

struct SolveOpts {
    GateOpts gate;
    std::size_t embed = 5;
    std::string mode = "unitary";
    double mu = 100.0;
    double tol = 1e-8;
    double max_time = 10.0;
    std::string init = "zero";
    std::string reservoir;
};

struct TrainOpts {
    GateOpts gate;
    std::size_t embed = 5;
    std::size_t n_train = 100;
    std::size_t n_valid = 50;
    double eps = 1e-3;
    double lr = 0.5;
    std::size_t max_epochs = 5000;
    std::string constraint = "none";
    std::optional<int> bits;
    std::string span = "all_m";
    bool logical_inputs = false;
    std::string reservoir;
};

struct ScanOpts {
    std::string preset;
    std::string gate = "x";
    std::size_t dim = 3;
    std::vector<std::size_t> m_values;
    std::vector<std::uint64_t> seeds;
    std::string solver = "train";
    std::string metric;
    std::string constraint;
    std::optional<int> bits;
    std::string span;
    std::optional<bool> logical_inputs;
    std::optional<double> eps;
    std::optional<double> lr;
    std::optional<std::size_t> budget;
    std::optional<std::size_t> n_train;
    std::optional<std::size_t> n_valid;
    std::size_t workers = 0;
    std::string summary;
};

struct VerifyOpts {
    std::string run;
    std::string weights;
    std::string reservoir;
    GateOpts gate;
    std::size_t embed = 0;
    double tol = 1e-3;
};

GateSpec resolve_gate(const GateOpts& g) {
    if (!g.file.empty()) return custom_gate(load_matrix(g.file, "gate"));
    return gate_by_name(g.name, g.dim);
}

void add_gate_flags(CLI::App* app, GateOpts& g) {
    app->add_option("--gate", g.name, "Catalog gate: x, x2, z")->capture_default_str();
    app->add_option("--dim", g.dim, "Logical dimension N")->capture_default_str();
    app->add_option("--gate-file", g.file, "Custom unitary gate as a JSON matrix");
}

void add_common_flags(CLI::App* app, Common& c, bool with_out = true) {
    app->add_option("--seed", c.seed, "Base seed")->capture_default_str();
    if (with_out) app->add_option("--out", c.out, "Output file");
    app->add_flag("--strict", c.strict, "Exit 1 when the run does not converge");
    app->add_flag("--no-timestamps", c.no_timestamps,
                  "Omit timestamps and wall times so reruns are byte-identical");
}

ComplexMatrix reservoir_for(const std::string& path, std::size_t m, const TrialStreams& streams) {
    if (path.empty()) return haar_unitary(m, streams.reservoir);
    ComplexMatrix u = load_unitary(path, "reservoir");
    if (u.rows() != m) throw DimensionError("reservoir is " + std::to_string(u.rows()) +
                                            "x" + std::to_string(u.cols()) + ", expected M = " +
                                            std::to_string(m));
    return u;
}

RunManifest start_manifest(const std::string& command, const Common& c, json config) {
    RunManifest m;
    m.command = command;
    m.config = std::move(config);
    m.seed = c.seed;
    if (!c.no_timestamps) m.started_at = utc_timestamp();
    if (!c.out.empty()) m.outputs.push_back(c.out);
    return m;
}

void finish_manifest(RunManifest& m, const Common& c) {
    if (!c.no_timestamps) m.finished_at = utc_timestamp();
}

std::ostream& print_matrix(std::ostream& os, const ComplexMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const cplx z = m(i, j);
            const double re = std::abs(z.real()) < 1e-15 ? 0.0 : z.real();
            const double im = std::abs(z.imag()) < 1e-15 ? 0.0 : z.imag();
            os << (j ? "  " : "") << format_double(re);
            if (im != 0.0) os << (im < 0 ? "-" : "+") << format_double(std::abs(im)) << "i";
        }
        os << '\n';
    }
    return os;
}

int cmd_gate(const GateOpts& g, bool as_json, std::ostream& out) {
    const GateSpec gate = resolve_gate(g);
    if (as_json)
        out << matrix_to_json(gate.matrix).dump(2) << '\n';
    else
        print_matrix(out, gate.matrix);
    return kExitOk;
}

int cmd_solve(const SolveOpts& o, const Common& c, std::ostream& out, std::ostream& err) {
    const GateSpec gate = resolve_gate(o.gate);
    if (o.embed < gate.dim) throw ConfigError("--embed must be at least --dim");
    OdeConfig ode;
    ode.max_time = o.max_time;
    ode.residual_tol = o.tol;
    if (o.init == "zero") {
        ode.init = InitKind::zero;
    } else if (o.init == "random") {
        ode.init = InitKind::random;
    } else {
        throw ConfigError("--init must be zero or random");
    }
    ode.init_seed = c.seed;
    ode.validate();

    const TrialStreams streams = trial_streams(c.seed, o.embed);
    const EmbeddingMode mode = embedding_mode_from_string(o.mode);
    RnnProblem problem{reservoir_for(o.reservoir, o.embed, streams),
                       embed_target(gate, o.embed, mode, streams.complement), o.mu};
    problem.validate();

    json config = {{"gate", o.gate.file.empty() ? o.gate.name : "custom"},
                   {"dim", gate.dim},
                   {"embed", o.embed},
                   {"mode", to_string(mode)},
                   {"mu", o.mu},
                   {"tol", o.tol},
                   {"max_time", o.max_time},
                   {"init", o.init}};
    RunManifest manifest = start_manifest("solve-rnn", c, std::move(config));
    if (!o.reservoir.empty()) manifest.inputs.push_back(o.reservoir);
    if (!o.gate.file.empty()) manifest.inputs.push_back(o.gate.file);

    SolveResult result;
    try {
        result = solve(problem, ode);
    } catch (const DivergenceError& e) {
        err << "solve-rnn: " << e.what() << '\n';
        return c.strict ? kExitNotConverged : kExitOk;
    }
    finish_manifest(manifest, c);

    out << "converged " << (result.converged ? "yes" : "no") << " error "
        << format_double(result.final_error) << " steps " << result.steps << " defect "
        << format_double(result.unitarity_defect) << '\n';
    if (!c.out.empty()) {
        json doc = {{"manifest", manifest_to_json(manifest)},
                    {"result", solve_result_to_json(result)},
                    {"reservoir", matrix_to_json(problem.reservoir)},
                    {"target", matrix_to_json(problem.embedding.target)}};
        save_run(c.out, doc);
    }
    return (c.strict && !result.converged) ? kExitNotConverged : kExitOk;
}

int cmd_train(const TrainOpts& o, const Common& c, std::ostream& out, std::ostream& err) {
    const GateSpec gate = resolve_gate(o.gate);
    if (o.embed < gate.dim) throw ConfigError("--embed must be at least --dim");
    TrainConfig cfg;
    cfg.learning_rate = o.lr;
    cfg.max_epochs = o.max_epochs;
    cfg.valid_threshold = o.eps;
    cfg.constraint.kind = constraint_kind_from_string(o.constraint);
    cfg.constraint.bits = o.bits;
    cfg.cost_span = cost_span_from_string(o.span);
    cfg.logical_dim = gate.dim;

    const TrialStreams streams = trial_streams(c.seed, o.embed);
    cfg.seed = streams.weights_seed;
    cfg.validate();
    if (o.n_train == 0 || o.n_valid == 0) throw ConfigError("--ntrain and --nvalid must be positive");

    const ComplexMatrix u = reservoir_for(o.reservoir, o.embed, streams);
    const TargetEmbedding target = embed_target(gate, o.embed, EmbeddingMode::unitary, streams.complement);
    const Dataset data = generate_dataset(target.target, o.n_train, o.n_valid, streams.dataset,
                                          o.logical_inputs ? gate.dim : 0);

    json config = {{"gate", o.gate.file.empty() ? o.gate.name : "custom"},
                   {"dim", gate.dim},
                   {"embed", o.embed},
                   {"ntrain", o.n_train},
                   {"nvalid", o.n_valid},
                   {"eps", o.eps},
                   {"lr", o.lr},
                   {"max_epochs", o.max_epochs},
                   {"constraint", describe(cfg.constraint)},
                   {"span", to_string(cfg.cost_span)},
                   {"logical_inputs", o.logical_inputs}};
    RunManifest manifest = start_manifest("train", c, std::move(config));
    if (!o.reservoir.empty()) manifest.inputs.push_back(o.reservoir);
    if (!o.gate.file.empty()) manifest.inputs.push_back(o.gate.file);

    TrainRun run;
    try {
        run = constrained_train(u, data, cfg);
    } catch (const DivergenceError& e) {
        err << "train: " << e.what() << '\n';
        return c.strict ? kExitNotConverged : kExitOk;
    }
    finish_manifest(manifest, c);
    const GateReport report = verify_gate(u, run.weights, target);

    out << "converged " << (run.converged ? "yes" : "no") << " epochs " << run.epochs_used
        << " valid " << format_double(run.valid_history.empty() ? 0.0 : run.valid_history.back())
        << " gate_distance " << format_double(report.gate_distance) << '\n';
    if (!c.out.empty()) {
        json doc = {{"manifest", manifest_to_json(manifest)},
                    {"run", train_run_to_json(run)},
                    {"report", report_to_json(report)},
                    {"reservoir", matrix_to_json(u)},
                    {"target", matrix_to_json(target.target)},
                    {"gate", matrix_to_json(gate.matrix)}};
        save_run(c.out, doc);
    }
    return (c.strict && !run.converged) ? kExitNotConverged : kExitOk;
}

ScanConfig build_scan(const ScanOpts& o) {
    ScanConfig cfg;
    if (!o.preset.empty()) {
        cfg = preset_by_name(o.preset, o.bits);
    } else {
        if (o.solver == "rnn") {
            cfg.solver = ScanSolver::rnn;
            cfg.metric = ScanMetric::final_cost;
        } else if (o.solver != "train") {
            throw ConfigError("--solver must be train or rnn");
        }
        cfg.seeds = {1, 2, 3, 4, 5};
    }
    if (o.preset.empty() || o.gate != "x") cfg.gate = o.gate;
    if (o.preset.empty() || o.dim != 3) cfg.gate_dim = o.dim;
    if (!o.m_values.empty()) cfg.m_values = o.m_values;
    if (!o.seeds.empty()) cfg.seeds = o.seeds;
    if (!o.metric.empty()) cfg.metric = scan_metric_from_string(o.metric);
    if (!o.constraint.empty()) cfg.trainer.constraint.kind = constraint_kind_from_string(o.constraint);
    if (o.bits) cfg.trainer.constraint.bits = o.bits;
    if (!o.span.empty()) cfg.trainer.cost_span = cost_span_from_string(o.span);
    if (o.logical_inputs) cfg.logical_inputs = *o.logical_inputs;
    if (o.eps) cfg.trainer.valid_threshold = *o.eps;
    if (o.lr) cfg.trainer.learning_rate = *o.lr;
    if (o.budget) cfg.epoch_budget = *o.budget;
    if (o.n_train) cfg.n_train = *o.n_train;
    if (o.n_valid) cfg.n_valid = *o.n_valid;
    cfg.workers = o.workers;
    cfg.validate();
    return cfg;
}

json scan_config_json(const ScanConfig& cfg, const std::string& preset) {
    json j = {{"preset", preset},
              {"gate", cfg.gate},
              {"dim", cfg.gate_dim},
              {"m_values", cfg.m_values},
              {"seeds", cfg.seeds},
              {"solver", cfg.solver == ScanSolver::train ? "train" : "rnn"},
              {"metric", to_string(cfg.metric)}};
    if (cfg.solver == ScanSolver::train) {
        j["constraint"] = describe(cfg.trainer.constraint);
        j["span"] = to_string(cfg.trainer.cost_span);
        j["logical_inputs"] = cfg.logical_inputs;
        j["eps"] = cfg.trainer.valid_threshold;
        j["lr"] = cfg.trainer.learning_rate;
        j["max_epochs"] = cfg.epoch_budget > 0 ? cfg.epoch_budget : cfg.trainer.max_epochs;
        j["ntrain"] = cfg.n_train;
        j["nvalid"] = cfg.n_valid;
    } else {
        j["mode"] = to_string(cfg.rnn_mode);
        j["mu"] = cfg.rnn_learning_rate;
        j["tol"] = cfg.rnn.residual_tol;
    }
    return j;
}

int cmd_scan(const ScanOpts& o, const Common& c, std::ostream& out) {
    const ScanConfig cfg = build_scan(o);
    std::string summary_path = o.summary;
    if (summary_path.empty() && !c.out.empty()) summary_path = c.out + ".summary.json";

    RunManifest manifest = start_manifest("scan", c, scan_config_json(cfg, o.preset));
    if (!summary_path.empty()) manifest.outputs.push_back(summary_path);

    std::vector<ScanRecord> records = run_scan(cfg);
    if (c.no_timestamps)
        for (ScanRecord& r : records) r.wall_time = 0.0;
    finish_manifest(manifest, c);

    const std::string csv = scan_csv(records);
    if (c.out.empty()) {
        out << csv;
    } else {
        std::ofstream file(c.out);
        if (!file) throw ConfigError("cannot write '" + c.out + "'");
        file << csv;
    }
    const std::vector<ScanSummaryRow> rows = aggregate(records);
    if (!summary_path.empty()) {
        save_run(summary_path, {{"manifest", manifest_to_json(manifest)}, {"summary", summary_to_json(rows)}});
    }
    if (!c.out.empty()) {
        for (const ScanSummaryRow& r : rows)
            out << "m " << r.m << " mean " << format_double(r.mean) << " sd " << format_double(r.stddev)
                << " converged " << format_double(r.converged_fraction) << '\n';
    }
    if (c.strict)
        for (const ScanRecord& r : records)
            if (!r.converged) return kExitNotConverged;
    return kExitOk;
}

int cmd_verify(const VerifyOpts& o, const Common& c, std::ostream& out) {
    ComplexMatrix weights;
    ComplexMatrix reservoir;
    std::optional<ComplexMatrix> full_target;
    GateSpec gate;
    if (!o.run.empty()) {
        if (!o.weights.empty()) throw ConfigError("--run and --weights are mutually exclusive");
        const json doc = load_run(o.run);
        if (doc.contains("run"))
            weights = train_run_from_json(doc.at("run")).weights;
        else if (doc.contains("result"))
            weights = solve_result_from_json(doc.at("result")).solution;
        else
            throw ParseError("run file has neither 'run' nor 'result'");
        if (!doc.contains("reservoir")) throw ParseError("missing field 'reservoir'");
        reservoir = matrix_from_json(doc.at("reservoir"), "reservoir");
        if (unitarity_defect(reservoir) > 1e-10) throw ValidationError("reservoir is not unitary");
        if (doc.contains("target")) full_target = matrix_from_json(doc.at("target"), "target");
        gate = doc.contains("gate") ? custom_gate(matrix_from_json(doc.at("gate"), "gate"))
                                    : resolve_gate(o.gate);
        if (!o.reservoir.empty()) reservoir = load_unitary(o.reservoir, "reservoir");
    } else {
        if (o.weights.empty() || o.reservoir.empty())
            throw ConfigError("verify needs --run, or --weights with --reservoir");
        weights = load_matrix(o.weights, "weights");
        reservoir = load_unitary(o.reservoir, "reservoir");
        gate = resolve_gate(o.gate);
    }
    const std::size_t m = reservoir.rows();
    if (weights.rows() != m || weights.cols() != m)
        throw DimensionError("weights must be " + std::to_string(m) + "x" + std::to_string(m));
    if (o.embed != 0 && o.embed != m) throw DimensionError("--embed does not match the reservoir");
    if (gate.dim > m) throw DimensionError("gate is larger than the reservoir");

    // Without a stored target only the logical rows can be checked.
    TargetEmbedding target = embed_target(gate, m, EmbeddingMode::projected, RandomSource{});
    if (full_target) {
        if (full_target->cols() != m || (full_target->rows() != m && full_target->rows() != gate.dim))
            throw DimensionError("stored target does not match the reservoir");
        target.mode = full_target->rows() == m ? EmbeddingMode::unitary : EmbeddingMode::projected;
        target.target = *full_target;
    }
    const GateReport report = verify_gate(reservoir, weights, target);
    out << report_to_json(report).dump(2) << '\n';
    if (!c.out.empty()) {
        RunManifest manifest = start_manifest("verify", c, {{"tol", o.tol}});
        if (!o.run.empty()) manifest.inputs.push_back(o.run);
        if (!o.weights.empty()) manifest.inputs.push_back(o.weights);
        if (!o.reservoir.empty()) manifest.inputs.push_back(o.reservoir);
        finish_manifest(manifest, c);
        save_run(c.out, {{"manifest", manifest_to_json(manifest)}, {"report", report_to_json(report)}});
    }
    return (c.strict && report.gate_distance > o.tol) ? kExitNotConverged : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gate design through random linear media", "qgate"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Common common;

    GateOpts gate_opts;
    bool gate_json = false;
    CLI::App* gate = app.add_subcommand("gate", "Print a catalog gate matrix");
    gate->add_option("--name", gate_opts.name, "x, x2 or z")->capture_default_str();
    gate->add_option("--dim", gate_opts.dim, "Logical dimension")->capture_default_str();
    gate->add_option("--file", gate_opts.file, "Validate and print a custom gate");
    gate->add_flag("--json", gate_json, "Print in the JSON matrix format");

    SolveOpts solve_opts;
    CLI::App* solve_cmd = app.add_subcommand("solve-rnn", "Design S for a known reservoir");
    add_gate_flags(solve_cmd, solve_opts.gate);
    solve_cmd->add_option("--embed", solve_opts.embed, "Embedding dimension M")->capture_default_str();
    solve_cmd->add_option("--mode", solve_opts.mode, "unitary or projected")->capture_default_str();
    solve_cmd->add_option("--mu", solve_opts.mu, "Learning rate")->capture_default_str();
    solve_cmd->add_option("--tol", solve_opts.tol, "Residual tolerance")->capture_default_str();
    solve_cmd->add_option("--max-time", solve_opts.max_time, "Integration horizon")->capture_default_str();
    solve_cmd->add_option("--init", solve_opts.init, "zero or random")->capture_default_str();
    solve_cmd->add_option("--reservoir", solve_opts.reservoir, "Reservoir matrix file");
    add_common_flags(solve_cmd, common);

    TrainOpts train_opts;
    CLI::App* train_cmd = app.add_subcommand("train", "Learn S from labelled samples");
    add_gate_flags(train_cmd, train_opts.gate);
    train_cmd->add_option("--embed", train_opts.embed, "Embedding dimension M")->capture_default_str();
    train_cmd->add_option("--ntrain", train_opts.n_train, "Training samples")->capture_default_str();
    train_cmd->add_option("--nvalid", train_opts.n_valid, "Validation samples")->capture_default_str();
    train_cmd->add_option("--eps", train_opts.eps, "Validation threshold")->capture_default_str();
    train_cmd->add_option("--lr", train_opts.lr, "Step as a fraction of 1/lambda_max")->capture_default_str();
    train_cmd->add_option("--max-epochs", train_opts.max_epochs, "Epoch budget")->capture_default_str();
    train_cmd->add_option("--constraint", train_opts.constraint, "none, phase or amp")->capture_default_str();
    train_cmd->add_option("--bits", train_opts.bits, "Modulator bit depth (amp or phase)");
    train_cmd->add_option("--span", train_opts.span, "all_m or first_n")->capture_default_str();
    train_cmd->add_flag("--logical-inputs", train_opts.logical_inputs,
                        "Samples occupy the first N modes only");
    train_cmd->add_option("--reservoir", train_opts.reservoir, "Reservoir matrix file");
    add_common_flags(train_cmd, common);

    ScanOpts scan_opts;
    CLI::App* scan = app.add_subcommand("scan", "Sweep embedding dimensions and seeds");
    scan->add_option("--preset", scan_opts.preset, "fig2b, fig3c, fig4a or fig4b");
    scan->add_option("--gate", scan_opts.gate, "Catalog gate: x, x2, z")->capture_default_str();
    scan->add_option("--dim", scan_opts.dim, "Logical dimension N")->capture_default_str();
    scan->add_option("--m", scan_opts.m_values, "Embedding dimensions")->delimiter(',');
    scan->add_option("--seeds", scan_opts.seeds, "Seeds")->delimiter(',');
    scan->add_option("--solver", scan_opts.solver, "train or rnn")->capture_default_str();
    scan->add_option("--metric", scan_opts.metric, "epochs_to_threshold or final_cost");
    scan->add_option("--constraint", scan_opts.constraint, "none, phase or amp");
    scan->add_option("--bits", scan_opts.bits, "Modulator bit depth (amp or phase)");
    scan->add_option("--span", scan_opts.span, "all_m or first_n");
    scan->add_option("--logical-inputs", scan_opts.logical_inputs, "true or false");
    scan->add_option("--eps", scan_opts.eps, "Validation threshold");
    scan->add_option("--lr", scan_opts.lr, "Step as a fraction of 1/lambda_max");
    scan->add_option("--budget", scan_opts.budget, "Epoch budget per trial");
    scan->add_option("--ntrain", scan_opts.n_train, "Training samples");
    scan->add_option("--nvalid", scan_opts.n_valid, "Validation samples");
    scan->add_option("--workers", scan_opts.workers, "0 uses QGATE_WORKERS or all cores");
    scan->add_option("--summary", scan_opts.summary, "Summary JSON path");
    add_common_flags(scan, common);

    VerifyOpts verify_opts;
    CLI::App* verify = app.add_subcommand("verify", "Check trained weights against the target");
    verify->add_option("--run", verify_opts.run, "Output of train or solve-rnn");
    verify->add_option("--weights", verify_opts.weights, "Weights matrix file");
    verify->add_option("--reservoir", verify_opts.reservoir, "Reservoir matrix file");
    add_gate_flags(verify, verify_opts.gate);
    verify->add_option("--embed", verify_opts.embed, "Expected embedding dimension, checked against the reservoir");
    verify->add_option("--tol", verify_opts.tol, "Gate distance accepted by --strict")->capture_default_str();
    add_common_flags(verify, common);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "qgate: " << e.what() << '\n';
        const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kExitInvalid;
    }

    try {
        if (gate->parsed()) return cmd_gate(gate_opts, gate_json, out);
        if (solve_cmd->parsed()) return cmd_solve(solve_opts, common, out, err);
        if (train_cmd->parsed()) return cmd_train(train_opts, common, out, err);
        if (scan->parsed()) return cmd_scan(scan_opts, common, out);
        if (verify->parsed()) return cmd_verify(verify_opts, common, out);
    } catch (const Error& e) {
        err << "qgate: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const nlohmann::json::exception& e) {
        err << "qgate: " << e.what() << '\n';
        return kExitInvalid;
    }
    err << app.help();
    return kExitInvalid;
}

}  // namespace qgate::cli
