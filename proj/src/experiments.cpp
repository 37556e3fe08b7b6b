#include "qgate/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <string>
#include <thread>

#include "qgate/error.hpp"
#include "qgate/linalg.hpp"
#include "qgate/slm.hpp"

namespace qgate {
namespace {

enum StreamTag : std::uint64_t { kReservoir = 1, kComplement = 2, kDataset = 3, kWeights = 4 };

}  // namespace

TrialStreams trial_streams(std::uint64_t seed, std::size_t m) {
    const RandomSource trial = RandomSource{seed, 0}.derive(m);
    return {trial.derive(kReservoir), trial.derive(kComplement), trial.derive(kDataset),
            mix64(trial.derive(kWeights).stream)};
}

std::string_view to_string(ScanMetric metric) noexcept {
    return metric == ScanMetric::epochs_to_threshold ? "epochs_to_threshold" : "final_cost";
}

ScanMetric scan_metric_from_string(std::string_view name) {
    if (name == "epochs_to_threshold" || name == "epochs") return ScanMetric::epochs_to_threshold;
    if (name == "final_cost" || name == "cost") return ScanMetric::final_cost;
    throw ConfigError("unknown metric '" + std::string(name) + "'");
}

void ScanConfig::validate() const {
    if (m_values.empty()) throw ConfigError("scan needs at least one embedding dimension");
    if (seeds.empty()) throw ConfigError("scan needs at least one seed");
    for (std::size_t m : m_values)
        if (m < gate_dim)
            throw ConfigError("embedding dimension " + std::to_string(m) + " is below the gate dimension");
    (void)gate_by_name(gate, gate_dim);
    if (solver == ScanSolver::train) {
        if (n_train == 0 || n_valid == 0) throw ConfigError("dataset split counts must be positive");
        TrainConfig probe = trainer;
        probe.logical_dim = gate_dim;
        probe.validate();
    } else {
        rnn.validate();
        if (!(rnn_learning_rate > 0.0)) throw ConfigError("RNN learning rate must be positive");
    }
}

ScanConfig preset_epoch_scaling() {
    ScanConfig c;
    c.m_values = {4, 6, 8, 10, 12, 14, 16};
    c.seeds = {1, 2, 3, 4, 5};
    c.metric = ScanMetric::epochs_to_threshold;
    c.trainer.learning_rate = 0.5;
    c.trainer.valid_threshold = 1e-3;
    c.trainer.max_epochs = 5000;
    return c;
}

ScanConfig preset_phase_only() {
    ScanConfig c;
    c.m_values = {6, 9, 15, 30};
    c.seeds = {1, 2, 3, 4, 5};
    c.metric = ScanMetric::final_cost;
    c.epoch_budget = 1000;
    c.trainer.constraint = ModulatorConstraint::phase();
    c.trainer.valid_threshold = 1e-12;
    c.trainer.cost_span = CostSpan::first_n;
    c.logical_inputs = true;
    return c;
}

ScanConfig preset_amplitude(std::optional<int> bits) {
    ScanConfig c;
    c.m_values = {6, 9, 15, 30};
    c.seeds = {1, 2, 3, 4, 5};
    c.metric = ScanMetric::final_cost;
    c.epoch_budget = 1000;
    c.trainer.constraint = ModulatorConstraint::amplitude(bits);
    c.trainer.valid_threshold = 1e-12;
    c.trainer.cost_span = CostSpan::all_m;
    c.logical_inputs = true;
    return c;
}

ScanConfig preset_rnn_dynamics() {
    ScanConfig c;
    c.solver = ScanSolver::rnn;
    c.m_values = {3, 5, 8};
    c.seeds = {1, 2, 3, 4, 5};
    c.metric = ScanMetric::final_cost;
    c.rnn_mode = EmbeddingMode::unitary;
    c.rnn_learning_rate = 100.0;
    return c;
}

ScanConfig preset_by_name(std::string_view name, std::optional<int> bits) {
    if (name == "fig3c") return preset_epoch_scaling();
    if (name == "fig4a") return preset_phase_only();
    if (name == "fig4b") return preset_amplitude(bits);
    if (name == "fig2b") return preset_rnn_dynamics();
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig2b, fig3c, fig4a or fig4b)");
}

ScanRecord run_trial(const ScanConfig& config, std::size_t m, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    const GateSpec gate = gate_by_name(config.gate, config.gate_dim);
    const TrialStreams streams = trial_streams(seed, m);
    const ComplexMatrix reservoir = haar_unitary(m, streams.reservoir);

    ScanRecord record;
    record.m = m;
    record.seed = seed;

    if (config.solver == ScanSolver::rnn) {
        RnnProblem problem{reservoir, embed_target(gate, m, config.rnn_mode, streams.complement),
                           config.rnn_learning_rate};
        try {
            const SolveResult result = solve(problem, config.rnn);
            record.converged = result.converged;
            record.metric_value = config.metric == ScanMetric::final_cost
                                      ? result.final_error
                                      : static_cast<double>(result.steps);
        } catch (const DivergenceError& e) {
            record.converged = false;
            record.metric_value = e.last_finite_error();
        }
    } else {
        const TargetEmbedding target = embed_target(gate, m, EmbeddingMode::unitary, streams.complement);
        const Dataset data = generate_dataset(target.target, config.n_train, config.n_valid,
                                              streams.dataset, config.logical_inputs ? gate.dim : 0);
        TrainConfig trainer = config.trainer;
        trainer.seed = streams.weights_seed;
        trainer.logical_dim = gate.dim;
        if (config.epoch_budget > 0) trainer.max_epochs = config.epoch_budget;
        try {
            const TrainRun run = constrained_train(reservoir, data, trainer);
            record.converged = run.converged;
            record.metric_value = config.metric == ScanMetric::final_cost
                                      ? run.valid_history.back()
                                      : static_cast<double>(run.epochs_used);
        } catch (const DivergenceError& e) {
            record.converged = false;
            record.metric_value = e.last_finite_error();
        }
    }
    if (!std::isfinite(record.metric_value)) record.metric_value = std::numeric_limits<double>::max();
    record.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

std::size_t default_workers() {
    if (const char* env = std::getenv("QGATE_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ScanRecord> run_scan(const ScanConfig& config) {
    config.validate();
    std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
    for (std::size_t m : config.m_values)
        for (std::uint64_t seed : config.seeds) jobs.emplace_back(m, seed);

    std::vector<ScanRecord> records(jobs.size());
    const std::size_t workers = std::min(config.workers > 0 ? config.workers : default_workers(), jobs.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1))
            records[i] = run_trial(config, jobs[i].first, jobs[i].second);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    std::sort(records.begin(), records.end(), [](const ScanRecord& a, const ScanRecord& b) {
        return a.m != b.m ? a.m < b.m : a.seed < b.seed;
    });
    return records;
}

std::vector<ScanSummaryRow> aggregate(const std::vector<ScanRecord>& records) {
    if (records.empty()) throw ConfigError("aggregate: no records");
    std::map<std::size_t, std::vector<const ScanRecord*>> by_m;
    for (const ScanRecord& r : records) by_m[r.m].push_back(&r);

    std::vector<ScanSummaryRow> rows;
    for (auto& [m, group] : by_m) {
        std::sort(group.begin(), group.end(),
                  [](const ScanRecord* a, const ScanRecord* b) { return a->seed < b->seed; });
        ScanSummaryRow row;
        row.m = m;
        row.count = group.size();
        row.min = group.front()->metric_value;
        row.max = group.front()->metric_value;
        double sum = 0.0;
        std::size_t converged = 0;
        for (const ScanRecord* r : group) {
            sum += r->metric_value;
            row.min = std::min(row.min, r->metric_value);
            row.max = std::max(row.max, r->metric_value);
            converged += r->converged ? 1 : 0;
        }
        row.mean = sum / static_cast<double>(row.count);
        if (row.count > 1) {
            double ss = 0.0;
            for (const ScanRecord* r : group) ss += (r->metric_value - row.mean) * (r->metric_value - row.mean);
            row.stddev = std::sqrt(ss / static_cast<double>(row.count - 1));
        }
        row.converged_fraction = static_cast<double>(converged) / static_cast<double>(row.count);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qgate
