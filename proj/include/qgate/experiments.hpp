#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qgate/gates.hpp"
#include "qgate/inference.hpp"
#include "qgate/random.hpp"
#include "qgate/rnn_solver.hpp"

namespace qgate {

/// Random streams of one (m, seed) trial. Every CLI run and every scan
/// record draws from these, so a scan record can be replayed by a single
/// `train`/`solve-rnn` invocation with the same seed and embedding.
struct TrialStreams {
    RandomSource reservoir;
    RandomSource complement;
    RandomSource dataset;
    std::uint64_t weights_seed;
};

TrialStreams trial_streams(std::uint64_t seed, std::size_t m);

enum class ScanSolver { train, rnn };
enum class ScanMetric { epochs_to_threshold, final_cost };

std::string_view to_string(ScanMetric metric) noexcept;
ScanMetric scan_metric_from_string(std::string_view name);

struct ScanConfig {
    std::string gate = "x";
    std::size_t gate_dim = 3;
    std::vector<std::size_t> m_values;
    std::vector<std::uint64_t> seeds;
    ScanSolver solver = ScanSolver::train;
    ScanMetric metric = ScanMetric::epochs_to_threshold;

    // train solver
    TrainConfig trainer;
    std::size_t n_train = 100;
    std::size_t n_valid = 50;
    /// Inputs live on the first N modes only (ancillas left dark).
    bool logical_inputs = false;
    /// Overrides trainer.max_epochs when non-zero.
    std::size_t epoch_budget = 0;

    // rnn solver
    EmbeddingMode rnn_mode = EmbeddingMode::unitary;
    double rnn_learning_rate = 100.0;
    OdeConfig rnn;

    /// 0 picks QGATE_WORKERS or the hardware concurrency.
    std::size_t workers = 0;

    void validate() const;
};

struct ScanRecord {
    std::size_t m = 0;
    std::uint64_t seed = 0;
    double metric_value = 0.0;
    bool converged = false;
    double wall_time = 0.0;
};

struct ScanSummaryRow {
    std::size_t m = 0;
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample deviation, 0 for a single record
    double min = 0.0;
    double max = 0.0;
    double converged_fraction = 0.0;
};

/// Epoch-scaling scan: epochs to reach the validation threshold vs M.
ScanConfig preset_epoch_scaling();
/// Phase-only modulator, final cost after a fixed budget vs M.
ScanConfig preset_phase_only();
/// Signed amplitude modulator with optional bit depth, final cost vs M.
ScanConfig preset_amplitude(std::optional<int> bits);
/// RNN training dynamics (unitary mode) over a few embeddings.
ScanConfig preset_rnn_dynamics();
/// Lookup by name: fig3c, fig4a, fig4b, fig2b.
ScanConfig preset_by_name(std::string_view name, std::optional<int> bits = std::nullopt);

/// One trial, reproducible on its own from (config, m, seed). Divergence
/// is recorded as converged = false with the last finite metric.
ScanRecord run_trial(const ScanConfig& config, std::size_t m, std::uint64_t seed);

/// All (m, seed) trials, run on `workers` threads, sorted by (m, seed).
std::vector<ScanRecord> run_scan(const ScanConfig& config);

/// Per-M statistics in ascending M. Throws ConfigError on empty input.
std::vector<ScanSummaryRow> aggregate(const std::vector<ScanRecord>& records);

/// Worker count from QGATE_WORKERS, else hardware concurrency (at least 1).
std::size_t default_workers();

}  // namespace qgate
