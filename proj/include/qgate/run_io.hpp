#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgate/experiments.hpp"
#include "qgate/inference.hpp"
#include "qgate/rnn_solver.hpp"

namespace qgate {

inline constexpr const char* kToolVersion = "0.3.1";

/// Provenance echoed into every artifact.
struct RunManifest {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;
    std::string started_at;   // empty when timestamps are suppressed
    std::string finished_at;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);
/// UTC ISO-8601 timestamp with second resolution.
std::string utc_timestamp();

nlohmann::json solve_result_to_json(const SolveResult& r);
SolveResult solve_result_from_json(const nlohmann::json& j);

nlohmann::json train_run_to_json(const TrainRun& r);
TrainRun train_run_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const GateReport& r);

/// Document layout: {"manifest": ..., "<kind>": ...} plus extras.
void save_run(const std::filesystem::path& path, const nlohmann::json& document);
nlohmann::json load_run(const std::filesystem::path& path);

/// CSV with header m,seed,metric,converged,wall_time_s; numbers in
/// shortest round-trip form.
std::string scan_csv(const std::vector<ScanRecord>& records);
std::vector<ScanRecord> parse_scan_csv(const std::string& text);
nlohmann::json summary_to_json(const std::vector<ScanSummaryRow>& rows);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace qgate
