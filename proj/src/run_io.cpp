#include "qgate/run_io.hpp"

#include <charconv>
#include <ctime>
#include <sstream>

#include "qgate/error.hpp"
#include "qgate/matrix_io.hpp"

namespace qgate {
namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing field '") + where + "." + key + "'");
    return j.at(key);
}

template <typename T>
T require_as(const json& j, const char* key, const char* where) {
    const json& v = require(j, key, where);
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("field '") + where + "." + key + "' has the wrong type");
    }
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json manifest_to_json(const RunManifest& m) {
    json j = {{"command", m.command},         {"config", m.config},   {"tool_version", m.tool_version},
              {"seed", m.seed},               {"inputs", m.inputs},   {"outputs", m.outputs}};
    if (!m.started_at.empty()) j["started_at"] = m.started_at;
    if (!m.finished_at.empty()) j["finished_at"] = m.finished_at;
    return j;
}

RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    m.command = require_as<std::string>(j, "command", "manifest");
    m.config = require(j, "config", "manifest");
    m.tool_version = require_as<std::string>(j, "tool_version", "manifest");
    m.seed = require_as<std::uint64_t>(j, "seed", "manifest");
    m.inputs = j.value("inputs", std::vector<std::string>{});
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.started_at = j.value("started_at", std::string{});
    m.finished_at = j.value("finished_at", std::string{});
    return m;
}

json solve_result_to_json(const SolveResult& r) {
    json history = json::array();
    for (const auto& [t, e] : r.error_history) history.push_back({t, e});
    return {{"solution", matrix_to_json(r.solution)},
            {"error_history", std::move(history)},
            {"converged", r.converged},
            {"final_error", r.final_error},
            {"unitarity_defect", r.unitarity_defect},
            {"steps", r.steps}};
}

SolveResult solve_result_from_json(const json& j) {
    SolveResult r;
    r.solution = matrix_from_json(require(j, "solution", "result"), "result.solution");
    const json& history = require(j, "error_history", "result");
    if (!history.is_array()) throw ParseError("field 'result.error_history' must be an array");
    for (const json& point : history) {
        if (!point.is_array() || point.size() != 2 || !point[0].is_number() || !point[1].is_number())
            throw ParseError("field 'result.error_history' entries must be [t, e] pairs");
        r.error_history.emplace_back(point[0].get<double>(), point[1].get<double>());
    }
    r.converged = require_as<bool>(j, "converged", "result");
    r.final_error = require_as<double>(j, "final_error", "result");
    r.unitarity_defect = require_as<double>(j, "unitarity_defect", "result");
    r.steps = j.value("steps", std::size_t{0});
    return r;
}

json train_run_to_json(const TrainRun& r) {
    return {{"weights", matrix_to_json(r.weights)},   {"epochs_used", r.epochs_used},
            {"train_history", r.train_history},       {"valid_history", r.valid_history},
            {"converged", r.converged},               {"step_size", r.step_size}};
}

TrainRun train_run_from_json(const json& j) {
    TrainRun r;
    r.weights = matrix_from_json(require(j, "weights", "run"), "run.weights");
    r.epochs_used = require_as<std::size_t>(j, "epochs_used", "run");
    r.train_history = require_as<std::vector<double>>(j, "train_history", "run");
    r.valid_history = require_as<std::vector<double>>(j, "valid_history", "run");
    r.converged = require_as<bool>(j, "converged", "run");
    r.step_size = j.value("step_size", 0.0);
    return r;
}

json report_to_json(const GateReport& r) {
    return {{"transmission_distance", r.transmission_distance},
            {"gate_distance", r.gate_distance},
            {"unitarity_defect", r.unitarity_defect}};
}

void save_run(const std::filesystem::path& path, const json& document) { write_json_file(path, document); }

json load_run(const std::filesystem::path& path) {
    json j = read_json_file(path);
    if (!j.is_object()) throw ParseError("run file must hold a JSON object");
    return j;
}

std::string scan_csv(const std::vector<ScanRecord>& records) {
    std::ostringstream out;
    out << "m,seed,metric,converged,wall_time_s\n";
    for (const ScanRecord& r : records)
        out << r.m << ',' << r.seed << ',' << format_double(r.metric_value) << ','
            << (r.converged ? 1 : 0) << ',' << format_double(r.wall_time) << '\n';
    return out.str();
}

std::vector<ScanRecord> parse_scan_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "m,seed,metric,converged,wall_time_s")
        throw ParseError("scan CSV: unexpected header");
    std::vector<ScanRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string m, seed, metric, converged, wall;
        if (!std::getline(fields, m, ',') || !std::getline(fields, seed, ',') ||
            !std::getline(fields, metric, ',') || !std::getline(fields, converged, ',') ||
            !std::getline(fields, wall))
            throw ParseError("scan CSV: short row '" + line + "'");
        ScanRecord r;
        if (!parse_number(m, r.m) || !parse_number(seed, r.seed) || !parse_number(metric, r.metric_value) ||
            !parse_number(wall, r.wall_time) || (converged != "0" && converged != "1"))
            throw ParseError("scan CSV: bad field in row '" + line + "'");
        r.converged = converged == "1";
        records.push_back(r);
    }
    return records;
}

json summary_to_json(const std::vector<ScanSummaryRow>& rows) {
    json out = json::array();
    for (const ScanSummaryRow& r : rows)
        out.push_back({{"m", r.m},
                       {"count", r.count},
                       {"mean", r.mean},
                       {"stddev", r.stddev},
                       {"min", r.min},
                       {"max", r.max},
                       {"converged_fraction", r.converged_fraction}});
    return out;
}

}  // namespace qgate
