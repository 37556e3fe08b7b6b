#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "qgate/cli.hpp"
#include "qgate/error.hpp"
#include "qgate/linalg.hpp"
#include "qgate/matrix_io.hpp"
#include "qgate/run_io.hpp"
#include "support.hpp"

using namespace qgate;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result qgate_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& file) const { return (path / file).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("run_io") {
    TEST_CASE("format_double round trips") {
        for (double v : {0.1, 1.0 / 3.0, 1e-300, 5e-324, 123456789.125, -0.0, std::nextafter(1.0, 0.0)}) {
            CAPTURE(v);
            const std::string text = format_double(v);
            double back = 1.0;
            std::from_chars(text.data(), text.data() + text.size(), back);
            CHECK(back == v);
            CHECK(std::signbit(back) == std::signbit(v));
        }
        CHECK(format_double(0.5) == "0.5");
        CHECK(format_double(3.0) == "3");
    }

    TEST_CASE("solve results round trip bit exactly") {
        SolveResult r;
        r.solution = testing::random_matrix(4, 4, 1);
        r.error_history = {{0.0, 3.0}, {0.1, 1.0 / 3.0}, {0.25, 1e-9}};
        r.converged = true;
        r.final_error = 1e-9;
        r.unitarity_defect = 0.1234567890123456789;
        r.steps = 42;
        const SolveResult back = solve_result_from_json(nlohmann::json::parse(solve_result_to_json(r).dump()));
        CHECK(back.solution == r.solution);
        CHECK(back.error_history == r.error_history);
        CHECK(back.converged);
        CHECK(back.unitarity_defect == r.unitarity_defect);
        CHECK(back.steps == 42);

        TempDir dir("qgate_test_run_io");
        save_run(dir / "r.json", {{"result", solve_result_to_json(r)}});
        CHECK(solve_result_from_json(load_run(dir / "r.json").at("result")).solution == r.solution);
    }

    TEST_CASE("train runs and manifests round trip") {
        TrainRun r;
        r.weights = testing::random_matrix(3, 3, 2);
        r.epochs_used = 2;
        r.train_history = {0.5, 1e-5};
        r.valid_history = {0.6, 2e-5};
        r.step_size = 0.7;
        const TrainRun back = train_run_from_json(nlohmann::json::parse(train_run_to_json(r).dump()));
        CHECK(back.weights == r.weights);
        CHECK(back.valid_history == r.valid_history);
        CHECK(back.step_size == r.step_size);

        RunManifest m;
        m.command = "train";
        m.config = {{"lr", 0.5}};
        m.seed = 18446744073709551615ull;
        m.inputs = {"a.json"};
        const RunManifest mb = manifest_from_json(nlohmann::json::parse(manifest_to_json(m).dump()));
        CHECK(mb.seed == m.seed);
        CHECK(mb.config == m.config);
        CHECK(mb.inputs == m.inputs);
        CHECK(mb.tool_version == kToolVersion);
    }

    TEST_CASE("malformed documents name the field") {
        nlohmann::json j = solve_result_to_json(SolveResult{ComplexMatrix::identity(2), {}, true, 0, 0, 0});
        j.erase("converged");
        CHECK_THROWS_WITH_AS(solve_result_from_json(j), doctest::Contains("result.converged"), ParseError);
        j = solve_result_to_json(SolveResult{ComplexMatrix::identity(2), {}, true, 0, 0, 0});
        j["solution"]["re"] = "oops";
        CHECK_THROWS_WITH_AS(solve_result_from_json(j), doctest::Contains("result.solution"), ParseError);
    }

    TEST_CASE("scan csv round trip") {
        const std::vector<ScanRecord> records{{4, 1, 7.0, true, 0.25}, {6, 2, 1e-310, false, 1.0 / 3.0}};
        const std::string csv = scan_csv(records);
        CHECK(csv.rfind("m,seed,metric,converged,wall_time_s\n4,1,7,1,0.25\n", 0) == 0);
        const auto back = parse_scan_csv(csv);
        REQUIRE(back.size() == 2);
        CHECK(back[1].metric_value == 1e-310);
        CHECK(back[1].wall_time == 1.0 / 3.0);
        CHECK_FALSE(back[1].converged);
        CHECK_THROWS_AS(parse_scan_csv("m,seed\n"), ParseError);
        CHECK_THROWS_AS(parse_scan_csv("m,seed,metric,converged,wall_time_s\n4,1,x,1,0\n"), ParseError);
    }
}

TEST_SUITE("cli") {
    TEST_CASE("gate prints the catalog matrix") {
        const Result r = qgate_cli({"gate", "--name", "x", "--dim", "3"});
        CHECK(r.code == 0);
        CHECK(r.out == "0  1  0\n0  0  1\n1  0  0\n");
        const Result j = qgate_cli({"gate", "--name", "z", "--dim", "2", "--json"});
        CHECK(j.code == 0);
        CHECK(testing::max_abs_diff(matrix_from_json(nlohmann::json::parse(j.out)),
                                    ComplexMatrix::from_rows({{1, 0}, {0, -1}})) <= 1e-15);
    }

    TEST_CASE("usage errors exit 2 without writing") {
        TempDir dir("qgate_test_cli_usage");
        const Result unknown = qgate_cli({"frobnicate"});
        CHECK(unknown.code == cli::kExitInvalid);
        CHECK_FALSE(unknown.err.empty());
        CHECK(qgate_cli({}).code == cli::kExitInvalid);
        CHECK(qgate_cli({"train", "--bogus"}).code == cli::kExitInvalid);
        CHECK(qgate_cli({"train", "--embed"}).code == cli::kExitInvalid);

        const Result bad = qgate_cli({"train", "--embed", "2", "--out", dir / "t.json"});
        CHECK(bad.code == cli::kExitInvalid);
        CHECK_FALSE(fs::exists(dir / "t.json"));
        CHECK(qgate_cli({"train", "--constraint", "sign", "--out", dir / "t.json"}).code == cli::kExitInvalid);
        CHECK(qgate_cli({"verify", "--out", dir / "v.json"}).code == cli::kExitInvalid);
        CHECK_FALSE(fs::exists(dir / "v.json"));
        CHECK(qgate_cli({"scan", "--preset", "fig7"}).code == cli::kExitInvalid);
        CHECK(qgate_cli({"gate", "--name", "y"}).code == cli::kExitInvalid);
        CHECK(qgate_cli({"--help"}).code == cli::kExitOk);
    }

    TEST_CASE("strict exit codes") {
        const Result cut = qgate_cli({"train", "--max-epochs", "2", "--strict"});
        CHECK(cut.code == cli::kExitNotConverged);
        CHECK(qgate_cli({"train", "--max-epochs", "2"}).code == cli::kExitOk);
        CHECK(qgate_cli({"solve-rnn", "--max-time", "1e-4", "--strict"}).code == cli::kExitNotConverged);
        CHECK(qgate_cli({"solve-rnn", "--strict"}).code == cli::kExitOk);
    }

    TEST_CASE("train, verify and replay") {
        TempDir dir("qgate_test_cli_train");
        const Result r = qgate_cli({"train", "--seed", "4", "--out", dir / "run.json", "--no-timestamps"});
        REQUIRE(r.code == 0);
        const nlohmann::json doc = load_run(dir / "run.json");
        CHECK(doc.at("manifest").at("command") == "train");
        CHECK(doc.at("manifest").at("seed") == 4);
        CHECK_FALSE(doc.at("manifest").contains("started_at"));
        CHECK(doc.at("run").at("converged") == true);
        const std::string first = slurp(dir / "run.json");

        REQUIRE(qgate_cli({"train", "--seed", "4", "--out", dir / "run.json", "--no-timestamps"}).code == 0);
        CHECK(slurp(dir / "run.json") == first);

        const Result v = qgate_cli({"verify", "--run", dir / "run.json", "--strict", "--tol", "0.1"});
        CHECK(v.code == 0);
        const nlohmann::json report = nlohmann::json::parse(v.out);
        CHECK(report.at("gate_distance") == doc.at("report").at("gate_distance"));

        // Same run through separate weight and reservoir files.
        write_json_file(dir / "w.json", doc.at("run").at("weights"));
        write_json_file(dir / "u.json", doc.at("reservoir"));
        const Result split = qgate_cli({"verify", "--weights", dir / "w.json", "--reservoir", dir / "u.json"});
        CHECK(split.code == 0);
        CHECK(nlohmann::json::parse(split.out).at("gate_distance") == doc.at("report").at("gate_distance"));
    }

    TEST_CASE("solve-rnn output round trips") {
        TempDir dir("qgate_test_cli_solve");
        REQUIRE(qgate_cli({"solve-rnn", "--embed", "3", "--seed", "2", "--out", dir / "s.json"}).code == 0);
        const nlohmann::json doc = load_run(dir / "s.json");
        const SolveResult r = solve_result_from_json(doc.at("result"));
        CHECK(r.converged);
        const ComplexMatrix u = matrix_from_json(doc.at("reservoir"));
        CHECK(testing::max_abs_diff(r.solution, matmul(dagger(u), gate_x(3).matrix)) <= 1e-4);
        CHECK(doc.at("manifest").contains("started_at"));
        CHECK(qgate_cli({"verify", "--run", dir / "s.json", "--strict", "--tol", "1e-4"}).code == 0);
    }

    TEST_CASE("bad input files") {
        TempDir dir("qgate_test_cli_files");
        std::ofstream(dir / "trunc.json") << R"({"rows": 3, "cols": 3, "re": [1, 0)";
        const Result t = qgate_cli({"verify", "--weights", dir / "trunc.json", "--reservoir", dir / "trunc.json"});
        CHECK(t.code == cli::kExitInvalid);

        // Defect ||A^dagger A - 1||_F = 0.5 from a single stretched channel.
        ComplexMatrix stretched = ComplexMatrix::identity(3);
        stretched(2, 2) = std::sqrt(1.5);
        write_json_file(dir / "bad_u.json", matrix_to_json(stretched));
        CHECK(unitarity_defect(stretched) == doctest::Approx(0.5));
        write_json_file(dir / "w.json", matrix_to_json(ComplexMatrix::identity(3)));
        const Result v = qgate_cli({"verify", "--weights", dir / "w.json", "--reservoir", dir / "bad_u.json"});
        CHECK(v.code == cli::kExitInvalid);
        CHECK(v.err.find("reservoir") != std::string::npos);
        CHECK_THROWS_WITH_AS(load_unitary(dir / "bad_u.json", "reservoir"), doctest::Contains("reservoir"),
                             ValidationError);

        const Result s = qgate_cli({"train", "--embed", "3", "--reservoir", dir / "bad_u.json", "--out", dir / "o.json"});
        CHECK(s.code == cli::kExitInvalid);
        CHECK_FALSE(fs::exists(dir / "o.json"));
    }

    TEST_CASE("scan writes csv and summary deterministically") {
        TempDir dir("qgate_test_cli_scan");
        const std::vector<std::string> args{"scan",    "--m",      "4,5", "--seeds", "1,2", "--ntrain",
                                            "30",      "--nvalid", "10",  "--out",   dir / "a.csv",
                                            "--no-timestamps"};
        REQUIRE(qgate_cli(args).code == 0);
        const std::string csv = slurp(dir / "a.csv");
        const std::string summary = slurp(dir / "a.csv.summary.json");
        const auto records = parse_scan_csv(csv);
        CHECK(records.size() == 4);
        const nlohmann::json doc = nlohmann::json::parse(summary);
        CHECK(doc.at("summary").size() == 2);

        std::vector<std::string> parallel = args;
        parallel.insert(parallel.end(), {"--workers", "3"});
        REQUIRE(qgate_cli(parallel).code == 0);
        CHECK(slurp(dir / "a.csv") == csv);
        CHECK(slurp(dir / "a.csv.summary.json") == summary);
    }
}
