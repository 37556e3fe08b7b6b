#include "qgate/matrix_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "qgate/error.hpp"
#include "qgate/linalg.hpp"

namespace qgate {
namespace {

using nlohmann::json;

std::string named(std::string_view field, std::string_view key) {
    return std::string(field) + "." + std::string(key);
}

std::size_t positive_count(const json& j, std::string_view field, const char* key) {
    if (!j.contains(key)) throw ParseError("missing field '" + named(field, key) + "'");
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0)
        throw ParseError("field '" + named(field, key) + "' must be a positive integer");
    return v.get<std::size_t>();
}

std::vector<double> number_array(const json& j, std::string_view field, const char* key,
                                 std::size_t expected) {
    if (!j.contains(key)) throw ParseError("missing field '" + named(field, key) + "'");
    const json& arr = j.at(key);
    if (!arr.is_array()) throw ParseError("field '" + named(field, key) + "' must be an array");
    if (arr.size() != expected)
        throw ParseError("field '" + named(field, key) + "' has " + std::to_string(arr.size()) +
                         " entries, expected " + std::to_string(expected));
    std::vector<double> out;
    out.reserve(expected);
    for (const json& v : arr) {
        if (!v.is_number()) throw ParseError("field '" + named(field, key) + "' holds a non-number");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
    json re = json::array();
    json im = json::array();
    for (const cplx& z : m.data()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const json& j, std::string_view field) {
    if (!j.is_object()) throw ParseError("field '" + std::string(field) + "' must be an object");
    const std::size_t rows = positive_count(j, field, "rows");
    const std::size_t cols = positive_count(j, field, "cols");
    const std::size_t n = rows * cols;
    std::vector<cplx> data(n);
    if (j.contains("re") || j.contains("im")) {
        const auto re = number_array(j, field, "re", n);
        const auto im = number_array(j, field, "im", n);
        for (std::size_t i = 0; i < n; ++i) data[i] = {re[i], im[i]};
    } else if (j.contains("data")) {
        const auto flat = number_array(j, field, "data", 2 * n);
        for (std::size_t i = 0; i < n; ++i) data[i] = {flat[2 * i], flat[2 * i + 1]};
    } else {
        throw ParseError("field '" + std::string(field) + "' needs either re/im or data");
    }
    try {
        return ComplexMatrix::from_data(rows, cols, std::move(data));
    } catch (const DimensionError& e) {
        throw ParseError("field '" + std::string(field) + "': " + e.what());
    }
}

json vector_to_json(const ComplexVector& v) {
    json re = json::array();
    json im = json::array();
    for (const cplx& z : v.data()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return {{"dim", v.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexVector vector_from_json(const json& j, std::string_view field) {
    if (!j.is_object()) throw ParseError("field '" + std::string(field) + "' must be an object");
    const std::size_t dim = positive_count(j, field, "dim");
    const auto re = number_array(j, field, "re", dim);
    const auto im = number_array(j, field, "im", dim);
    std::vector<cplx> data(dim);
    for (std::size_t i = 0; i < dim; ++i) data[i] = {re[i], im[i]};
    try {
        return ComplexVector(std::move(data));
    } catch (const DimensionError& e) {
        throw ParseError("field '" + std::string(field) + "': " + e.what());
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw ParseError("malformed JSON in '" + path.string() + "': " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    // Write beside the target and rename so readers never see a partial file.
    std::filesystem::path tmp = path;
    tmp += ".part";
    {
        std::ofstream out(tmp);
        if (!out) throw ConfigError("cannot write '" + path.string() + "'");
        out << j.dump(2) << '\n';
        if (!out) throw ConfigError("failed writing '" + path.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw ConfigError("cannot write '" + path.string() + "'");
    }
}

ComplexMatrix load_matrix(const std::filesystem::path& path, std::string_view field) {
    return matrix_from_json(read_json_file(path), field);
}

ComplexMatrix load_unitary(const std::filesystem::path& path, std::string_view field, double tol) {
    ComplexMatrix m = load_matrix(path, field);
    if (!m.square()) throw ValidationError(std::string(field) + " must be square");
    const double defect = unitarity_defect(m);
    if (!(defect <= tol))
        throw ValidationError(std::string(field) + " is not unitary (defect " + std::to_string(defect) +
                              " > " + std::to_string(tol) + ")");
    return m;
}

}  // namespace qgate
