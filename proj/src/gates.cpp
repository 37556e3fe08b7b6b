#include "qgate/gates.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qgate/error.hpp"
#include "qgate/linalg.hpp"

namespace qgate {
namespace {

void require_gate_dim(std::size_t d, const char* op) {
    if (d < 2) throw DimensionError(std::string(op) + ": gate dimension must be at least 2");
}

}  // namespace

GateSpec gate_x(std::size_t d) {
    require_gate_dim(d, "gate_x");
    ComplexMatrix m(d, d);
    for (std::size_t l = 0; l < d; ++l) m(l, (l + 1) % d) = 1.0;
    return {d, std::move(m)};
}

GateSpec gate_x_squared(std::size_t d) {
    require_gate_dim(d, "gate_x_squared");
    const GateSpec x = gate_x(d);
    return {d, matmul(x.matrix, x.matrix)};
}

GateSpec gate_z(std::size_t d) {
    require_gate_dim(d, "gate_z");
    ComplexMatrix m(d, d);
    for (std::size_t l = 0; l < d; ++l) {
        if (l == 0) {
            m(0, 0) = 1.0;
            continue;
        }
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(d);
        m(l, l) = {std::cos(angle), std::sin(angle)};
    }
    return {d, std::move(m)};
}

GateSpec gate_by_name(std::string_view name, std::size_t d) {
    if (name == "x") return gate_x(d);
    if (name == "x2") return gate_x_squared(d);
    if (name == "z") return gate_z(d);
    throw ConfigError("unknown gate '" + std::string(name) + "' (expected x, x2 or z)");
}

GateSpec custom_gate(ComplexMatrix matrix, double tol) {
    if (!matrix.square()) throw ValidationError("gate matrix must be square");
    if (matrix.rows() < 2) throw ValidationError("gate matrix must act on at least 2 levels");
    const double defect = unitarity_defect(matrix);
    if (!(defect <= tol))
        throw ValidationError("gate matrix is not unitary (defect " + std::to_string(defect) + ")");
    const std::size_t d = matrix.rows();
    return {d, std::move(matrix)};
}

std::string_view to_string(EmbeddingMode mode) noexcept {
    return mode == EmbeddingMode::projected ? "projected" : "unitary";
}

EmbeddingMode embedding_mode_from_string(std::string_view name) {
    if (name == "projected") return EmbeddingMode::projected;
    if (name == "unitary") return EmbeddingMode::unitary;
    throw ConfigError("unknown embedding mode '" + std::string(name) + "'");
}

ComplexMatrix projector(std::size_t n, std::size_t m) {
    if (n == 0 || n > m) throw DimensionError("projector: need 0 < n <= m");
    ComplexMatrix p(n, m);
    for (std::size_t i = 0; i < n; ++i) p(i, i) = 1.0;
    return p;
}

TargetEmbedding embed_target(const GateSpec& gate, std::size_t m, EmbeddingMode mode,
                             RandomSource rng) {
    const std::size_t n = gate.dim;
    if (m < n)
        throw DimensionError("embed_target: embedding dimension " + std::to_string(m) +
                             " is smaller than the gate dimension " + std::to_string(n));
    if (m == n) return {n, m, mode, gate.matrix, std::nullopt};
    if (mode == EmbeddingMode::unitary) return embed_with_complement(gate, haar_unitary(m - n, rng));

    ComplexMatrix target(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) target(i, j) = gate.matrix(i, j);
    return {n, m, mode, std::move(target), std::nullopt};
}

TargetEmbedding embed_with_complement(const GateSpec& gate, const ComplexMatrix& complement) {
    if (!complement.square()) throw DimensionError("embed_with_complement: complement must be square");
    const std::size_t n = gate.dim;
    const std::size_t c = complement.rows();
    const std::size_t m = n + c;
    ComplexMatrix target(m, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) target(i, j) = gate.matrix(i, j);
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) target(n + i, n + j) = complement(i, j);
    return {n, m, EmbeddingMode::unitary, std::move(target), complement};
}

ComplexVector rig_input(const ComplexVector& x, std::size_t m) {
    if (x.dim() > m)
        throw DimensionError("rig_input: vector of dimension " + std::to_string(x.dim()) +
                             " does not fit in " + std::to_string(m));
    ComplexVector out(m);
    for (std::size_t i = 0; i < x.dim(); ++i) out[i] = x[i];
    return out;
}

ComplexMatrix achieved_gate(const ComplexMatrix& t, std::size_t n) {
    if (n == 0 || t.rows() < n || t.cols() < n)
        throw DimensionError("achieved_gate: transmission matrix smaller than the gate");
    return block(t, 0, 0, n, n);
}

}  // namespace qgate
