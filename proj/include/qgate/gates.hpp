#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "qgate/complex_matrix.hpp"
#include "qgate/random.hpp"

namespace qgate {

/// A target gate on N logical levels.
struct GateSpec {
    std::size_t dim = 0;
    ComplexMatrix matrix;
};

/// Shift gate. Column l carries |l> to |l-1 mod d>, i.e. the d=3 matrix is
/// [[0,1,0],[0,0,1],[1,0,0]].
GateSpec gate_x(std::size_t d);
/// gate_x(d) squared.
GateSpec gate_x_squared(std::size_t d);
/// Clock gate diag(w^l), w = exp(2 pi i / d).
GateSpec gate_z(std::size_t d);
/// Catalog lookup by CLI name: "x", "x2" or "z". Throws ConfigError on
/// unknown names.
GateSpec gate_by_name(std::string_view name, std::size_t d);
/// Wraps an arbitrary square matrix; throws ValidationError unless unitary
/// within `tol`.
GateSpec custom_gate(ComplexMatrix matrix, double tol = 1e-10);

enum class EmbeddingMode { projected, unitary };

std::string_view to_string(EmbeddingMode mode) noexcept;
EmbeddingMode embedding_mode_from_string(std::string_view name);

/// Target for an N-level gate acting in an M-dimensional rigged space.
/// projected: N x M matrix [X | 0]. unitary: M x M block-diagonal
/// diag(X, O_C) with O_C a Haar-random C x C unitary, C = M - N.
struct TargetEmbedding {
    std::size_t n = 0;
    std::size_t m = 0;
    EmbeddingMode mode = EmbeddingMode::projected;
    ComplexMatrix target;
    std::optional<ComplexMatrix> complement;
};

/// N x M matrix [1_N | 0].
ComplexMatrix projector(std::size_t n, std::size_t m);

/// Samples O_C from `rng` in unitary mode. With m == gate.dim both modes
/// return the bare gate matrix.
TargetEmbedding embed_target(const GateSpec& gate, std::size_t m, EmbeddingMode mode,
                             RandomSource rng);
/// Unitary-mode embedding with an explicit complement (C x C). The
/// complement may be any matrix, including zero for non-unitary targets.
TargetEmbedding embed_with_complement(const GateSpec& gate, const ComplexMatrix& complement);

/// Pads `x` with zero ancillas up to length m.
ComplexVector rig_input(const ComplexVector& x, std::size_t m);

/// Top-left n x n block of a transmission matrix.
ComplexMatrix achieved_gate(const ComplexMatrix& t, std::size_t n);

}  // namespace qgate
