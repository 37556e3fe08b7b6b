#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qgate/complex_matrix.hpp"
#include "qgate/gates.hpp"
#include "qgate/ode.hpp"

namespace qgate {

/// Known-reservoir gate design: find S with P U S = [X | 0] (projected) or
/// U S = T (unitary) by integrating dW/dt = -mu U^dagger F(G(W)).
struct RnnProblem {
    ComplexMatrix reservoir;
    TargetEmbedding embedding;
    double learning_rate = 100.0;

    /// Throws on non-unitary reservoir (defect > 1e-10), inconsistent
    /// dimensions or a non-positive learning rate.
    void validate() const;
};

enum class InitKind { zero, random };

struct OdeConfig {
    double max_time = 10.0;
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    double residual_tol = 1e-8;
    std::size_t max_steps = 200000;
    InitKind init = InitKind::zero;
    std::uint64_t init_seed = 0;

    void validate() const;
};

struct SolveResult {
    ComplexMatrix solution;
    std::vector<std::pair<double, double>> error_history;  // (t, E)
    bool converged = false;
    double final_error = 0.0;
    double unitarity_defect = 0.0;
    std::size_t steps = 0;
};

/// P U W - [X | 0] (N x M). Throws ModeError unless the embedding is projected.
ComplexMatrix residual_projected(const ComplexMatrix& u, const ComplexMatrix& w,
                                 const TargetEmbedding& target);
/// U W - T (M x M). Throws ModeError unless the embedding is unitary.
ComplexMatrix residual_unitary(const ComplexMatrix& u, const ComplexMatrix& w,
                               const TargetEmbedding& target);
/// Residual for whichever mode the embedding carries.
ComplexMatrix residual(const ComplexMatrix& u, const ComplexMatrix& w,
                       const TargetEmbedding& target);

/// Sum of |g_ij|^2.
double error_functional(const ComplexMatrix& g);

/// -mu U^dagger G in unitary mode, -mu U^dagger P^dagger G_P in projected mode.
ComplexMatrix rnn_rhs(const RnnProblem& problem, const ComplexMatrix& w);

/// Integrates the flow from W(0) until E <= residual_tol, max_time or
/// max_steps. Throws DivergenceError if the state stops being finite.
SolveResult solve(const RnnProblem& problem, const OdeConfig& config);

}  // namespace qgate
