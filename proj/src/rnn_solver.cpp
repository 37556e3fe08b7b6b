#include "qgate/rnn_solver.hpp"

#include <cmath>
#include <string>

#include "qgate/error.hpp"
#include "qgate/kernels.hpp"
#include "qgate/linalg.hpp"

namespace qgate {
namespace {

void require_shapes(const ComplexMatrix& u, const ComplexMatrix& w, const TargetEmbedding& target) {
    if (!u.square() || u.rows() != target.m)
        throw DimensionError("reservoir must be " + std::to_string(target.m) + "x" + std::to_string(target.m));
    if (w.rows() != target.m || w.cols() != target.m)
        throw DimensionError("state matrix must be " + std::to_string(target.m) + "x" +
                             std::to_string(target.m));
}

// First n rows of a.
ComplexMatrix top_rows(const ComplexMatrix& a, std::size_t n) { return block(a, 0, 0, n, a.cols()); }

// Everything the right-hand side needs, computed once per solve.
struct Flow {
    const TargetEmbedding& embedding;
    ComplexMatrix u_rows;     // U, or P U in projected mode
    ComplexMatrix u_dagger;   // U^dagger, or U^dagger P^dagger in projected mode
    double mu;

    Flow(const RnnProblem& p)
        : embedding(p.embedding),
          u_rows(p.embedding.mode == EmbeddingMode::projected ? top_rows(p.reservoir, p.embedding.n)
                                                               : p.reservoir),
          u_dagger(dagger(u_rows)),
          mu(p.learning_rate) {}

    ComplexMatrix hidden(const ComplexMatrix& w) const {
        ComplexMatrix g = matmul(u_rows, w);
        g -= embedding.target;
        return g;
    }

    void rhs(const ComplexMatrix& w, ComplexMatrix& dwdt) const {
        const ComplexMatrix g = hidden(w);
        kernels::active().cgemm(u_dagger.rows(), u_dagger.cols(), g.cols(), u_dagger.data().data(),
                                g.data().data(), dwdt.data().data());
        dwdt *= -mu;
    }
};

}  // namespace

void RnnProblem::validate() const {
    const std::size_t m = embedding.m;
    if (!reservoir.square() || reservoir.rows() != m)
        throw DimensionError("reservoir dimension does not match the embedding (M = " + std::to_string(m) + ")");
    const std::size_t target_rows = embedding.mode == EmbeddingMode::projected ? embedding.n : m;
    if (embedding.target.rows() != target_rows || embedding.target.cols() != m)
        throw DimensionError("target shape inconsistent with the embedding mode");
    if (!(unitarity_defect(reservoir) <= 1e-10))
        throw ValidationError("reservoir is not unitary (defect > 1e-10)");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        throw ConfigError("learning rate must be positive");
}

void OdeConfig::validate() const {
    if (!(max_time > 0.0)) throw ConfigError("max_time must be positive");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("ODE tolerances must be positive");
    if (!(residual_tol > 0.0)) throw ConfigError("residual_tol must be positive");
    if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
}

ComplexMatrix residual_projected(const ComplexMatrix& u, const ComplexMatrix& w,
                                 const TargetEmbedding& target) {
    if (target.mode != EmbeddingMode::projected)
        throw ModeError("residual_projected needs a projected embedding");
    require_shapes(u, w, target);
    ComplexMatrix g = matmul(top_rows(u, target.n), w);
    g -= target.target;
    return g;
}

ComplexMatrix residual_unitary(const ComplexMatrix& u, const ComplexMatrix& w,
                               const TargetEmbedding& target) {
    if (target.mode != EmbeddingMode::unitary)
        throw ModeError("residual_unitary needs a unitary embedding");
    require_shapes(u, w, target);
    ComplexMatrix g = matmul(u, w);
    g -= target.target;
    return g;
}

ComplexMatrix residual(const ComplexMatrix& u, const ComplexMatrix& w, const TargetEmbedding& target) {
    return target.mode == EmbeddingMode::projected ? residual_projected(u, w, target)
                                                   : residual_unitary(u, w, target);
}

double error_functional(const ComplexMatrix& g) {
    return kernels::active().sum_abs2(g.size(), g.data().data());
}

ComplexMatrix rnn_rhs(const RnnProblem& problem, const ComplexMatrix& w) {
    require_shapes(problem.reservoir, w, problem.embedding);
    const Flow flow(problem);
    ComplexMatrix dwdt(w.rows(), w.cols());
    flow.rhs(w, dwdt);
    return dwdt;
}

SolveResult solve(const RnnProblem& problem, const OdeConfig& config) {
    problem.validate();
    config.validate();
    const std::size_t m = problem.embedding.m;
    const Flow flow(problem);

    ComplexMatrix w0(m, m);
    if (config.init == InitKind::random) {
        RandomStream draws(RandomSource{config.init_seed, 0x5eed});
        const double scale = 1.0 / std::sqrt(static_cast<double>(m));
        for (cplx& z : w0.data()) z = draws.complex_normal() * scale;
    }

    SolveResult result;
    double last_error = 0.0;
    const auto observer = [&](double t, const ComplexMatrix& w) {
        last_error = error_functional(flow.hidden(w));
        result.error_history.emplace_back(t, last_error);
        return last_error <= config.residual_tol;
    };
    const auto rhs = [&](double, const ComplexMatrix& w, ComplexMatrix& dwdt) { flow.rhs(w, dwdt); };

    ode::Options opts;
    opts.t_end = config.max_time;
    opts.tol = {config.rel_tol, config.abs_tol};
    opts.max_steps = config.max_steps;
    ode::Outcome outcome = ode::integrate_dopri5(rhs, std::move(w0), 0.0, opts, observer);

    if (outcome.stop == ode::Stop::non_finite)
        throw DivergenceError("RNN state became non-finite at t = " + std::to_string(outcome.t),
                              last_error);

    result.solution = std::move(outcome.y);
    result.final_error = last_error;
    result.converged = last_error <= config.residual_tol;
    result.unitarity_defect = unitarity_defect(result.solution);
    result.steps = outcome.accepted;
    return result;
}

}  // namespace qgate
