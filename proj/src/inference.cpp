#include "qgate/inference.hpp"

#include <cmath>
#include <string>

#include "qgate/error.hpp"
#include "qgate/kernels.hpp"
#include "qgate/linalg.hpp"

namespace qgate {
namespace {

std::size_t span_size(CostSpan span, std::size_t m, std::size_t logical_dim) {
    if (span == CostSpan::all_m) return m;
    if (logical_dim == 0 || logical_dim > m)
        throw DimensionError("first_n cost span needs 0 < N <= M (got N = " +
                             std::to_string(logical_dim) + ")");
    return logical_dim;
}

void require_sample_shapes(const ComplexMatrix& u, const ComplexMatrix& w, const ComplexVector& x,
                           const ComplexVector& y) {
    const std::size_t m = u.rows();
    if (!u.square() || w.rows() != m || w.cols() != m || x.dim() != m || y.dim() != m)
        throw DimensionError("cost: U and W must be MxM, x and y of length M");
}

// Span-masked residual y - U W x.
ComplexVector sample_residual(const ComplexMatrix& u, const ComplexMatrix& w, const ComplexVector& x,
                              const ComplexVector& y, std::size_t k) {
    ComplexVector r = matmul(u, matmul(w, x));
    for (std::size_t i = 0; i < r.dim(); ++i) r[i] = i < k ? y[i] - r[i] : cplx{};
    return r;
}

double sum_abs2(const ComplexMatrix& a) { return kernels::active().sum_abs2(a.size(), a.data().data()); }

// Samples of one split stacked as the columns of M x n matrices.
struct Batch {
    ComplexMatrix x;
    ComplexMatrix x_dagger;
    ComplexMatrix y;

    Batch(const Dataset& data, std::size_t first, std::size_t count) : x(data.dim(), count), y(data.dim(), count) {
        for (std::size_t s = 0; s < count; ++s)
            for (std::size_t i = 0; i < data.dim(); ++i) {
                x(i, s) = data.inputs[first + s][i];
                y(i, s) = data.labels[first + s][i];
            }
        x_dagger = dagger(x);
    }

    std::size_t count() const { return x.cols(); }

    // Y - (U W) X with rows at and beyond `span` zeroed.
    ComplexMatrix residual(const ComplexMatrix& uw, std::size_t span) const {
        ComplexMatrix r = matmul(uw, x);
        kernels::active().csub(r.size(), y.data().data(), r.data().data(), r.data().data());
        for (std::size_t i = span; i < r.rows(); ++i)
            for (cplx& z : r.row(i)) z = 0.0;
        return r;
    }

    double mean_cost(const ComplexMatrix& r, std::size_t span) const {
        return sum_abs2(r) / (static_cast<double>(span) * static_cast<double>(count()));
    }
};

ComplexMatrix initial_weights(std::size_t m, std::uint64_t seed) {
    RandomStream draws(RandomSource{seed, 0}.derive(0x77e1));
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    ComplexMatrix w(m, m);
    for (cplx& z : w.data()) {
        const double re = draws.normal() * scale;
        const double im = draws.normal() * scale;
        z = {re, im};
    }
    return w;
}

}  // namespace

std::string_view to_string(CostSpan span) noexcept {
    return span == CostSpan::all_m ? "all_m" : "first_n";
}

CostSpan cost_span_from_string(std::string_view name) {
    if (name == "all_m") return CostSpan::all_m;
    if (name == "first_n") return CostSpan::first_n;
    throw ConfigError("unknown cost span '" + std::string(name) + "' (expected all_m or first_n)");
}

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw ConfigError("learning rate must be non-negative and finite");
    if (max_epochs < 1) throw ConfigError("max_epochs must be at least 1");
    if (!(valid_threshold > 0.0)) throw ConfigError("validation threshold must be positive");
    if (cost_span == CostSpan::first_n && logical_dim == 0)
        throw ConfigError("first_n cost span needs the logical dimension");
    constraint.validate();
}

Dataset generate_dataset(const ComplexMatrix& target, std::size_t n_train, std::size_t n_valid,
                         RandomSource rng, std::size_t support) {
    if (n_train == 0 || n_valid == 0) throw ConfigError("dataset split counts must be positive");
    if (!target.square()) throw DimensionError("dataset target must be MxM");
    const std::size_t m = target.rows();
    if (support > m) throw ConfigError("input support exceeds the embedding dimension");
    if (support == 0) support = m;
    RandomStream draws(rng);
    Dataset data;
    data.n_train = n_train;
    data.n_valid = n_valid;
    data.inputs.reserve(n_train + n_valid);
    data.labels.reserve(n_train + n_valid);
    for (std::size_t s = 0; s < n_train + n_valid; ++s) {
        ComplexVector x(m);
        for (std::size_t i = 0; i < support; ++i) x[i] = draws.complex_normal();
        const double norm = x.norm();
        for (cplx& z : x.data()) z /= norm;
        data.labels.push_back(matmul(target, x));
        data.inputs.push_back(std::move(x));
    }
    return data;
}

double cost(const ComplexMatrix& u, const ComplexMatrix& w, const ComplexVector& x,
            const ComplexVector& y, CostSpan span, std::size_t logical_dim) {
    require_sample_shapes(u, w, x, y);
    const std::size_t k = span_size(span, u.rows(), logical_dim);
    const ComplexVector r = sample_residual(u, w, x, y, k);
    return kernels::active().sum_abs2(r.dim(), r.data().data()) / static_cast<double>(k);
}

ComplexMatrix cost_gradient(const ComplexMatrix& u, const ComplexMatrix& w, const ComplexVector& x,
                            const ComplexVector& y, CostSpan span, std::size_t logical_dim) {
    require_sample_shapes(u, w, x, y);
    const std::size_t m = u.rows();
    const std::size_t k = span_size(span, m, logical_dim);
    const ComplexVector r = sample_residual(u, w, x, y, k);
    const ComplexVector ur = matmul(dagger(u), r);
    ComplexMatrix g(m, m);
    const double scale = -1.0 / static_cast<double>(k);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) g(i, j) = scale * ur[i] * std::conj(x[j]);
    return g;
}

double covariance_lambda_max(const Dataset& data, std::size_t iterations) {
    if (data.n_train == 0) throw ConfigError("empty training split");
    const Batch train(data, 0, data.n_train);
    const std::size_t m = data.dim();
    ComplexMatrix v(m, 1);
    for (cplx& z : v.data()) z = 1.0 / std::sqrt(static_cast<double>(m));
    double lambda = 0.0;
    for (std::size_t it = 0; it < iterations; ++it) {
        ComplexMatrix cv = matmul(train.x, matmul(train.x_dagger, v));
        cv *= 1.0 / static_cast<double>(train.count());
        // Rayleigh quotient with the unit-norm iterate.
        cplx rq = 0.0;
        for (std::size_t i = 0; i < m; ++i) rq += std::conj(v(i, 0)) * cv(i, 0);
        const double next = rq.real();
        const double norm = frobenius_norm(cv);
        if (norm == 0.0) return 0.0;
        cv *= 1.0 / norm;
        v = std::move(cv);
        const bool settled = std::fabs(next - lambda) <= 1e-13 * std::fabs(next);
        lambda = next;
        if (settled) break;
    }
    return lambda;
}

TrainRun train(const ComplexMatrix& u, const Dataset& data, const TrainConfig& config) {
    config.validate();
    const std::size_t m = u.rows();
    if (!u.square()) throw DimensionError("reservoir must be square");
    if (data.dim() != m) throw DimensionError("dataset dimension does not match the reservoir");
    if (data.n_train == 0 || data.n_valid == 0) throw ConfigError("dataset split counts must be positive");
    if (data.inputs.size() < data.n_train + data.n_valid || data.labels.size() != data.inputs.size())
        throw ConfigError("dataset is shorter than its declared split");
    const std::size_t k = span_size(config.cost_span, m, config.logical_dim);

    const Batch train_set(data, 0, data.n_train);
    const Batch valid_set(data, data.n_train, data.n_valid);
    const ComplexMatrix u_dagger = dagger(u);

    // Real-parameter Hessian of the mean cost has top eigenvalue
    // (2 / K) lambda_max(C); the step is learning_rate over that.
    const double lambda = covariance_lambda_max(data);
    const double hessian_max = 2.0 * lambda / static_cast<double>(k);
    TrainRun run;
    run.step_size = hessian_max > 0.0 ? config.learning_rate / hessian_max : 0.0;

    if (config.initial_weights) {
        if (config.initial_weights->rows() != m || config.initial_weights->cols() != m)
            throw DimensionError("initial weights must be MxM");
        run.weights = *config.initial_weights;
    } else {
        run.weights = initial_weights(m, config.seed);
    }
    retract_in_place(run.weights, config.constraint);

    ComplexMatrix r_train = train_set.residual(matmul(u, run.weights), k);
    const double update_scale =
        2.0 * run.step_size / (static_cast<double>(k) * static_cast<double>(train_set.count()));
    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        // W <- W - step * 2 dE/dW*, with dE/dW* = -(1/(K n)) U^dagger R X^dagger.
        const ComplexMatrix descent = matmul(u_dagger, matmul(r_train, train_set.x_dagger));
        kernels::active().caxpy(descent.size(), update_scale, descent.data().data(),
                                run.weights.data().data());
        retract_in_place(run.weights, config.constraint);

        const ComplexMatrix uw = matmul(u, run.weights);
        r_train = train_set.residual(uw, k);
        const double train_cost = train_set.mean_cost(r_train, k);
        const double valid_cost = valid_set.mean_cost(valid_set.residual(uw, k), k);
        if (!std::isfinite(train_cost) || !std::isfinite(valid_cost)) {
            const double last = run.valid_history.empty() ? std::nan("") : run.valid_history.back();
            throw DivergenceError("training cost became non-finite at epoch " + std::to_string(epoch), last);
        }
        run.train_history.push_back(train_cost);
        run.valid_history.push_back(valid_cost);
        run.epochs_used = epoch;
        if (valid_cost <= config.valid_threshold) {
            run.converged = true;
            break;
        }
    }
    return run;
}

GateReport verify_gate(const ComplexMatrix& u, const ComplexMatrix& w, const TargetEmbedding& target) {
    GateReport report;
    const ComplexMatrix uw = matmul(u, w);
    if (target.mode == EmbeddingMode::projected && target.target.rows() != uw.rows())
        report.transmission_distance = frobenius_distance(block(uw, 0, 0, target.n, target.m), target.target);
    else
        report.transmission_distance = frobenius_distance(uw, target.target);
    report.gate_distance =
        frobenius_distance(achieved_gate(uw, target.n), achieved_gate(target.target, target.n));
    report.unitarity_defect = w.square() ? unitarity_defect(w) : 0.0;
    return report;
}

}  // namespace qgate
