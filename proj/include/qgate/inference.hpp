#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qgate/complex_matrix.hpp"
#include "qgate/constraint.hpp"
#include "qgate/gates.hpp"
#include "qgate/random.hpp"

namespace qgate {

/// Labelled rigged states: labels[i] = T inputs[i]. The first n_train
/// pairs are the training split, the next n_valid the validation split.
struct Dataset {
    std::vector<ComplexVector> inputs;
    std::vector<ComplexVector> labels;
    std::size_t n_train = 0;
    std::size_t n_valid = 0;

    std::size_t dim() const noexcept { return inputs.empty() ? 0 : inputs.front().dim(); }
};

/// Which output components enter the cost: all M, or the first N logical ones.
enum class CostSpan { all_m, first_n };

std::string_view to_string(CostSpan span) noexcept;
CostSpan cost_span_from_string(std::string_view name);

struct TrainConfig {
    /// Step as a fraction of 1/lambda_max of the cost Hessian, where
    /// lambda_max comes from power iteration on the training covariance.
    double learning_rate = 0.5;
    std::size_t max_epochs = 5000;
    double valid_threshold = 1e-3;
    std::uint64_t seed = 0;
    ModulatorConstraint constraint;
    CostSpan cost_span = CostSpan::all_m;
    /// Number of logical levels N; used by first_n.
    std::size_t logical_dim = 0;
    /// Overrides the random initial weights.
    std::optional<ComplexMatrix> initial_weights;

    void validate() const;
};

struct TrainRun {
    ComplexMatrix weights;
    std::size_t epochs_used = 0;
    std::vector<double> train_history;
    std::vector<double> valid_history;
    bool converged = false;
    double step_size = 0.0;
};

struct GateReport {
    double transmission_distance = 0.0;  // ||U W - T||_F
    double gate_distance = 0.0;          // ||(U W)_{NxN} - X||_F
    double unitarity_defect = 0.0;       // of W
};

/// Inputs are i.i.d. complex Gaussian vectors normalized to unit norm;
/// target must be M x M. With support > 0 only the first `support`
/// components are drawn and the rest stay zero (unused ancilla modes).
/// Throws ConfigError on zero counts or support > M.
Dataset generate_dataset(const ComplexMatrix& target, std::size_t n_train, std::size_t n_valid,
                         RandomSource rng, std::size_t support = 0);

/// Mean squared modulus of y - U W x over the span (size K = M or N).
double cost(const ComplexMatrix& u, const ComplexMatrix& w, const ComplexVector& x,
            const ComplexVector& y, CostSpan span, std::size_t logical_dim = 0);

/// Wirtinger derivative d cost / d W* = -(1/K) U^dagger r x^dagger with r
/// the span-masked residual. The gradient in (Re W, Im W) is twice its
/// real and imaginary parts.
ComplexMatrix cost_gradient(const ComplexMatrix& u, const ComplexMatrix& w,
                            const ComplexVector& x, const ComplexVector& y, CostSpan span,
                            std::size_t logical_dim = 0);

/// Largest eigenvalue of the mean outer product of the training inputs.
double covariance_lambda_max(const Dataset& data, std::size_t iterations = 200);

/// Full-batch projected gradient descent on the mean training cost; one
/// update and one constraint retraction per epoch, then validation. Stops
/// once the mean validation cost is at or below the threshold.
TrainRun train(const ComplexMatrix& u, const Dataset& data, const TrainConfig& config);

GateReport verify_gate(const ComplexMatrix& u, const ComplexMatrix& w,
                       const TargetEmbedding& target);

}  // namespace qgate
