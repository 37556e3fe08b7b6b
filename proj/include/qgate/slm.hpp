#pragma once

#include <cstddef>

#include "qgate/complex_matrix.hpp"
#include "qgate/inference.hpp"

namespace qgate {

/// Single-modulator realization: the device shows S~ = S Diag(rig(x)) and
/// is illuminated by a fixed plane wave with N ones.
struct SlmEncoding {
    ComplexMatrix base_operator;
    ComplexMatrix encoded;
    ComplexVector input_vector;
};

SlmEncoding encode_input(const ComplexMatrix& s, const ComplexVector& x, std::size_t m);

/// Plane wave with n ones followed by m - n zeros.
ComplexVector plane_wave(std::size_t n, std::size_t m);

/// train() with the configured modulator constraint. Phase-only runs start
/// from retracted weights so every iterate is feasible.
TrainRun constrained_train(const ComplexMatrix& u, const Dataset& data, const TrainConfig& config);

}  // namespace qgate
