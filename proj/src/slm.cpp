#include "qgate/slm.hpp"

#include <string>

#include "qgate/error.hpp"
#include "qgate/gates.hpp"

namespace qgate {

SlmEncoding encode_input(const ComplexMatrix& s, const ComplexVector& x, std::size_t m) {
    if (!s.square() || s.rows() != m)
        throw DimensionError("encode_input: operator must be " + std::to_string(m) + "x" + std::to_string(m));
    const ComplexVector rigged = rig_input(x, m);
    ComplexMatrix encoded = s;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) encoded(i, j) *= rigged[j];
    return {s, std::move(encoded), x};
}

ComplexVector plane_wave(std::size_t n, std::size_t m) {
    if (n == 0 || n > m) throw DimensionError("plane_wave: need 0 < n <= m");
    ComplexVector e(m);
    for (std::size_t i = 0; i < n; ++i) e[i] = 1.0;
    return e;
}

TrainRun constrained_train(const ComplexMatrix& u, const Dataset& data, const TrainConfig& config) {
    // train() retracts the initial weights and every update onto the
    // configured feasible set.
    return train(u, data, config);
}

}  // namespace qgate
