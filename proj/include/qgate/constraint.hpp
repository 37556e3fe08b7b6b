#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "qgate/complex_matrix.hpp"

namespace qgate {

/// Feasible set of a physical modulator.
struct ModulatorConstraint {
    enum class Kind { unconstrained, phase_only, amplitude_signed };

    Kind kind = Kind::unconstrained;
    /// Quantization depth; empty means continuous. Amplitude levels are
    /// 2^bits + 1 points on [-1, 1], phase levels 2^bits points on the circle.
    std::optional<int> bits;

    static ModulatorConstraint none() { return {}; }
    static ModulatorConstraint phase() { return {Kind::phase_only, std::nullopt}; }
    static ModulatorConstraint amplitude(std::optional<int> bits = std::nullopt) {
        return {Kind::amplitude_signed, bits};
    }

    void validate() const;

    friend bool operator==(const ModulatorConstraint&, const ModulatorConstraint&) = default;
};

/// CLI names: "none", "phase", "amp".
std::string_view to_string(ModulatorConstraint::Kind kind) noexcept;
ModulatorConstraint::Kind constraint_kind_from_string(std::string_view name);
/// e.g. "amp/8bit", "phase", "none".
std::string describe(const ModulatorConstraint& c);

/// Entries replaced by their unit phasor; zero entries become 1. With
/// bits, phases snap to the nearest multiple of 2 pi / 2^bits.
ComplexMatrix retract_phase(const ComplexMatrix& w, std::optional<int> bits = std::nullopt);

/// Real parts clipped to [-1, 1]; with bits, rounded to the nearest of the
/// 2^bits + 1 uniform levels on [-1, 1] (ties toward zero).
ComplexMatrix retract_amplitude(const ComplexMatrix& w, std::optional<int> bits);

/// Dispatches on the constraint kind; identity when unconstrained.
ComplexMatrix retract(const ComplexMatrix& w, const ModulatorConstraint& c);
void retract_in_place(ComplexMatrix& w, const ModulatorConstraint& c);

}  // namespace qgate
