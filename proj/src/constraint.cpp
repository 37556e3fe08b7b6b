#include "qgate/constraint.hpp"

#include <cmath>
#include <numbers>

#include "qgate/error.hpp"
#include "qgate/kernels.hpp"

namespace qgate {

void ModulatorConstraint::validate() const {
    if (bits.has_value()) {
        if (*bits < 1) throw ConfigError("quantization bits must be at least 1");
        if (*bits > 52) throw ConfigError("quantization beyond 52 bits is below double resolution; omit bits");
        if (kind == Kind::unconstrained) throw ConfigError("quantization bits need a phase or amp constraint");
    }
}

std::string_view to_string(ModulatorConstraint::Kind kind) noexcept {
    switch (kind) {
        case ModulatorConstraint::Kind::phase_only: return "phase";
        case ModulatorConstraint::Kind::amplitude_signed: return "amp";
        case ModulatorConstraint::Kind::unconstrained: break;
    }
    return "none";
}

ModulatorConstraint::Kind constraint_kind_from_string(std::string_view name) {
    if (name == "none") return ModulatorConstraint::Kind::unconstrained;
    if (name == "phase") return ModulatorConstraint::Kind::phase_only;
    if (name == "amp") return ModulatorConstraint::Kind::amplitude_signed;
    throw ConfigError("unknown constraint '" + std::string(name) + "' (expected none, phase or amp)");
}

std::string describe(const ModulatorConstraint& c) {
    std::string out(to_string(c.kind));
    if (c.bits) out += "/" + std::to_string(*c.bits) + "bit";
    return out;
}

namespace {

// Snap unit phasors to the nearest of 2^bits equally spaced phases.
void quantize_phases(ComplexMatrix& w, int bits) {
    const double step = 2.0 * std::numbers::pi / std::ldexp(1.0, bits);
    for (cplx& z : w.data()) z = std::polar(1.0, std::round(std::arg(z) / step) * step);
}

}  // namespace

ComplexMatrix retract_phase(const ComplexMatrix& w, std::optional<int> bits) {
    if (bits && *bits < 1) throw ConfigError("quantization bits must be at least 1");
    ComplexMatrix out(w.rows(), w.cols());
    kernels::active().unit_phase(w.size(), w.data().data(), out.data().data());
    if (bits) quantize_phases(out, *bits);
    return out;
}

ComplexMatrix retract_amplitude(const ComplexMatrix& w, std::optional<int> bits) {
    double step = 0.0;
    if (bits) {
        if (*bits < 1) throw ConfigError("quantization bits must be at least 1");
        step = std::ldexp(2.0, -*bits);  // 2 / 2^bits
    }
    ComplexMatrix out(w.rows(), w.cols());
    kernels::active().clip_quantize(w.size(), w.data().data(), out.data().data(), step);
    return out;
}

ComplexMatrix retract(const ComplexMatrix& w, const ModulatorConstraint& c) {
    switch (c.kind) {
        case ModulatorConstraint::Kind::phase_only: return retract_phase(w, c.bits);
        case ModulatorConstraint::Kind::amplitude_signed: return retract_amplitude(w, c.bits);
        case ModulatorConstraint::Kind::unconstrained: break;
    }
    return w;
}

void retract_in_place(ComplexMatrix& w, const ModulatorConstraint& c) {
    const auto& k = kernels::active();
    switch (c.kind) {
        case ModulatorConstraint::Kind::phase_only:
            k.unit_phase(w.size(), w.data().data(), w.data().data());
            if (c.bits) quantize_phases(w, *c.bits);
            break;
        case ModulatorConstraint::Kind::amplitude_signed:
            k.clip_quantize(w.size(), w.data().data(), w.data().data(),
                            c.bits ? std::ldexp(2.0, -*c.bits) : 0.0);
            break;
        case ModulatorConstraint::Kind::unconstrained: break;
    }
}

}  // namespace qgate
