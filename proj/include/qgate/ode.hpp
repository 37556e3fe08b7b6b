#pragma once

#include <cstddef>
#include <functional>

#include "qgate/complex_matrix.hpp"

namespace qgate::ode {

struct Tolerances {
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
};

struct Options {
    double t_end = 1.0;
    Tolerances tol;
    std::size_t max_steps = 100000;
    /// 0 selects the starting step automatically.
    double initial_step = 0.0;
};

enum class Stop { reached_end, observer, max_steps, non_finite, step_underflow };

struct Outcome {
    double t = 0.0;
    ComplexMatrix y;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    Stop stop = Stop::reached_end;
};

/// dy/dt written into the third argument (same shape as y).
using Rhs = std::function<void(double t, const ComplexMatrix& y, ComplexMatrix& dydt)>;
/// Called at t0 and after every accepted step; return true to stop.
using Observer = std::function<bool(double t, const ComplexMatrix& y)>;

/// Dormand-Prince 5(4) with FSAL and the standard elementary step-size controller.
/// The error norm is the RMS over all real components of
/// err_i / (abs_tol + rel_tol * max(|y_i|, |y_new_i|)).
Outcome integrate_dopri5(const Rhs& rhs, ComplexMatrix y0, double t0, const Options& opts,
                         const Observer& observer = {});

}  // namespace qgate::ode
