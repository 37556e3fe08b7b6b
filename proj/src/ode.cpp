#include "qgate/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qgate/error.hpp"
#include "qgate/kernels.hpp"

namespace qgate::ode {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

double* flat(ComplexMatrix& m) { return reinterpret_cast<double*>(m.data().data()); }
const double* flat(const ComplexMatrix& m) { return reinterpret_cast<const double*>(m.data().data()); }

// out = y + h * sum(coef_i * k_i)
void combine(ComplexMatrix& out, const ComplexMatrix& y, double h,
             std::initializer_list<std::pair<double, const ComplexMatrix*>> terms) {
    const auto& kern = kernels::active();
    const std::size_t n = 2 * y.size();
    std::copy(flat(y), flat(y) + n, flat(out));
    for (const auto& [coef, k] : terms)
        if (coef != 0.0) kern.daxpy(n, h * coef, flat(*k), flat(out));
}

double scaled_rms(const ComplexMatrix& v, const ComplexMatrix& y, const ComplexMatrix* y2,
                  const Tolerances& tol) {
    const std::size_t n = 2 * v.size();
    const double* vd = flat(v);
    const double* yd = flat(y);
    const double* y2d = y2 != nullptr ? flat(*y2) : nullptr;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double mag = std::fabs(yd[i]);
        if (y2d != nullptr) mag = std::max(mag, std::fabs(y2d[i]));
        const double s = vd[i] / (tol.abs_tol + tol.rel_tol * mag);
        acc += s * s;
    }
    return std::sqrt(acc / static_cast<double>(n));
}

double initial_step(const Rhs& rhs, double t0, const ComplexMatrix& y0, const ComplexMatrix& f0,
                    const Tolerances& tol, double span) {
    const double d0 = scaled_rms(y0, y0, nullptr, tol);
    const double d1 = scaled_rms(f0, y0, nullptr, tol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    ComplexMatrix y1(y0.rows(), y0.cols());
    combine(y1, y0, h0, {{1.0, &f0}});
    ComplexMatrix f1(y0.rows(), y0.cols());
    rhs(t0 + h0, y1, f1);
    ComplexMatrix df = f1;
    df -= f0;
    const double d2 = scaled_rms(df, y0, nullptr, tol) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
    return std::min({100.0 * h0, h1, span});
}

}  // namespace

Outcome integrate_dopri5(const Rhs& rhs, ComplexMatrix y0, double t0, const Options& opts,
                         const Observer& observer) {
    if (!(opts.t_end > t0)) throw ConfigError("ode: t_end must exceed the start time");
    if (!(opts.tol.rel_tol > 0.0) || !(opts.tol.abs_tol > 0.0))
        throw ConfigError("ode: tolerances must be positive");

    Outcome out;
    out.t = t0;
    out.y = std::move(y0);
    if (!out.y.all_finite()) {
        out.stop = Stop::non_finite;
        return out;
    }
    if (observer && observer(out.t, out.y)) {
        out.stop = Stop::observer;
        return out;
    }

    const std::size_t rows = out.y.rows();
    const std::size_t cols = out.y.cols();
    std::array<ComplexMatrix, 7> k;
    for (auto& ki : k) ki = ComplexMatrix(rows, cols);
    ComplexMatrix stage(rows, cols);
    ComplexMatrix y_new(rows, cols);
    ComplexMatrix err(rows, cols);

    rhs(out.t, out.y, k[0]);
    double h = opts.initial_step > 0.0
                   ? opts.initial_step
                   : initial_step(rhs, out.t, out.y, k[0], opts.tol, opts.t_end - t0);
    bool last_rejected = false;

    while (out.t < opts.t_end) {
        if (out.accepted >= opts.max_steps) {
            out.stop = Stop::max_steps;
            return out;
        }
        if (h < 1e-14 * std::max(1.0, std::fabs(out.t))) {
            out.stop = Stop::step_underflow;
            return out;
        }
        h = std::min(h, opts.t_end - out.t);
        const double t = out.t;
        const ComplexMatrix& y = out.y;

        combine(stage, y, h, {{a21, &k[0]}});
        rhs(t + c2 * h, stage, k[1]);
        combine(stage, y, h, {{a31, &k[0]}, {a32, &k[1]}});
        rhs(t + c3 * h, stage, k[2]);
        combine(stage, y, h, {{a41, &k[0]}, {a42, &k[1]}, {a43, &k[2]}});
        rhs(t + c4 * h, stage, k[3]);
        combine(stage, y, h, {{a51, &k[0]}, {a52, &k[1]}, {a53, &k[2]}, {a54, &k[3]}});
        rhs(t + c5 * h, stage, k[4]);
        combine(stage, y, h, {{a61, &k[0]}, {a62, &k[1]}, {a63, &k[2]}, {a64, &k[3]}, {a65, &k[4]}});
        rhs(t + h, stage, k[5]);
        combine(y_new, y, h, {{b1, &k[0]}, {b3, &k[2]}, {b4, &k[3]}, {b5, &k[4]}, {b6, &k[5]}});
        rhs(t + h, y_new, k[6]);

        std::fill(err.data().begin(), err.data().end(), cplx{});
        const auto& kern = kernels::active();
        const std::size_t n = 2 * err.size();
        for (const auto& [coef, ki] : {std::pair{e1, &k[0]}, std::pair{e3, &k[2]}, std::pair{e4, &k[3]},
                                        std::pair{e5, &k[4]}, std::pair{e6, &k[5]}, std::pair{e7, &k[6]}})
            kern.daxpy(n, h * coef, flat(*ki), flat(err));

        const double err_norm = scaled_rms(err, y, &y_new, opts.tol);
        if (!y_new.all_finite()) {
            out.stop = Stop::non_finite;
            return out;
        }

        if (std::isfinite(err_norm) && err_norm <= 1.0) {
            out.t = t + h;
            std::swap(out.y, y_new);
            std::swap(k[0], k[6]);  // FSAL
            ++out.accepted;
            double factor = err_norm == 0.0 ? kMaxFactor : kSafety * std::pow(err_norm, -0.2);
            factor = std::clamp(factor, kMinFactor, last_rejected ? 1.0 : kMaxFactor);
            h *= factor;
            last_rejected = false;
            if (observer && observer(out.t, out.y)) {
                out.stop = Stop::observer;
                return out;
            }
        } else {
            h *= std::isfinite(err_norm) ? std::max(kMinFactor, kSafety * std::pow(err_norm, -0.2)) : kMinFactor;
            ++out.rejected;
            last_rejected = true;
        }
    }
    out.stop = Stop::reached_end;
    return out;
}

}  // namespace qgate::ode
