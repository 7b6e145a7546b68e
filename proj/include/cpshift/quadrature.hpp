// ─────────────────────────────────────────────────────────────────────────────
//  quadrature.hpp — adaptive complex-valued integration.
//
//  The core rule is a nested 7-point Gauss / 15-point Kronrod pair applied to
//  complex integrands; the adaptive driver bisects the subinterval with the
//  largest error estimate until the combined estimate meets the requested
//  tolerance. Semi-infinite integrals are mapped to (0,1) through
//  x = a + s·t/(1−t), where s is a user-supplied decay scale.
// ─────────────────────────────────────────────────────────────────────────────
#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "types.hpp"

namespace cpshift {

/// Tolerances and limits for the adaptive driver.
struct QuadratureConfig {
    double rel_tol = 1e-9;        ///< target relative error of the result
    double abs_tol = 1e-30;       ///< absolute floor for near-zero results
    int max_subdivisions = 2000;  ///< bisection budget
    double decay_scale = 1.0;     ///< mapping scale for semi-infinite integrals

    [[nodiscard]] QuadratureConfig tightened(double factor) const {
        QuadratureConfig c = *this;
        c.rel_tol *= factor;
        return c;
    }
};

/// Value and error estimate of one integral.
struct QuadratureResult {
    complex value{};
    double error = 0.0;
    int subdivisions = 0;
};

namespace detail {

// Abscissae/weights of the 15-point Kronrod rule (positive half; the rule is
// symmetric) and the weights of the embedded 7-point Gauss rule.
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double a = 0.0, b = 0.0;
    complex value{};
    double error = 0.0;
};

struct PanelWorse {
    bool operator()(const Panel& p, const Panel& q) const { return p.error < q.error; }
};

/// One G7K15 evaluation on [a, b].
template <class F>
Panel gk15(F&& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    complex kronrod{};
    complex gauss{};
    for (int i = 0; i < 8; ++i) {
        const double dx = h * kXgk[i];
        complex fs;
        if (i == 7) {
            fs = f(mid);
            gauss += kWg[3] * fs;
        } else {
            fs = f(mid - dx) + f(mid + dx);
            if (i % 2 == 1) gauss += kWg[i / 2] * fs;
        }
        kronrod += kWgk[i] * fs;
    }
    kronrod *= h;
    gauss *= h;

    Panel p;
    p.a = a;
    p.b = b;
    p.value = kronrod;
    // The standard QUADPACK-style inflation of |K15−G7| keeps the estimate
    // conservative without being hysterical for smooth integrands.
    const double diff = std::abs(kronrod - gauss);
    p.error = diff;
    if (diff > 0.0) {
        const double scale = std::abs(kronrod) + diff;
        if (scale > 0.0) {
            const double r = std::pow(200.0 * diff / scale, 1.5) * scale;
            p.error = std::min(diff, r);
        }
    }
    return p;
}

} // namespace detail

/// Adaptive integral of a complex-valued f over the finite interval [a, b].
///
/// Guarantees on return: error ≤ max(rel_tol·|value|, abs_tol); otherwise a
/// NonConvergence is thrown carrying the best estimate context.
template <class F>
QuadratureResult integrate_finite(F&& f, double a, double b,
                                  const QuadratureConfig& cfg = {}) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw ValidationError("integrate_finite: endpoints must be finite");
    if (a == b) return {complex{0.0, 0.0}, 0.0, 0};

    std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelWorse>
        queue;
    queue.push(detail::gk15(f, a, b));

    complex total = queue.top().value;
    double err = queue.top().error;

    int splits = 0;
    while (err > std::max(cfg.rel_tol * std::abs(total), cfg.abs_tol)) {
        if (splits >= cfg.max_subdivisions)
            throw NonConvergence("integrate_finite: subdivision budget exhausted");
        detail::Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b))
            throw NonConvergence("integrate_finite: interval too small to split");
        detail::Panel left = detail::gk15(f, worst.a, mid);
        detail::Panel right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++splits;

        // Periodically re-accumulate to shed cancellation in the running sums.
        if ((splits & 63) == 0) {
            std::vector<detail::Panel> panels;
            panels.reserve(queue.size());
            while (!queue.empty()) {
                panels.push_back(queue.top());
                queue.pop();
            }
            total = complex{};
            err = 0.0;
            for (const auto& p : panels) {
                total += p.value;
                err += p.error;
            }
            for (auto& p : panels) queue.push(p);
        }
    }
    return {total, err, splits};
}

/// Adaptive integral of f over [a, ∞), mapped through x = a + s·t/(1−t).
///
/// `cfg.decay_scale` (s above) should be of the order of the integrand's decay
/// length so the transformed integrand is well-behaved on (0, 1).
template <class F>
QuadratureResult integrate_semiinfinite(F&& f, double a,
                                        const QuadratureConfig& cfg = {}) {
    if (!(std::isfinite(a)))
        throw ValidationError("integrate_semiinfinite: lower endpoint must be finite");
    if (!(cfg.decay_scale > 0.0 && std::isfinite(cfg.decay_scale)))
        throw ValidationError("integrate_semiinfinite: decay_scale must be > 0");
    const double s = cfg.decay_scale;
    auto g = [&](double t) -> complex {
        const double u = 1.0 - t;
        const double x = a + s * t / u;
        return f(x) * (s / (u * u));
    };
    return integrate_finite(g, 0.0, 1.0, cfg);
}

// ── Differentiation ──────────────────────────────────────────────────────────

/// Richardson-extrapolated central difference of a complex-valued g at x0.
///
/// Uses steps h and h/2: D = (4·D_{h/2} − D_h)/3, eliminating the O(h²) term.
/// Returns the derivative and an error estimate |D − D_{h/2}|.
template <class G>
std::pair<complex, double> central_derivative(G&& g, double x0, double h) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw StepTooSmall("central_derivative: step must be positive and finite");
    auto diff = [&](double step) -> complex {
        return (g(x0 + step) - g(x0 - step)) / (2.0 * step);
    };
    const complex d1 = diff(h);
    const complex d2 = diff(0.5 * h);
    const complex richardson = (4.0 * d2 - d1) / 3.0;
    return {richardson, std::abs(richardson - d2)};
}

} // namespace cpshift
