#ifndef TTV_QUADRATURE_HPP
#define TTV_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "ttv/errors.hpp"

namespace ttv {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int panels = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1].
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,  // G7
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,  // G7
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,  // G7
    0.207784955007898467600689403773245,
    0.0,                                   // G7
};
inline constexpr double kGK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,  // node 1
    0.279705391489276667901467771423780,  // node 3
    0.381830050505118944950369775488975,  // node 5
    0.417959183673469387755102040816327,  // node 7
};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kGK15Nodes[i]);
        fv[14 - i] = f(c + h * kGK15Nodes[i]);
    }
    fv[7] = f(c);
    double k = kGK15Weights[7] * fv[7];
    double g = kG7Weights[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        const double pairsum = fv[i] + fv[14 - i];
        k += kGK15Weights[i] * pairsum;
        if (i % 2 == 1) g += kG7Weights[i / 2] * pairsum;
    }
    kronrod = k * h;
    err = std::fabs((k - g) * h);
}

} // namespace detail

/// Adaptive Gauss-Kronrod (7-15) integration of f over [a,b].
/// Bisects the panel with the largest error estimate until the combined
/// estimate meets rel_tol (with a small absolute floor) or the panel budget
/// runs out, in which case errc::tail_divergence is raised.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b,
                                    double rel_tol = 1e-9, int max_panels = 10000) {
    struct Panel { double a, b, value, err; };
    std::vector<Panel> panels;
    double v, e;
    detail::gk15(f, a, b, v, e);
    panels.push_back({a, b, v, e});
    int evals = 1;
    for (;;) {
        double total = 0.0, total_err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].value;
            total_err += panels[i].err;
            if (panels[i].err > panels[worst].err) worst = i;
        }
        if (total_err <= rel_tol * std::fabs(total) + 1e-300 ||
            total_err <= 1e-15 * (std::fabs(a) + std::fabs(b) + 1.0)) {
            return {total, total_err, evals};
        }
        if (evals >= max_panels) {
            fail(errc::tail_divergence, "quadrature failed to converge within panel budget");
        }
        Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        double v1, e1, v2, e2;
        detail::gk15(f, p.a, mid, v1, e1);
        detail::gk15(f, mid, p.b, v2, e2);
        panels[worst] = {p.a, mid, v1, e1};
        panels.push_back({mid, p.b, v2, e2});
        evals += 2;
    }
}

/// Integral of a quantile function over the upper probability interval [p,1),
/// with the substitution x = 1 - exp(-u) so that heavy right tails become
/// exponentially damped: int_p^1 Q(x) dx = int_{u0}^inf UQ(e^-u) e^-u du,
/// where UQ(s) evaluates the quantile at upper tail mass s = 1 - x.
///
/// Taking the upper tail mass (not the probability) keeps the quantile
/// argument exact arbitrarily deep into the tail, so the sweep can run to
/// the underflow limit of e^-u instead of stopping where 1 - e^-u rounds
/// to 1. The u-axis is swept in fixed-width blocks, each integrated
/// adaptively; the sweep stops once the measured geometric decay bounds the
/// remainder inside the tolerance. errc::tail_divergence is raised only if
/// the panel budget is exhausted or no decay is ever established.
template <class UQ>
double integrate_upper_tail(const UQ& upper_quantile, double p, double rel_tol = 1e-9,
                            int max_panels = 10000) {
    if (!(p > 0.0 && p < 1.0)) {
        fail(errc::probability_out_of_range, "quantile integral requires 0 < p < 1");
    }
    const double u0 = -std::log1p(-p);
    const double u_max = 690.0;  // exp(-u) underflows shortly beyond this
    const auto g = [&](double u) { return upper_quantile(std::exp(-u)) * std::exp(-u); };

    double total = 0.0;
    double last_block = 0.0, prev_block = -1.0;
    int used = 0;
    double lo = u0;
    const double block = 3.0;
    while (lo < u_max) {
        const double hi = std::min(lo + block, u_max);
        QuadratureResult r = integrate_adaptive(g, lo, hi, rel_tol, max_panels - used);
        used += r.panels;
        total += r.value;
        prev_block = last_block;
        last_block = std::fabs(r.value);
        if (total != 0.0) {
            if (last_block == 0.0) return total;
            if (prev_block > 0.0 && last_block < 0.9 * prev_block) {
                const double ratio = std::max(last_block / prev_block, 1e-6);
                const double remainder = last_block * ratio / (1.0 - ratio);
                if (remainder <= 0.5 * rel_tol * std::fabs(total)) return total;
            }
        }
        lo = hi;
    }
    fail(errc::tail_divergence,
         "quantile tail integral: no geometric decay established before the "
         "underflow limit");
}

} // namespace ttv

#endif // TTV_QUADRATURE_HPP
