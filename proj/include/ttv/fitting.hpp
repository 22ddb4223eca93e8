#ifndef TTV_FITTING_HPP
#define TTV_FITTING_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "ttv/errors.hpp"
#include "ttv/quantile_model.hpp"

namespace ttv {

/// Lognormal maximum likelihood: xi is the mean of the log sample, psi its
/// population standard deviation. A zero log-variance sample degenerates to
/// the point mass at the common value.
inline QuantileModel fit_lognormal_mle(std::span<const double> samples) {
    if (samples.size() < 2) fail(errc::too_few_samples, "lognormal fit needs n >= 2");
    double sum = 0.0;
    for (double v : samples) {
        if (!std::isfinite(v)) fail(errc::non_finite, "lognormal fit sample");
        if (v <= 0.0) fail(errc::non_positive_sample, "lognormal fit requires positive samples");
        sum += std::log(v);
    }
    const double n = static_cast<double>(samples.size());
    const double xi = sum / n;
    double ss = 0.0;
    for (double v : samples) {
        const double d = std::log(v) - xi;
        ss += d * d;
    }
    const double psi = std::sqrt(ss / n);
    if (psi == 0.0) return QuantileModel::degenerate(std::exp(xi));
    return QuantileModel::lognormal(xi, psi);
}

namespace detail {

// Profile log-likelihood for Burr XII over (ln c, ln s); for fixed c and s
// the k maximizing the likelihood is closed-form: k = n / sum ln(1+(x/s)^c).
// Works on precomputed log-samples so each evaluation is one exp per point.
struct BurrProfile {
    std::vector<double> log_xs;
    double sum_log = 0.0;

    explicit BurrProfile(std::span<const double> xs) {
        log_xs.reserve(xs.size());
        for (double x : xs) {
            log_xs.push_back(std::log(x));
            sum_log += log_xs.back();
        }
    }

    double k_hat(double c, double ln_s, double& big_s) const {
        big_s = 0.0;
        for (double lx : log_xs) big_s += std::log1p(std::exp(c * (lx - ln_s)));
        return static_cast<double>(log_xs.size()) / big_s;
    }

    // negative profile log-likelihood (to minimize)
    double operator()(double ln_c, double ln_s) const {
        if (ln_c < -4.0 || ln_c > 6.0 || !std::isfinite(ln_c) || !std::isfinite(ln_s))
            return 1e300;
        const double c = std::exp(ln_c);
        double big_s = 0.0;
        const double k = k_hat(c, ln_s, big_s);
        if (!(k > 0.0) || !std::isfinite(big_s) || big_s <= 0.0) return 1e300;
        const double n = static_cast<double>(log_xs.size());
        const double ll = n * std::log(c) + n * std::log(k) - n * ln_s +
                          (c - 1.0) * (sum_log - n * ln_s) - (k + 1.0) * big_s;
        return std::isfinite(ll) ? -ll : 1e300;
    }
};

// Minimal deterministic Nelder-Mead on 2 parameters.
template <class F>
std::array<double, 2> nelder_mead_2d(const F& f, std::array<double, 2> start, double scale,
                                     int max_iter, double tol, bool& converged) {
    using Pt = std::array<double, 2>;
    struct V { Pt x; double fx; };
    std::array<V, 3> sx;
    sx[0] = {start, f(start[0], start[1])};
    sx[1] = {{start[0] + scale, start[1]}, 0.0};
    sx[2] = {{start[0], start[1] + scale}, 0.0};
    sx[1].fx = f(sx[1].x[0], sx[1].x[1]);
    sx[2].fx = f(sx[2].x[0], sx[2].x[1]);
    converged = false;
    for (int it = 0; it < max_iter; ++it) {
        std::sort(sx.begin(), sx.end(), [](const V& a, const V& b) { return a.fx < b.fx; });
        if (std::fabs(sx[2].fx - sx[0].fx) <=
            tol * (std::fabs(sx[0].fx) + std::fabs(sx[2].fx) + 1e-10)) {
            converged = true;
            break;
        }
        const Pt cen{0.5 * (sx[0].x[0] + sx[1].x[0]), 0.5 * (sx[0].x[1] + sx[1].x[1])};
        const auto mix = [&](double t) {
            return Pt{cen[0] + t * (cen[0] - sx[2].x[0]), cen[1] + t * (cen[1] - sx[2].x[1])};
        };
        const Pt xr = mix(1.0);
        const double fr = f(xr[0], xr[1]);
        if (fr < sx[0].fx) {
            const Pt xe = mix(2.0);
            const double fe = f(xe[0], xe[1]);
            sx[2] = fe < fr ? V{xe, fe} : V{xr, fr};
        } else if (fr < sx[1].fx) {
            sx[2] = {xr, fr};
        } else {
            const Pt xc = mix(-0.5);
            const double fc = f(xc[0], xc[1]);
            if (fc < sx[2].fx) {
                sx[2] = {xc, fc};
            } else {
                for (int i = 1; i < 3; ++i) {
                    sx[i].x = {0.5 * (sx[i].x[0] + sx[0].x[0]), 0.5 * (sx[i].x[1] + sx[0].x[1])};
                    sx[i].fx = f(sx[i].x[0], sx[i].x[1]);
                }
            }
        }
    }
    std::sort(sx.begin(), sx.end(), [](const V& a, const V& b) { return a.fx < b.fx; });
    return sx[0].x;
}

} // namespace detail

/// Burr XII maximum likelihood via a profile search: k is profiled out in
/// closed form, and a deterministic multi-start Nelder-Mead covers
/// (ln c, ln s) seeded from the sample median and mean. The fitted model
/// must satisfy c*k > 2 so mean and variance exist.
inline QuantileModel fit_burr(std::span<const double> samples) {
    if (samples.size() < 10) fail(errc::too_few_samples, "burr fit needs n >= 10");
    double lo = samples[0], hi = samples[0], sum = 0.0;
    for (double x : samples) {
        if (!std::isfinite(x)) fail(errc::non_finite, "burr fit sample");
        if (x <= 0.0) fail(errc::non_positive_sample, "burr fit requires positive samples");
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        sum += x;
    }
    if (lo == hi) return QuantileModel::degenerate(lo);

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double mean = sum / static_cast<double>(samples.size());

    detail::BurrProfile nll(samples);
    double best = 1e300;
    std::array<double, 2> best_x{0.0, 0.0};
    bool any = false;
    for (double c0 : {0.8, 1.6, 3.2, 6.4, 12.8}) {
        for (double s0 : {median, mean}) {
            bool conv = false;
            const auto x = detail::nelder_mead_2d(
                [&](double a, double b) { return nll(a, b); },
                {std::log(c0), std::log(s0)}, 0.4, 400, 1e-12, conv);
            const double fx = nll(x[0], x[1]);
            if (conv && fx < best) {
                best = fx;
                best_x = x;
                any = true;
            }
        }
    }
    if (!any) fail(errc::convergence_failure, "burr fit: no start converged");
    const double c = std::exp(best_x[0]);
    const double s = std::exp(best_x[1]);
    double big_s = 0.0;
    const double k = nll.k_hat(c, best_x[1], big_s);
    if (!(c * k > 2.0))
        fail(errc::moment_not_finite,
             "burr fit: maximum-likelihood parameters have c*k <= 2 (no finite variance)");
    return QuantileModel::burr(c, k, s);
}

/// Kolmogorov-Smirnov statistic of a fitted model against the sample ECDF.
inline double ks_statistic(std::span<const double> samples, const QuantileModel& model) {
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = model.cdf(xs[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

enum class DistChoice { Logn, Burr, Empirical, Auto };

struct FitResult {
    QuantileModel model;
    std::optional<double> ks_logn;
    std::optional<double> ks_burr;
    std::string chosen;
    std::vector<std::string> warnings;
};

/// Fit dispatcher. `auto` fits both parametric families and keeps the
/// lognormal unless its KS statistic exceeds the Burr fit's by more than
/// 0.02; a Burr fit failure falls back to the lognormal with a warning.
inline FitResult fit_model(std::span<const double> samples, DistChoice choice,
                           Interpolation empirical_rule = Interpolation::Step) {
    switch (choice) {
        case DistChoice::Logn: {
            auto m = fit_lognormal_mle(samples);
            return {std::move(m), std::nullopt, std::nullopt, "lognormal", {}};
        }
        case DistChoice::Burr: {
            auto m = fit_burr(samples);
            return {std::move(m), std::nullopt, std::nullopt, "burr_xii", {}};
        }
        case DistChoice::Empirical: {
            auto m = QuantileModel::empirical(std::vector<double>(samples.begin(), samples.end()),
                                              empirical_rule);
            return {std::move(m), std::nullopt, std::nullopt, "empirical", {}};
        }
        case DistChoice::Auto: {
            auto logn = fit_lognormal_mle(samples);
            if (logn.kind() == Kind::Degenerate)
                return {std::move(logn), std::nullopt, std::nullopt, "degenerate", {}};
            const double d_logn = ks_statistic(samples, logn);
            try {
                auto burr = fit_burr(samples);
                const double d_burr = ks_statistic(samples, burr);
                if (d_logn > d_burr + 0.02)
                    return {std::move(burr), d_logn, d_burr, "burr_xii", {}};
                return {std::move(logn), d_logn, d_burr, "lognormal", {}};
            } catch (const error& e) {
                return {std::move(logn), d_logn, std::nullopt, "lognormal",
                        {std::string("burr fit unavailable (") + e.what() + ")"}};
            }
        }
    }
    fail(errc::validation_error, "unknown distribution choice");
}

} // namespace ttv

#endif // TTV_FITTING_HPP
