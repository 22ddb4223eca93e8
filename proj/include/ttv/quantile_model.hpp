#ifndef TTV_QUANTILE_MODEL_HPP
#define TTV_QUANTILE_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttv/errors.hpp"
#include "ttv/normal.hpp"
#include "ttv/quadrature.hpp"
#include "ttv/rng.hpp"

namespace ttv {

enum class Kind { Lognormal, BurrXII, Empirical, Degenerate, UniformTest };
enum class Interpolation { Linear, Step };

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Lognormal:   return "lognormal";
        case Kind::BurrXII:     return "burr_xii";
        case Kind::Empirical:   return "empirical";
        case Kind::Degenerate:  return "degenerate";
        case Kind::UniformTest: return "uniform";
    }
    return "?";
}

/// Immutable travel-time distribution. Exposes the quantile-domain
/// primitives every downstream tail measure consumes: quantile, CDF, PDF,
/// mean, standard deviation, and the partial expectation
///   partial_expectation(p) = int_p^1 F^{-1}(x) dx.
///
/// Stored mean/stddev always equal the analytic moments of the
/// parameterized distribution (population moments for empirical kinds),
/// so the standardized variable X = (T - mean)/stddev has mean 0, stddev 1.
class QuantileModel {
public:
    // -- factories ----------------------------------------------------------

    static QuantileModel lognormal(double xi, double psi) {
        if (!std::isfinite(xi) || !std::isfinite(psi)) fail(errc::non_finite, "lognormal params");
        if (psi <= 0.0) fail(errc::validation_error, "lognormal requires psi > 0");
        QuantileModel m(Kind::Lognormal);
        m.a_ = xi;
        m.b_ = psi;
        m.mean_ = std::exp(xi + 0.5 * psi * psi);
        m.std_ = m.mean_ * std::sqrt(std::expm1(psi * psi));
        return m;
    }

    /// Moment inversion: psi^2 = ln(1 + (std/mean)^2), xi = ln(mean) - psi^2/2.
    /// A zero-variance input degenerates to the point mass at `mean`.
    static QuantileModel lognormal_from_moments(double mean, double stddev) {
        if (!std::isfinite(mean) || !std::isfinite(stddev)) fail(errc::non_finite, "moments");
        if (mean <= 0.0) fail(errc::non_positive_mean, "lognormal mean must be positive");
        if (stddev < 0.0) fail(errc::validation_error, "negative standard deviation");
        if (stddev == 0.0) return degenerate(mean);
        const double cv = stddev / mean;
        const double psi2 = std::log1p(cv * cv);
        return lognormal(std::log(mean) - 0.5 * psi2, std::sqrt(psi2));
    }

    static QuantileModel burr(double c, double k, double s) {
        if (!std::isfinite(c) || !std::isfinite(k) || !std::isfinite(s))
            fail(errc::non_finite, "burr params");
        if (c <= 0.0 || k <= 0.0 || s <= 0.0) fail(errc::validation_error, "burr params must be positive");
        if (c * k <= 2.0)
            fail(errc::moment_not_finite, "Burr XII requires c*k > 2 for finite mean and variance");
        QuantileModel m(Kind::BurrXII);
        m.a_ = c;
        m.b_ = k;
        m.c_ = s;
        const double m1 = burr_raw_moment(c, k, s, 1.0);
        const double m2 = burr_raw_moment(c, k, s, 2.0);
        m.mean_ = m1;
        m.std_ = std::sqrt(std::max(0.0, m2 - m1 * m1));
        return m;
    }

    static QuantileModel degenerate(double value) {
        if (!std::isfinite(value)) fail(errc::non_finite, "degenerate value");
        QuantileModel m(Kind::Degenerate);
        m.a_ = value;
        m.mean_ = value;
        m.std_ = 0.0;
        return m;
    }

    static QuantileModel uniform_test(double lo, double hi) {
        if (!std::isfinite(lo) || !std::isfinite(hi)) fail(errc::non_finite, "uniform bounds");
        if (!(lo < hi)) fail(errc::validation_error, "uniform requires lo < hi");
        QuantileModel m(Kind::UniformTest);
        m.a_ = lo;
        m.b_ = hi;
        m.mean_ = 0.5 * (lo + hi);
        m.std_ = (hi - lo) / std::sqrt(12.0);
        return m;
    }

    static QuantileModel uniform_from_moments(double mean, double stddev) {
        if (stddev <= 0.0) return degenerate(mean);
        const double h = stddev * std::sqrt(3.0);
        return uniform_test(mean - h, mean + h);
    }

    /// Empirical model over order statistics. Linear interpolates between the
    /// plotting positions p_i = (i - 0.5)/n and clamps at the extremes; Step
    /// is the left-continuous inverse of the ECDF. Stored moments are the
    /// population moments of the sample.
    static QuantileModel empirical(std::vector<double> samples, Interpolation rule) {
        if (samples.size() < 2) fail(errc::too_few_samples, "empirical model needs n >= 2");
        for (double v : samples)
            if (!std::isfinite(v)) fail(errc::non_finite, "empirical sample");
        std::sort(samples.begin(), samples.end());
        QuantileModel m(Kind::Empirical);
        m.interp_ = rule;
        const std::size_t n = samples.size();
        double sum = 0.0;
        for (double v : samples) sum += v;
        m.mean_ = sum / static_cast<double>(n);
        double ss = 0.0;
        for (double v : samples) ss += (v - m.mean_) * (v - m.mean_);
        m.std_ = std::sqrt(ss / static_cast<double>(n));
        m.samples_ = std::move(samples);
        m.suffix_sum_.assign(n + 1, 0.0);
        for (std::size_t i = n; i-- > 0;)
            m.suffix_sum_[i] = m.suffix_sum_[i + 1] + m.samples_[i];
        if (rule == Interpolation::Linear) m.build_linear_suffix();
        return m;
    }

    // -- observers ----------------------------------------------------------

    Kind kind() const noexcept { return kind_; }
    double mean() const noexcept { return mean_; }
    double stddev() const noexcept { return std_; }
    bool is_degenerate() const noexcept { return kind_ == Kind::Degenerate; }

    double lognormal_xi() const { require(Kind::Lognormal); return a_; }
    double lognormal_psi() const { require(Kind::Lognormal); return b_; }
    double burr_c() const { require(Kind::BurrXII); return a_; }
    double burr_k() const { require(Kind::BurrXII); return b_; }
    double burr_s() const { require(Kind::BurrXII); return c_; }
    double degenerate_value() const { require(Kind::Degenerate); return a_; }
    double uniform_lo() const { require(Kind::UniformTest); return a_; }
    double uniform_hi() const { require(Kind::UniformTest); return b_; }
    std::span<const double> samples() const { require(Kind::Empirical); return samples_; }
    Interpolation interpolation() const { require(Kind::Empirical); return interp_; }

    // -- evaluation ---------------------------------------------------------

    double quantile(double p) const {
        if (!(p >= 0.0 && p <= 1.0)) fail(errc::probability_out_of_range, "quantile");
        switch (kind_) {
            case Kind::Lognormal:
                if (p == 0.0) return 0.0;
                if (p == 1.0) return std::numeric_limits<double>::infinity();
                return std::exp(a_ + b_ * normal_quantile(p));
            case Kind::BurrXII: {
                if (p == 0.0) return 0.0;
                if (p == 1.0) return std::numeric_limits<double>::infinity();
                // (1-p)^{-1/k} - 1 without cancellation near p = 0
                const double y = std::expm1(-std::log1p(-p) / b_);
                return c_ * std::pow(y, 1.0 / a_);
            }
            case Kind::UniformTest:
                return a_ + (b_ - a_) * p;
            case Kind::Degenerate:
                return a_;
            case Kind::Empirical:
                return interp_ == Interpolation::Step ? step_quantile(p) : linear_quantile(p);
        }
        return 0.0;
    }

    /// Quantile at upper tail mass s in (0, 1]: upper_quantile(s) =
    /// quantile(1 - s), but evaluated tail-stably so that s can go all the
    /// way to the underflow limit without the probability rounding to 1.
    double upper_quantile(double s) const {
        if (!(s > 0.0 && s <= 1.0)) fail(errc::probability_out_of_range, "upper_quantile");
        switch (kind_) {
            case Kind::Lognormal:
                return std::exp(a_ - b_ * normal_quantile(s));
            case Kind::BurrXII:
                return c_ * std::pow(std::expm1(-std::log(s) / b_), 1.0 / a_);
            case Kind::UniformTest:
                return b_ - (b_ - a_) * s;
            case Kind::Degenerate:
                return a_;
            case Kind::Empirical:
                return quantile(std::max(0.0, 1.0 - s));
        }
        return 0.0;
    }

    // Right-continuous CDF (matters for Step empirical and Degenerate kinds).
    double cdf(double t) const {
        switch (kind_) {
            case Kind::Lognormal:
                return t <= 0.0 ? 0.0 : normal_cdf((std::log(t) - a_) / b_);
            case Kind::BurrXII: {
                if (t <= 0.0) return 0.0;
                return -std::expm1(-b_ * std::log1p(std::pow(t / c_, a_)));
            }
            case Kind::UniformTest:
                return std::clamp((t - a_) / (b_ - a_), 0.0, 1.0);
            case Kind::Degenerate:
                return t < a_ ? 0.0 : 1.0;
            case Kind::Empirical: {
                if (interp_ == Interpolation::Step) {
                    const auto it = std::upper_bound(samples_.begin(), samples_.end(), t);
                    return static_cast<double>(it - samples_.begin()) /
                           static_cast<double>(samples_.size());
                }
                return linear_cdf(t);
            }
        }
        return 0.0;
    }

    double pdf(double t) const {
        switch (kind_) {
            case Kind::Lognormal: {
                if (t <= 0.0) return 0.0;
                const double z = (std::log(t) - a_) / b_;
                return normal_pdf(z) / (t * b_);
            }
            case Kind::BurrXII: {
                if (t <= 0.0) return 0.0;
                const double y = std::pow(t / c_, a_);
                return (a_ * b_ / c_) * std::pow(t / c_, a_ - 1.0) *
                       std::pow(1.0 + y, -b_ - 1.0);
            }
            case Kind::UniformTest:
                return (t >= a_ && t <= b_) ? 1.0 / (b_ - a_) : 0.0;
            case Kind::Empirical:
                if (interp_ == Interpolation::Linear) return linear_pdf(t);
                [[fallthrough]];
            case Kind::Degenerate:
                fail(errc::validation_error, "model kind has no density");
        }
        return 0.0;
    }

    /// int_p^1 F^{-1}(x) dx for 0 < p < 1. Closed form for lognormal,
    /// uniform and degenerate kinds, exact piecewise sums for empirical,
    /// adaptive tail-substituted quadrature for Burr XII.
    double partial_expectation(double p) const {
        if (!(p > 0.0 && p < 1.0)) fail(errc::probability_out_of_range, "partial_expectation");
        return pe_unchecked(p);
    }

    // Partial expectation extended continuously to the closed interval:
    // p <= 0 gives the full mean, p >= 1 gives 0. Internal plumbing for the
    // expected-utility integrals, which clamp F(t0) into [0,1].
    double partial_expectation_closed(double p) const {
        if (p <= 0.0) return mean_;
        if (p >= 1.0) return 0.0;
        return pe_unchecked(p);
    }

private:
    explicit QuantileModel(Kind k) : kind_(k) {}

    void require(Kind k) const {
        if (kind_ != k) fail(errc::validation_error, std::string("accessor requires kind ") + kind_name(k));
    }

    static double burr_raw_moment(double c, double k, double s, double r) {
        // E[T^r] = s^r * k * B(k - r/c, 1 + r/c), defined for c*k > r.
        return std::pow(s, r) *
               std::exp(std::log(k) + std::lgamma(k - r / c) + std::lgamma(1.0 + r / c) -
                        std::lgamma(k + 1.0));
    }

    double pe_unchecked(double p) const {
        switch (kind_) {
            case Kind::Lognormal:
                return mean_ * normal_cdf(b_ - normal_quantile(p));
            case Kind::UniformTest:
                return a_ * (1.0 - p) + 0.5 * (b_ - a_) * (1.0 - p * p);
            case Kind::Degenerate:
                return a_ * (1.0 - p);
            case Kind::Empirical:
                return interp_ == Interpolation::Step ? step_pe(p) : linear_pe(p);
            case Kind::BurrXII:
                return integrate_upper_tail([this](double s) { return upper_quantile(s); }, p);
        }
        return 0.0;
    }

    // --- Step empirical: left-continuous inverse of the ECDF ---------------

    double step_quantile(double p) const {
        const std::size_t n = samples_.size();
        if (p == 0.0) return samples_.front();
        const double np = p * static_cast<double>(n);
        auto idx = static_cast<std::size_t>(std::ceil(np)) - 1;
        if (idx >= n) idx = n - 1;
        return samples_[idx];
    }

    double step_pe(double p) const {
        const std::size_t n = samples_.size();
        const double np = p * static_cast<double>(n);
        auto j = static_cast<std::size_t>(std::ceil(np)) - 1;
        if (j >= n) j = n - 1;
        const double seg_hi = static_cast<double>(j + 1) / static_cast<double>(n);
        return samples_[j] * (seg_hi - p) + suffix_sum_[j + 1] / static_cast<double>(n);
    }

    // --- Linear empirical: plotting positions (i - 0.5)/n, clamped ---------

    double plot_pos(std::size_t i) const {
        return (static_cast<double>(i) + 0.5) / static_cast<double>(samples_.size());
    }

    double linear_quantile(double p) const {
        const std::size_t n = samples_.size();
        if (p <= plot_pos(0)) return samples_.front();
        if (p >= plot_pos(n - 1)) return samples_.back();
        auto j = static_cast<std::size_t>(std::floor(p * static_cast<double>(n) - 0.5));
        if (j >= n - 1) j = n - 2;
        if (p < plot_pos(j)) --j;
        const double t = (p - plot_pos(j)) * static_cast<double>(n);
        return samples_[j] + t * (samples_[j + 1] - samples_[j]);
    }

    void build_linear_suffix() {
        // linear_suffix_[j] = int_{plot_pos(j)}^1 Q(x) dx
        const std::size_t n = samples_.size();
        linear_suffix_.assign(n, 0.0);
        linear_suffix_[n - 1] = (1.0 - plot_pos(n - 1)) * samples_[n - 1];
        for (std::size_t j = n - 1; j-- > 0;) {
            const double seg = 0.5 * (samples_[j] + samples_[j + 1]) / static_cast<double>(n);
            linear_suffix_[j] = linear_suffix_[j + 1] + seg;
        }
    }

    double linear_pe(double p) const {
        const std::size_t n = samples_.size();
        if (p <= plot_pos(0)) return (plot_pos(0) - p) * samples_.front() + linear_suffix_[0];
        if (p >= plot_pos(n - 1)) return (1.0 - p) * samples_.back();
        auto j = static_cast<std::size_t>(std::floor(p * static_cast<double>(n) - 0.5));
        if (j >= n - 1) j = n - 2;
        if (p < plot_pos(j)) --j;
        const double qp = samples_[j] + (p - plot_pos(j)) * static_cast<double>(n) *
                                            (samples_[j + 1] - samples_[j]);
        return 0.5 * (qp + samples_[j + 1]) * (plot_pos(j + 1) - p) + linear_suffix_[j + 1];
    }

    double linear_cdf(double t) const {
        const std::size_t n = samples_.size();
        if (t < samples_.front()) return 0.0;
        if (t >= samples_.back()) return 1.0;
        // last index with samples_[j] <= t; duplicates collapse to the last,
        // which makes the CDF right-continuous at atoms.
        const auto it = std::upper_bound(samples_.begin(), samples_.end(), t);
        const auto j = static_cast<std::size_t>(it - samples_.begin()) - 1;
        if (j + 1 >= n || samples_[j + 1] == samples_[j]) return plot_pos(j);
        const double frac = (t - samples_[j]) / (samples_[j + 1] - samples_[j]);
        return plot_pos(j) + frac / static_cast<double>(n);
    }

    double linear_pdf(double t) const {
        const std::size_t n = samples_.size();
        if (t < samples_.front() || t > samples_.back()) return 0.0;
        const auto it = std::upper_bound(samples_.begin(), samples_.end(), t);
        auto j = static_cast<std::size_t>(it - samples_.begin());
        if (j == 0) j = 1;
        if (j >= n) j = n - 1;
        const double dx = samples_[j] - samples_[j - 1];
        if (dx <= 0.0) return std::numeric_limits<double>::infinity();
        return (1.0 / static_cast<double>(n)) / dx;
    }

    Kind kind_;
    double mean_ = 0.0;
    double std_ = 0.0;
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;
    std::vector<double> samples_;
    std::vector<double> suffix_sum_;
    std::vector<double> linear_suffix_;
    Interpolation interp_ = Interpolation::Step;
};

/// Zero-mean unit-variance view of a model: X = (T - mu)/sigma.
class StandardizedView {
public:
    explicit StandardizedView(const QuantileModel& m) : m_(&m) {
        if (m.stddev() <= 0.0)
            fail(errc::degenerate_variability, "cannot standardize a zero-variance model");
    }

    double quantile(double p) const { return (m_->quantile(p) - m_->mean()) / m_->stddev(); }
    double cdf(double x) const { return m_->cdf(m_->mean() + m_->stddev() * x); }
    double pdf(double x) const { return m_->stddev() * m_->pdf(m_->mean() + m_->stddev() * x); }
    // int_p^1 F_X^{-1}(x) dx
    double partial_expectation(double p) const {
        return (m_->partial_expectation(p) - (1.0 - p) * m_->mean()) / m_->stddev();
    }
    double partial_expectation_closed(double p) const {
        return (m_->partial_expectation_closed(p) - (1.0 - std::clamp(p, 0.0, 1.0)) * m_->mean()) /
               m_->stddev();
    }
    const QuantileModel& base() const { return *m_; }

private:
    const QuantileModel* m_;
};

struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double stddev = 0.0;  // unbiased (n-1)
    std::optional<double> skewness;
    std::optional<double> kurtosis;  // excess
};

inline SampleSummary summary_stats(std::span<const double> samples) {
    if (samples.size() < 2) fail(errc::too_few_samples, "summary_stats needs n >= 2");
    const auto n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double v : samples) {
        if (!std::isfinite(v)) fail(errc::non_finite, "summary_stats sample");
        sum += v;
    }
    SampleSummary s;
    s.n = samples.size();
    s.mean = sum / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : samples) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    s.stddev = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return s;
}

/// n inverse-transform draws from the model, deterministic in the seed.
inline std::vector<double> draw_samples(const QuantileModel& m, std::size_t n,
                                        std::uint64_t seed) {
    SeededUniform rng(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = m.quantile(rng.next());
    return out;
}

} // namespace ttv

#endif // TTV_QUANTILE_MODEL_HPP
