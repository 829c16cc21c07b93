#include "overlap_lab/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "overlap_lab/errors.hpp"

namespace overlap_lab {

namespace {

constexpr double kGapFloor = 1e-14;

void require_size(const Spectrum& lambda, const EnsembleSpec& spec, std::size_t min_n) {
    if (lambda.size() != spec.n()) {
        throw DimensionMismatch("spectrum size " + std::to_string(lambda.size()) + " does not match " + spec.label());
    }
    if (lambda.size() < min_n) throw ParameterError("formula requires N >= " + std::to_string(min_n));
}

double coupling(const EnsembleSpec& spec) {
    return spec.kind() == EnsembleKind::truncated_unitary ? static_cast<double>(spec.m())
                                                          : static_cast<double>(spec.n());
}

// Product of real positive factors, switching to log space for long or
// explosive products.
class RealProduct {
public:
    explicit RealProduct(std::size_t count) : log_space_(count > 64) {}

    void multiply(double f) {
        if (!log_space_ && f > 1e8) {
            log_ = std::log(value_);
            log_space_ = true;
        }
        if (log_space_) {
            log_ += std::log(f);
        } else {
            value_ *= f;
        }
    }

    [[nodiscard]] double value() const { return log_space_ ? std::exp(log_) : value_; }

private:
    bool log_space_;
    double value_ = 1.0;
    double log_ = 0.0;
};

// Complex analogue: modulus in log space, phase accumulated separately.
class ComplexProduct {
public:
    explicit ComplexProduct(std::size_t count) : log_space_(count > 64) {}

    void multiply(Complex f) {
        if (!log_space_ && std::abs(f) > 1e8) {
            log_abs_ = std::log(std::abs(value_));
            phase_ = std::arg(value_);
            log_space_ = true;
        }
        if (log_space_) {
            log_abs_ += std::log(std::abs(f));
            phase_ += std::arg(f);
        } else {
            value_ *= f;
        }
    }

    [[nodiscard]] Complex value() const { return log_space_ ? std::polar(std::exp(log_abs_), phase_) : value_; }

private:
    bool log_space_;
    Complex value_{1.0, 0.0};
    double log_abs_ = 0.0;
    double phase_ = 0.0;
};

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

} // namespace

double quenched_ov11(const Spectrum& lambda, const EnsembleSpec& spec) {
    require_size(lambda, spec, 1);
    const Complex l1 = lambda[0];
    const double r1 = std::norm(l1);
    const double scale = coupling(spec);
    RealProduct prod(lambda.size() - 1);
    for (std::size_t k = 1; k < lambda.size(); ++k) {
        const double gap = std::abs(l1 - lambda[k]);
        if (!(gap > kGapFloor)) throw DegenerateSpectrum("quenched_ov11: λ_1 coincides with λ_" + std::to_string(k + 1));
        const double rk = std::norm(lambda[k]);
        double num = 1.0;
        switch (spec.kind()) {
        case EnsembleKind::ginibre: num = 1.0; break;
        case EnsembleKind::spherical: num = (1.0 + r1) * (1.0 + rk); break;
        case EnsembleKind::truncated_unitary: num = (1.0 - r1) * (1.0 - rk); break;
        }
        prod.multiply(1.0 + num / (scale * gap * gap));
    }
    return prod.value();
}

Complex quenched_ov12(const Spectrum& lambda, const EnsembleSpec& spec, bool use_printed) {
    require_size(lambda, spec, 2);
    const Complex l1 = lambda[0];
    const Complex l2 = lambda[1];
    const double scale = coupling(spec);
    const double gap12 = std::abs(l1 - l2);
    if (!(gap12 > kGapFloor)) throw DegenerateSpectrum("quenched_ov12: λ_1 coincides with λ_2");

    const double r1 = std::norm(l1);
    const double r2 = std::norm(l2);
    Complex pair{1.0, 0.0};
    double first_column = 1.0;  // N E|u_2|^2 (M E|u_2|^2 for TUE)
    switch (spec.kind()) {
    case EnsembleKind::ginibre: break;
    case EnsembleKind::spherical:
        pair = 1.0 + l1 * std::conj(l2);
        first_column = (1.0 + r1) * (1.0 + r2);
        break;
    case EnsembleKind::truncated_unitary:
        pair = 1.0 - l1 * std::conj(l2);
        first_column = (1.0 - r1) * (1.0 - r2);
        break;
    }
    if (use_printed) first_column = 1.0;

    ComplexProduct prod(lambda.size());
    prod.multiply(Complex{-first_column / (scale * gap12 * gap12), 0.0});
    for (std::size_t k = 2; k < lambda.size(); ++k) {
        const Complex a = l1 - lambda[k];
        const Complex b = std::conj(l2 - lambda[k]);
        if (!(std::abs(a) > kGapFloor) || !(std::abs(b) > kGapFloor)) {
            throw DegenerateSpectrum("quenched_ov12: λ_" + std::to_string(k + 1) + " coincides with λ_1 or λ_2");
        }
        const double rk = std::norm(lambda[k]);
        double weight = 1.0;
        switch (spec.kind()) {
        case EnsembleKind::ginibre: weight = 1.0; break;
        case EnsembleKind::spherical: weight = 1.0 + rk; break;
        case EnsembleKind::truncated_unitary: weight = 1.0 - rk; break;
        }
        prod.multiply(1.0 + pair * weight / (scale * a * b));
    }
    return prod.value();
}

double quenched_trace(const Spectrum& lambda, const EnsembleSpec& spec, bool use_printed_tue) {
    require_size(lambda, spec, 1);
    const double n = static_cast<double>(spec.n());
    switch (spec.kind()) {
    case EnsembleKind::ginibre: {
        double s = 0.0;
        for (const auto& l : lambda.values) s += std::norm(l);
        return s / n + (n - 1.0) / (2.0 * n);
    }
    case EnsembleKind::spherical: {
        RealProduct prod(lambda.size());
        for (const auto& l : lambda.values) prod.multiply(1.0 + (1.0 + std::norm(l)) / n);
        return prod.value() - 2.0;
    }
    case EnsembleKind::truncated_unitary: {
        const double m = static_cast<double>(spec.m());
        double prod = 1.0;
        if (use_printed_tue) {
            for (const auto& l : lambda.values) prod *= 1.0 + (1.0 - std::norm(l)) / m;
            return prod - (1.0 + n / m);
        }
        for (const auto& l : lambda.values) prod *= 1.0 - (1.0 - std::norm(l)) / m;
        return (m / n) * prod - m / n + 1.0;
    }
    }
    throw ParameterError("unknown ensemble");
}

double inv_gamma2_cdf(double x) {
    if (!(x > 0.0)) throw NonPositiveArgument("inv_gamma2_cdf requires x > 0");
    if (std::isinf(x)) return 1.0;
    const double s = 1.0 / x;
    return (1.0 + s) * std::exp(-s);
}

double inv_gamma2_median() {
    // Solve (1 + s) e^{-s} = 1/2 for s > 0 by Newton; x = 1/s.
    double s = 1.7;
    for (int i = 0; i < 50; ++i) {
        const double f = (1.0 + s) * std::exp(-s) - 0.5;
        const double df = -s * std::exp(-s);
        const double step = f / df;
        s -= step;
        if (std::abs(step) < 1e-16 * s) break;
    }
    return 1.0 / s;
}

std::vector<BandMedian> quenched_invariance_probe(const std::vector<Spectrum>& spectra, const EnsembleSpec& spec,
                                                  const std::vector<RadiusBand>& bands) {
    std::vector<std::vector<double>> values(bands.size());
    Spectrum reordered;
    for (const auto& s : spectra) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t b = 0; b < bands.size(); ++b) {
                if (!bands[b].contains(s[i])) continue;
                reordered.values = s.values;
                std::swap(reordered.values[0], reordered.values[i]);
                try {
                    values[b].push_back(quenched_ov11(reordered, spec));
                } catch (const DegenerateSpectrum&) {
                    // probability-zero collision; skip
                }
            }
        }
    }
    std::vector<BandMedian> out;
    for (std::size_t b = 0; b < bands.size(); ++b) {
        auto& v = values[b];
        if (v.empty()) {
            throw EmptyInput("quenched_invariance_probe: band [" + std::to_string(bands[b].inner) + ", " +
                                 std::to_string(bands[b].outer) + ") received no eigenvalue");
        }
        const std::size_t mid = v.size() / 2;
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
        double median = v[mid];
        if (v.size() % 2 == 0) {
            const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
            median = 0.5 * (median + lower);
        }
        out.push_back({bands[b], median, v.size()});
    }
    return out;
}

Rational Rational::of(std::int64_t n, std::int64_t d) {
    if (d == 0) throw ParameterError("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = gcd64(n < 0 ? -n : n, d);
    return g == 0 ? Rational{0, 1} : Rational{n / g, d / g};
}

Rational operator+(Rational a, Rational b) { return Rational::of(a.num * b.den + b.num * a.den, a.den * b.den); }
Rational operator-(Rational a, Rational b) { return Rational::of(a.num * b.den - b.num * a.den, a.den * b.den); }
Rational operator*(Rational a, Rational b) { return Rational::of(a.num * b.num, a.den * b.den); }
Rational operator/(Rational a, Rational b) { return Rational::of(a.num * b.den, a.den * b.num); }

Rational origin_factor_mean(const EnsembleSpec& spec, std::size_t k) {
    const auto n = static_cast<std::int64_t>(spec.n());
    const auto kk = static_cast<std::int64_t>(k);
    if (kk < 2 || kk > n) throw ParameterError("origin_factor_mean requires 2 <= k <= N");
    auto inverse_beta_mean = [](std::int64_t a, std::int64_t b) { return Rational::of(a + b - 1, a - 1); };
    const Rational one = Rational::of(1, 1);
    switch (spec.kind()) {
    case EnsembleKind::ginibre:
        // 1 + E Gamma(1) E[1/Gamma(k)] = 1 + 1/(k - 1)
        return one + Rational::of(1, kk - 1);
    case EnsembleKind::spherical:
        return one + Rational::of(1, n) * inverse_beta_mean(kk, n + 1 - kk);
    case EnsembleKind::truncated_unitary: {
        const auto m = static_cast<std::int64_t>(spec.m());
        return one + (inverse_beta_mean(kk, m) - one) * Rational::of(1, m);
    }
    }
    throw ParameterError("unknown ensemble");
}

} // namespace overlap_lab
