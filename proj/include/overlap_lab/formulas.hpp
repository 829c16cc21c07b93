#pragma once

#include <cstdint>
#include <vector>

#include "overlap_lab/ensembles.hpp"
#include "overlap_lab/linalg.hpp"

namespace overlap_lab {

// Quenched (fixed-spectrum) expectations. λ_1 = lambda[0], λ_2 = lambda[1];
// N = spec.n(), M = spec.m(). Products with more than 64 factors, or with a
// factor above 1e8, are accumulated in log space.

/// E[O_11 | Λ].
double quenched_ov11(const Spectrum& lambda, const EnsembleSpec& spec);

/// E[O_12 | Λ]; requires N >= 2.
///
/// The leading term is E[O_12 | Λ] at N = 2, namely -E|u_2|^2 / |λ_1 - λ_2|^2
/// with E|u_2|^2 = (1 + |λ_1|^2)(1 + |λ_2|^2)/N (spherical),
/// (1 - |λ_1|^2)(1 - |λ_2|^2)/M (TUE) or 1/N (Ginibre). With use_printed the
/// leading term is -1/(N|λ_1 - λ_2|^2) (resp. M) for every ensemble; that
/// variant drops the weight of the first column and is kept only to report
/// its discrepancy against Monte Carlo.
Complex quenched_ov12(const Spectrum& lambda, const EnsembleSpec& spec, bool use_printed = false);

/// E[(1/N) tr G G* | Λ].
///
/// For TUE the default is the closed form obtained from the recursion
///   v_{n+1} = v_n (1 - (1 - r)/M) + r + (n/M)(1 - r),   r = |λ_{n+1}|^2,
/// namely (M/N) prod (1 - (1 - |λ_i|^2)/M) - M/N + 1. With use_printed_tue the
/// alternative prod (1 + (1 - |λ_i|^2)/M) - (1 + N/M) is returned instead; it
/// is kept only to report the discrepancy against Monte Carlo.
double quenched_trace(const Spectrum& lambda, const EnsembleSpec& spec, bool use_printed_tue = false);

/// CDF of 1/γ_2 where γ_2 has density t e^{-t}: (1 + 1/x) e^{-1/x}.
double inv_gamma2_cdf(double x);

/// Median of 1/γ_2.
double inv_gamma2_median();

struct RadiusBand {
    double inner = 0.0;  ///< inclusive lower bound on |z|
    double outer = 0.0;  ///< exclusive upper bound on |z|

    [[nodiscard]] bool contains(Complex z) const noexcept {
        const double r = std::abs(z);
        return r >= inner && r < outer;
    }
};

struct BandMedian {
    RadiusBand band;
    double median = 0.0;
    std::size_t count = 0;
};

/// For each spectrum and each eigenvalue in a band, evaluates quenched_ov11
/// with that eigenvalue first; returns the per-band medians. Throws
/// EmptyInput if a band receives no eigenvalue.
std::vector<BandMedian> quenched_invariance_probe(const std::vector<Spectrum>& spectra, const EnsembleSpec& spec,
                                                  const std::vector<RadiusBand>& bands);

/// Exact rational with int64 parts, reduced.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational of(std::int64_t n, std::int64_t d);
    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend Rational operator*(Rational a, Rational b);
    friend Rational operator/(Rational a, Rational b);
    friend bool operator==(const Rational&, const Rational&) = default;
    [[nodiscard]] double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

/// E of the k-th origin factor, from E X_N = 1/N, E Y_M = 1/M and
/// E[1/Beta(a, b)] = (a + b - 1)/(a - 1). Equals k/(k - 1) for every ensemble.
Rational origin_factor_mean(const EnsembleSpec& spec, std::size_t k);

} // namespace overlap_lab
