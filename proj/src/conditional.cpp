#include "overlap_lab/conditional.hpp"

#include <cmath>
#include <string>

#include "overlap_lab/distributions.hpp"
#include "overlap_lab/errors.hpp"

namespace overlap_lab {

namespace {

void check_spectrum(const Spectrum& lambda, const EnsembleSpec& spec) {
    if (lambda.size() != spec.n()) {
        throw DimensionMismatch("spectrum has " + std::to_string(lambda.size()) + " values, ensemble " + spec.label() +
                                " expects " + std::to_string(spec.n()));
    }
    if (spec.kind() == EnsembleKind::truncated_unitary) {
        for (const auto& l : lambda.values)
            if (!(std::norm(l) < 1.0)) throw ParameterError("TUE spectrum must lie inside the open unit disk");
    }
}

} // namespace

ConditionalSchurDraw conditional_schur(const Spectrum& lambda, const EnsembleSpec& spec, RngStream& rng) {
    check_spectrum(lambda, spec);
    if (lambda.size() > 1 && !(lambda.min_gap() > 0.0)) throw DegenerateSpectrum("conditional_schur: repeated eigenvalue");
    const std::size_t n_total = spec.n();
    ComplexMatrix t = ComplexMatrix::diagonal(lambda.values);

    const double sign = spec.kind() == EnsembleKind::truncated_unitary ? -1.0 : 1.0;

    for (std::size_t n = 2; n <= n_total; ++n) {
        const std::size_t dim = n - 1;  // length of u_n
        std::vector<Complex> u;
        if (spec.kind() == EnsembleKind::ginibre) {
            u.resize(dim);
            for (auto& e : u) e = sample_complex_gaussian(1.0 / static_cast<double>(n_total), rng);
        } else {
            // I +/- T_{dim} T_{dim}^*, with T_{dim} the leading dim x dim block.
            ComplexMatrix s2(dim, dim);
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = i; j < dim; ++j) {
                    Complex acc{0.0, 0.0};
                    for (std::size_t k = j; k < dim; ++k) acc += t(i, k) * std::conj(t(j, k));
                    s2(i, j) = sign * acc;
                    s2(j, i) = std::conj(s2(i, j));
                }
                s2(i, i) += 1.0;
            }
            const double scale = 1.0 + sign * std::norm(lambda[n - 1]);
            s2 *= Complex{scale, 0.0};
            ComplexMatrix a;
            try {
                a = cholesky(s2);
            } catch (const NotPositiveDefinite& e) {
                throw NotPositiveDefinite(std::string("conditional_schur: S^2 lost definiteness (internal): ") + e.what());
            }
            const std::vector<Complex> v = spec.kind() == EnsembleKind::spherical
                                               ? sample_v(dim, n_total + n, rng)
                                               : sample_w(dim, spec.m() - n, rng);
            // a is lower triangular
            u.assign(dim, Complex{0.0, 0.0});
            for (std::size_t i = 0; i < dim; ++i) {
                Complex acc{0.0, 0.0};
                for (std::size_t k = 0; k <= i; ++k) acc += a(i, k) * v[k];
                u[i] = acc;
            }
        }
        for (std::size_t i = 0; i < dim; ++i) t(i, n - 1) = u[i];
    }
    return {std::move(t), spec};
}

std::vector<double> ov11_weights(const Spectrum& lambda, const EnsembleSpec& spec) {
    check_spectrum(lambda, spec);
    const Complex l1 = lambda[0];
    const double r1 = std::norm(l1);
    std::vector<double> c;
    c.reserve(lambda.size());
    for (std::size_t k = 1; k < lambda.size(); ++k) {
        const double gap2 = std::norm(l1 - lambda[k]);
        if (!(std::sqrt(gap2) > 1e-14)) throw DegenerateSpectrum("ov11_weights: λ_1 coincides with λ_" + std::to_string(k + 1));
        const double rk = std::norm(lambda[k]);
        switch (spec.kind()) {
        case EnsembleKind::ginibre: c.push_back(1.0 / gap2); break;
        case EnsembleKind::spherical: c.push_back((1.0 + r1) * (1.0 + rk) / gap2); break;
        case EnsembleKind::truncated_unitary: c.push_back((1.0 - r1) * (1.0 - rk) / gap2); break;
        }
    }
    return c;
}

double decompose_ov11_sample(const Spectrum& lambda, const EnsembleSpec& spec, RngStream& rng) {
    const std::vector<double> c = ov11_weights(lambda, spec);
    const double n = static_cast<double>(spec.n());
    double prod = 1.0;
    for (const double ck : c) {
        double xi = 0.0;
        switch (spec.kind()) {
        case EnsembleKind::ginibre: xi = sample_gamma(1.0, rng) / n; break;
        case EnsembleKind::spherical: xi = sample_x(spec.n(), rng); break;
        case EnsembleKind::truncated_unitary: xi = sample_y(spec.m(), rng); break;
        }
        prod *= 1.0 + ck * xi;
    }
    return prod;
}

double origin_factor_sample(const EnsembleSpec& spec, std::size_t k, RngStream& rng) {
    const std::size_t n = spec.n();
    if (k < 2 || k > n) throw ParameterError("origin factor index must satisfy 2 <= k <= N");
    switch (spec.kind()) {
    case EnsembleKind::ginibre:
        return 1.0 + sample_gamma(1.0, rng) / sample_gamma(static_cast<double>(k), rng);
    case EnsembleKind::spherical: {
        const double x = sample_x(n, rng);
        const double b = sample_beta(static_cast<double>(k), static_cast<double>(n + 1 - k), rng);
        return 1.0 + x / b;
    }
    case EnsembleKind::truncated_unitary: {
        const double b = sample_beta(static_cast<double>(k), static_cast<double>(spec.m()), rng);
        const double y = sample_y(spec.m(), rng);
        return 1.0 + (1.0 / b - 1.0) * y;
    }
    }
    throw ParameterError("unknown ensemble");
}

double origin_limit_sample(const EnsembleSpec& spec, RngStream& rng) {
    const std::size_t n = spec.n();
    double log_prod = 0.0;
    for (std::size_t k = 2; k <= n; ++k) log_prod += std::log(origin_factor_sample(spec, k, rng));
    return std::exp(log_prod) / static_cast<double>(n);
}

} // namespace overlap_lab
