#include "overlap_lab/ensembles.hpp"

#include <cmath>

#include "overlap_lab/distributions.hpp"
#include "overlap_lab/errors.hpp"

namespace overlap_lab {

EnsembleSpec EnsembleSpec::ginibre(std::size_t n) {
    if (n < 1) throw ParameterError("Ginibre ensemble requires n >= 1");
    return {EnsembleKind::ginibre, n, 0};
}

EnsembleSpec EnsembleSpec::spherical(std::size_t n) {
    if (n < 1) throw ParameterError("spherical ensemble requires n >= 1");
    return {EnsembleKind::spherical, n, 0};
}

EnsembleSpec EnsembleSpec::truncated_unitary(std::size_t n, std::size_t m) {
    if (n < 1) throw ParameterError("truncated unitary ensemble requires n >= 1");
    if (m < n) throw ParameterError("truncated unitary ensemble requires m >= n");
    return {EnsembleKind::truncated_unitary, n, m};
}

std::string EnsembleSpec::tag() const {
    switch (kind_) {
    case EnsembleKind::ginibre: return "cge";
    case EnsembleKind::spherical: return "sph";
    case EnsembleKind::truncated_unitary: return "tue";
    }
    return "?";
}

std::string EnsembleSpec::label() const {
    switch (kind_) {
    case EnsembleKind::ginibre: return "CGE(" + std::to_string(n_) + ")";
    case EnsembleKind::spherical: return "Sph(" + std::to_string(n_) + ")";
    case EnsembleKind::truncated_unitary: return "TUE(" + std::to_string(n_) + "," + std::to_string(m_) + ")";
    }
    return "?";
}

ComplexMatrix sample_ginibre(std::size_t n, RngStream& rng) {
    if (n < 1) throw ParameterError("sample_ginibre requires n >= 1");
    ComplexMatrix g(n, n);
    const double variance = 1.0 / static_cast<double>(n);
    for (auto& e : g.entries()) e = sample_complex_gaussian(variance, rng);
    return g;
}

ComplexMatrix sample_haar_unitary(std::size_t n, RngStream& rng) {
    // qr() already returns R with a non-negative real diagonal.
    return qr(sample_ginibre(n, rng)).q;
}

ComplexMatrix sample_tue(std::size_t n, std::size_t m, RngStream& rng) {
    if (n < 1 || m < n) throw ParameterError("sample_tue requires m >= n >= 1");
    // The first n columns of a Haar unitary of size n + m are the thin-QR
    // factor of an (n + m) x n Gaussian matrix, so only those are built.
    const std::size_t rows = n + m;
    ComplexMatrix a(rows, n);
    for (auto& e : a.entries()) e = sample_complex_gaussian(1.0, rng);

    std::vector<std::vector<Complex>> reflectors(n);
    std::vector<Complex> diag(n);
    for (std::size_t k = 0; k < n; ++k) {
        double tail = 0.0;
        for (std::size_t i = k + 1; i < rows; ++i) tail += std::norm(a(i, k));
        const double xnorm = std::sqrt(tail + std::norm(a(k, k)));
        const double head = std::abs(a(k, k));
        const Complex ph = head == 0.0 ? Complex{1.0, 0.0} : a(k, k) / head;
        const Complex alpha = -ph * xnorm;
        auto& v = reflectors[k];
        v.resize(rows - k);
        for (std::size_t i = k; i < rows; ++i) v[i - k] = a(i, k);
        v[0] -= alpha;
        double vnorm = 0.0;
        for (const auto& e : v) vnorm += std::norm(e);
        vnorm = std::sqrt(vnorm);
        if (vnorm > 0.0)
            for (auto& e : v) e /= vnorm;
        for (std::size_t j = k; j < n; ++j) {
            Complex dot{0.0, 0.0};
            for (std::size_t i = k; i < rows; ++i) dot += std::conj(v[i - k]) * a(i, j);
            dot *= 2.0;
            for (std::size_t i = k; i < rows; ++i) a(i, j) -= v[i - k] * dot;
        }
        diag[k] = a(k, k);
    }

    // Q [I_n; 0], accumulated backwards.
    ComplexMatrix q(rows, n);
    for (std::size_t k = 0; k < n; ++k) q(k, k) = 1.0;
    for (std::size_t k = n; k-- > 0;) {
        const auto& v = reflectors[k];
        for (std::size_t j = 0; j < n; ++j) {
            Complex dot{0.0, 0.0};
            for (std::size_t i = k; i < rows; ++i) dot += std::conj(v[i - k]) * q(i, j);
            dot *= 2.0;
            for (std::size_t i = k; i < rows; ++i) q(i, j) -= v[i - k] * dot;
        }
    }

    ComplexMatrix g(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double r = std::abs(diag[j]);
        const Complex ph = r == 0.0 ? Complex{1.0, 0.0} : diag[j] / r;
        for (std::size_t i = 0; i < n; ++i) g(i, j) = q(i, j) * ph;
    }
    return g;
}

ComplexMatrix sample_spherical(std::size_t n, RngStream& rng) {
    constexpr int max_attempts = 4;
    for (int attempt = 0;; ++attempt) {
        const ComplexMatrix g1 = sample_ginibre(n, rng);
        const ComplexMatrix g2 = sample_ginibre(n, rng);
        try {
            // X G2 = G1  <=>  G2* X* = G1*
            return solve(g2.adjoint(), g1.adjoint()).adjoint();
        } catch (const SingularMatrix&) {
            if (attempt + 1 >= max_attempts) throw;
        }
    }
}

ComplexMatrix sample_matrix(const EnsembleSpec& spec, RngStream& rng) {
    switch (spec.kind()) {
    case EnsembleKind::ginibre: return sample_ginibre(spec.n(), rng);
    case EnsembleKind::spherical: return sample_spherical(spec.n(), rng);
    case EnsembleKind::truncated_unitary: return sample_tue(spec.n(), spec.m(), rng);
    }
    throw ParameterError("unknown ensemble");
}

std::vector<double> kostlan_radii(const EnsembleSpec& spec, bool conditioned_at_origin, RngStream& rng) {
    const std::size_t n = spec.n();
    std::vector<double> radii;
    radii.reserve(n);
    for (std::size_t k = conditioned_at_origin ? 2 : 1; k <= n; ++k) {
        switch (spec.kind()) {
        case EnsembleKind::ginibre:
            radii.push_back(sample_gamma(static_cast<double>(k), rng) / static_cast<double>(n));
            break;
        case EnsembleKind::spherical:
            radii.push_back(sample_gamma_v(law::GammaVSpherical{k, n}, rng));
            break;
        case EnsembleKind::truncated_unitary:
            radii.push_back(sample_gamma_v(law::GammaVTue{k, spec.m()}, rng));
            break;
        }
    }
    return radii;
}

SpherePoint stereo_project(Complex lambda) noexcept {
    const double r2 = std::norm(lambda);
    const double inv = 1.0 / (1.0 + r2);
    return {2.0 * lambda.real() * inv, 2.0 * lambda.imag() * inv, (r2 - 1.0) * inv};
}

Complex stereo_unproject(const SpherePoint& w) {
    if (!(w.z < 1.0 - 1e-12)) throw PoleSingularity("stereo_unproject: point at the north pole");
    return {w.x / (1.0 - w.z), w.y / (1.0 - w.z)};
}

double chordal_distance_squared(const SpherePoint& a, const SpherePoint& b) noexcept {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

} // namespace overlap_lab
