#include "overlap_lab/overlaps.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "overlap_lab/errors.hpp"

namespace overlap_lab {

OverlapMatrix overlap_matrix(const ComplexMatrix& g) {
    if (!g.is_square()) throw DimensionMismatch("overlap_matrix: matrix must be square");
    const std::size_t n = g.rows();
    SchurForm s = schur(g);
    const double gap = s.eigenvalues.min_gap();
    if (n > 1 && !(gap > 1e-10 * g.frobenius_norm())) {
        throw DegenerateSpectrum("overlap_matrix: eigenvalue gap " + std::to_string(gap) + " below threshold");
    }

    // P = U Y and P^{-1} = Y^{-1} U*, so P^{-1} P^{-*} = Y^{-1} Y^{-*} and
    // P* P = Y* Y: the unitary factor drops out.
    const ComplexMatrix y = triangular_eigenvectors(s.t);
    const ComplexMatrix y_inv = solve(y, ComplexMatrix::identity(n));

    ComplexMatrix o(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex left{0.0, 0.0};   // L_i L_j*
            Complex right{0.0, 0.0};  // R_j* R_i
            for (std::size_t k = 0; k < n; ++k) {
                left += y_inv(i, k) * std::conj(y_inv(j, k));
                right += std::conj(y(k, j)) * y(k, i);
            }
            o(i, j) = left * right;
        }
        o(i, i) = Complex{o(i, i).real(), 0.0};
    }
    return {std::move(o), std::move(s.eigenvalues)};
}

OverlapPair overlap_pair_recurrence(const ComplexMatrix& t) {
    if (!t.is_square() || t.rows() == 0) throw DimensionMismatch("overlap_pair_recurrence: matrix must be square");
    const std::size_t n = t.rows();
    if (n == 1) return {};

    const double floor = 1e-12 * t.frobenius_norm();
    const Complex l1 = t(0, 0);
    const Complex l2 = t(1, 1);
    for (std::size_t k = 1; k < n; ++k) {
        if (!(std::abs(l1 - t(k, k)) > floor)) {
            throw DegenerateSpectrum("overlap_pair_recurrence: λ_1 coincides with λ_" + std::to_string(k + 1));
        }
        if (k >= 2 && !(std::abs(l2 - t(k, k)) > floor)) {
            throw DegenerateSpectrum("overlap_pair_recurrence: λ_2 coincides with λ_" + std::to_string(k + 1));
        }
    }

    std::vector<Complex> b(n, Complex{0.0, 0.0});
    std::vector<Complex> d(n, Complex{0.0, 0.0});
    b[0] = 1.0;
    d[1] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        // column k above the diagonal is u_{k+1}
        Complex bu{0.0, 0.0};
        Complex du{0.0, 0.0};
        for (std::size_t i = 0; i < k; ++i) {
            bu += b[i] * t(i, k);
            du += d[i] * t(i, k);
        }
        b[k] = bu / (l1 - t(k, k));
        if (k >= 2) d[k] = du / (l2 - t(k, k));
    }

    OverlapPair out;
    out.o11 = 0.0;
    Complex cross{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        out.o11 += std::norm(b[i]);
        cross += b[i] * std::conj(d[i]);
    }
    out.o12 = -std::conj(b[1]) * cross;
    return out;
}

MixedTrace mixed_trace(const ComplexMatrix& g, const OverlapMatrix& o) {
    if (g.rows() != o.size()) throw DimensionMismatch("mixed_trace: overlap matrix does not match g");
    MixedTrace out;
    const double f = g.frobenius_norm();
    out.lhs = f * f;
    Complex acc{0.0, 0.0};
    const auto& lam = o.spectrum.values;
    for (std::size_t i = 0; i < lam.size(); ++i)
        for (std::size_t j = 0; j < lam.size(); ++j) acc += lam[i] * std::conj(lam[j]) * o(i, j);
    out.rhs = acc.real();
    out.rhs_imag = acc.imag();
    return out;
}

} // namespace overlap_lab
