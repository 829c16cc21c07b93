#pragma once

#include "overlap_lab/linalg.hpp"

namespace overlap_lab {

/// O_ij = (L_i L_j*)(R_j* R_i) for biorthogonal left/right eigenvectors,
/// indexed in the order of `spectrum`.
struct OverlapMatrix {
    ComplexMatrix entries;
    Spectrum spectrum;

    [[nodiscard]] std::size_t size() const noexcept { return spectrum.size(); }
    Complex operator()(std::size_t i, std::size_t j) const noexcept { return entries(i, j); }
};

/// Full overlap matrix of g via its Schur form. Throws DegenerateSpectrum if
/// two eigenvalues are closer than 1e-10 ||g||_F; NonConvergence propagates.
OverlapMatrix overlap_matrix(const ComplexMatrix& g);

struct OverlapPair {
    double o11 = 1.0;
    Complex o12{0.0, 0.0};
};

/// O_11 and O_12 of an upper triangular t from the left-eigenvector
/// recurrences b_{n+1} = B_n u_{n+1} / (λ_1 - λ_{n+1}) and
/// d_{n+1} = D_n u_{n+1} / (λ_2 - λ_{n+1}). For n = 1, o12 is 0.
OverlapPair overlap_pair_recurrence(const ComplexMatrix& t);

struct MixedTrace {
    double lhs = 0.0;  ///< tr(G G*)
    double rhs = 0.0;  ///< Re sum_ij λ_i conj(λ_j) O_ij
    double rhs_imag = 0.0;
};

MixedTrace mixed_trace(const ComplexMatrix& g, const OverlapMatrix& o);

} // namespace overlap_lab
