#pragma once

#include "overlap_lab/ensembles.hpp"
#include "overlap_lab/linalg.hpp"
#include "overlap_lab/rng.hpp"

namespace overlap_lab {

/// Upper triangular Schur factor drawn conditionally on its diagonal.
struct ConditionalSchurDraw {
    ComplexMatrix t;
    EnsembleSpec ensemble;
};

/// Builds T column by column: u_n = A_{n-1} v with A_{n-1} A_{n-1}* = S_{n-1}^2.
///   spherical  S^2 = (1 + |λ_n|^2)(I + T_{n-1} T_{n-1}^*),  v ~ V_{N+n}^{(n-1)}
///   TUE        S^2 = (1 - |λ_n|^2)(I - T_{n-1} T_{n-1}^*),  v ~ W_{M-n}^{(n-1)}
///   Ginibre    u_n has i.i.d. complex Gaussian entries of variance 1/N
/// The spectrum size must equal spec.n() and its entries must be pairwise
/// distinct (TUE: strictly inside the unit disk).
ConditionalSchurDraw conditional_schur(const Spectrum& lambda, const EnsembleSpec& spec, RngStream& rng);

/// The multiplicative weights c_k, k = 2..N, of the diagonal-overlap
/// decomposition O_11 = prod (1 + c_k xi_k).
std::vector<double> ov11_weights(const Spectrum& lambda, const EnsembleSpec& spec);

/// One draw of prod_{k>=2} (1 + c_k xi_k), xi_k i.i.d. X_N (spherical), Y_M
/// (TUE) or |Z|^2/N (Ginibre). The conditioned eigenvalue is lambda[0].
double decompose_ov11_sample(const Spectrum& lambda, const EnsembleSpec& spec, RngStream& rng);

/// O_11 / N conditioned on λ_1 = 0, from the independent-factor representation
/// with Kostlan radii. Ginibre uses 1 + Gamma(1)/Gamma(k).
double origin_limit_sample(const EnsembleSpec& spec, RngStream& rng);

/// One factor of the origin representation: spherical 1 + X_N / Beta(k, N+1-k),
/// TUE 1 + (1/Beta(k, M) - 1) Y_M.
double origin_factor_sample(const EnsembleSpec& spec, std::size_t k, RngStream& rng);

} // namespace overlap_lab
