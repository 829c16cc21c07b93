#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "overlap_lab/linalg.hpp"
#include "overlap_lab/rng.hpp"

namespace overlap_lab {

enum class EnsembleKind { ginibre, spherical, truncated_unitary };

/// Ginibre(n) | Spherical(n) | TruncatedUnitary(n, m) with m >= n.
class EnsembleSpec {
public:
    static EnsembleSpec ginibre(std::size_t n);
    static EnsembleSpec spherical(std::size_t n);
    static EnsembleSpec truncated_unitary(std::size_t n, std::size_t m);

    [[nodiscard]] EnsembleKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    /// Truncation co-dimension; 0 for the other ensembles.
    [[nodiscard]] std::size_t m() const noexcept { return m_; }
    /// "cge", "sph" or "tue".
    [[nodiscard]] std::string tag() const;
    /// e.g. "Sph(8)" or "TUE(8,16)".
    [[nodiscard]] std::string label() const;

    friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;

private:
    EnsembleSpec(EnsembleKind kind, std::size_t n, std::size_t m) : kind_(kind), n_(n), m_(m) {}
    EnsembleKind kind_;
    std::size_t n_;
    std::size_t m_;
};

/// i.i.d. complex Gaussian entries with E|g|^2 = 1/n.
ComplexMatrix sample_ginibre(std::size_t n, RngStream& rng);
/// Haar unitary via QR of a Ginibre draw with the phases of diag(R) absorbed.
ComplexMatrix sample_haar_unitary(std::size_t n, RngStream& rng);
/// Top-left n x n block of a Haar unitary of size n + m.
ComplexMatrix sample_tue(std::size_t n, std::size_t m, RngStream& rng);
/// G1 G2^{-1} for independent Ginibre G1, G2.
ComplexMatrix sample_spherical(std::size_t n, RngStream& rng);

ComplexMatrix sample_matrix(const EnsembleSpec& spec, RngStream& rng);

/// Independent squared radii gamma_V(k), k = 1..n (or 2..n when conditioned on
/// an eigenvalue at the origin). Ginibre radii are Gamma(k)/n.
std::vector<double> kostlan_radii(const EnsembleSpec& spec, bool conditioned_at_origin, RngStream& rng);

struct SpherePoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Inverse stereographic map C -> S^2; the unit circle goes to the equator.
SpherePoint stereo_project(Complex lambda) noexcept;
/// Stereographic map S^2 -> C. Throws PoleSingularity near the north pole.
Complex stereo_unproject(const SpherePoint& w);

double chordal_distance_squared(const SpherePoint& a, const SpherePoint& b) noexcept;

} // namespace overlap_lab
