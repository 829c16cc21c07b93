#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "overlap_lab/linalg.hpp"
#include "overlap_lab/rng.hpp"

namespace overlap_lab {

// Scalar laws. Parameters follow the conventions below:
//   X_m        density (m + 1) / (1 + x)^(m + 2) on x > 0, mean 1/m
//   Y_m        Beta(1, m - 1), mean 1/m
//   gamma_V    generalized gamma variable of the radial potential; for the
//              spherical ensemble of size N it is 1/Beta(N + 1 - alpha, alpha) - 1,
//              for the truncated unitary ensemble TUE(., M) it is Beta(alpha, M).
namespace law {
struct XM { std::size_t m; };
struct YM { std::size_t m; };
struct GammaVSpherical { std::size_t alpha; std::size_t n; };
struct GammaVTue { std::size_t alpha; std::size_t m; };
struct Beta { double a; double b; };
struct Gamma { double shape; };
struct ComplexGaussian { double variance; };
} // namespace law

using ScalarLaw = std::variant<law::XM, law::YM, law::GammaVSpherical, law::GammaVTue, law::Beta, law::Gamma,
                               law::ComplexGaussian>;

/// Throws ParameterError when the law's parameters are out of range.
void validate(const ScalarLaw& law);

/// Draws one real value (for ComplexGaussian: the squared modulus).
double sample(const ScalarLaw& law, RngStream& rng);

double sample_gamma(double shape, RngStream& rng);
double sample_beta(double a, double b, RngStream& rng);
Complex sample_complex_gaussian(double variance, RngStream& rng);

/// Inverse-CDF maps, exposed for deterministic checks.
double x_from_uniform(std::size_t m, double u);
double y_from_uniform(std::size_t m, double u);

double sample_x(std::size_t m, RngStream& rng);
double sample_y(std::size_t m, RngStream& rng);
double sample_gamma_v(const ScalarLaw& law, RngStream& rng);

/// Uniformly distributed point on the unit sphere of C^n.
std::vector<Complex> sample_unit_direction(std::size_t n, RngStream& rng);

/// Vector in C^n with density proportional to (1 + |v|^2)^(-p); requires p > n + 1.
std::vector<Complex> sample_v(std::size_t n, std::size_t p, RngStream& rng);

/// Vector in the unit ball of C^n with density proportional to (1 - |w|^2)^p.
std::vector<Complex> sample_w(std::size_t n, std::size_t p, RngStream& rng);

/// Integral of (1 + |z|^2)^(-p) over C^n: pi^n (p - n - 1)! / (p - 1)!.
double constant_c(std::size_t n, std::size_t p);

/// Integral of (1 - |z|^2)^p over the unit ball of C^n: pi^n p! / (p + n)!.
double constant_d(std::size_t n, std::size_t p);

} // namespace overlap_lab
