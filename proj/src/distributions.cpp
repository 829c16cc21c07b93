#include "overlap_lab/distributions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "overlap_lab/errors.hpp"

namespace overlap_lab {

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad_parameter(const std::string& what) { throw ParameterError(what); }
} // namespace

void validate(const ScalarLaw& law) {
    std::visit(overloaded{
                   [](const law::XM& l) {
                       if (l.m < 1) bad_parameter("X_m requires m >= 1");
                   },
                   [](const law::YM& l) {
                       if (l.m < 2) bad_parameter("Y_m requires m >= 2");
                   },
                   [](const law::GammaVSpherical& l) {
                       if (l.alpha < 1 || l.alpha > l.n) bad_parameter("spherical gamma_V requires 1 <= alpha <= N");
                   },
                   [](const law::GammaVTue& l) {
                       if (l.alpha < 1 || l.m < 1) bad_parameter("TUE gamma_V requires alpha >= 1 and M >= 1");
                   },
                   [](const law::Beta& l) {
                       if (!(l.a > 0.0) || !(l.b > 0.0)) bad_parameter("Beta requires positive parameters");
                   },
                   [](const law::Gamma& l) {
                       if (!(l.shape > 0.0)) bad_parameter("Gamma requires positive shape");
                   },
                   [](const law::ComplexGaussian& l) {
                       if (!(l.variance > 0.0)) bad_parameter("complex Gaussian requires positive variance");
                   },
               },
               law);
}

double sample_gamma(double shape, RngStream& rng) {
    if (!(shape > 0.0)) bad_parameter("Gamma requires positive shape");
    if (shape < 1.0) {
        const double g = sample_gamma(shape + 1.0, rng);
        return g * std::pow(rng.uniform_open0(), 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_open0();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double sample_beta(double a, double b, RngStream& rng) {
    if (!(a > 0.0) || !(b > 0.0)) bad_parameter("Beta requires positive parameters");
    while (true) {
        const double ga = sample_gamma(a, rng);
        const double gb = sample_gamma(b, rng);
        const double s = ga + gb;
        if (ga > 0.0 && gb > 0.0 && std::isfinite(s)) return ga / s;
    }
}

Complex sample_complex_gaussian(double variance, RngStream& rng) {
    const double sd = std::sqrt(0.5 * variance);
    const double re = rng.normal();
    const double im = rng.normal();
    return {sd * re, sd * im};
}

double x_from_uniform(std::size_t m, double u) {
    return std::pow(u, -1.0 / static_cast<double>(m + 1)) - 1.0;
}

double y_from_uniform(std::size_t m, double u) {
    return 1.0 - std::pow(u, 1.0 / static_cast<double>(m - 1));
}

double sample_x(std::size_t m, RngStream& rng) {
    if (m < 1) bad_parameter("X_m requires m >= 1");
    return x_from_uniform(m, rng.uniform_open0());
}

double sample_y(std::size_t m, RngStream& rng) {
    if (m < 2) bad_parameter("Y_m requires m >= 2");
    return y_from_uniform(m, rng.uniform_open0());
}

double sample_gamma_v(const ScalarLaw& law, RngStream& rng) {
    validate(law);
    if (const auto* s = std::get_if<law::GammaVSpherical>(&law)) {
        const double b = sample_beta(static_cast<double>(s->n + 1 - s->alpha), static_cast<double>(s->alpha), rng);
        return 1.0 / b - 1.0;
    }
    if (const auto* t = std::get_if<law::GammaVTue>(&law)) {
        return sample_beta(static_cast<double>(t->alpha), static_cast<double>(t->m), rng);
    }
    bad_parameter("sample_gamma_v requires a GammaVSpherical or GammaVTue law");
}

double sample(const ScalarLaw& law, RngStream& rng) {
    validate(law);
    return std::visit(overloaded{
                          [&](const law::XM& l) { return sample_x(l.m, rng); },
                          [&](const law::YM& l) { return sample_y(l.m, rng); },
                          [&](const law::GammaVSpherical&) { return sample_gamma_v(law, rng); },
                          [&](const law::GammaVTue&) { return sample_gamma_v(law, rng); },
                          [&](const law::Beta& l) { return sample_beta(l.a, l.b, rng); },
                          [&](const law::Gamma& l) { return sample_gamma(l.shape, rng); },
                          [&](const law::ComplexGaussian& l) { return std::norm(sample_complex_gaussian(l.variance, rng)); },
                      },
                      law);
}

std::vector<Complex> sample_unit_direction(std::size_t n, RngStream& rng) {
    std::vector<Complex> z(n);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& e : z) {
            e = sample_complex_gaussian(1.0, rng);
            norm2 += std::norm(e);
        }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& e : z) e *= inv;
    return z;
}

std::vector<Complex> sample_v(std::size_t n, std::size_t p, RngStream& rng) {
    if (n < 1 || p <= n + 1) bad_parameter("V_p^(n) requires n >= 1 and p > n + 1");
    // |v|^2 ~ BetaPrime(n, p - n)
    const double b = sample_beta(static_cast<double>(n), static_cast<double>(p - n), rng);
    const double radius = std::sqrt(b / (1.0 - b));
    auto v = sample_unit_direction(n, rng);
    for (auto& e : v) e *= radius;
    return v;
}

std::vector<Complex> sample_w(std::size_t n, std::size_t p, RngStream& rng) {
    if (n < 1) bad_parameter("W_p^(n) requires n >= 1");
    // |w|^2 ~ Beta(n, p + 1)
    const double b = sample_beta(static_cast<double>(n), static_cast<double>(p + 1), rng);
    const double radius = std::sqrt(b);
    auto w = sample_unit_direction(n, rng);
    for (auto& e : w) e *= radius;
    return w;
}

double constant_c(std::size_t n, std::size_t p) {
    if (p <= n) bad_parameter("C_{n,p} requires p > n");
    const double dn = static_cast<double>(n);
    const double dp = static_cast<double>(p);
    return std::exp(dn * std::log(std::numbers::pi) + std::lgamma(dp - dn) - std::lgamma(dp));
}

double constant_d(std::size_t n, std::size_t p) {
    if (n < 1) bad_parameter("D_{n,p} requires n >= 1");
    const double dn = static_cast<double>(n);
    const double dp = static_cast<double>(p);
    return std::exp(dn * std::log(std::numbers::pi) + std::lgamma(dp + 1.0) - std::lgamma(dp + dn + 1.0));
}

} // namespace overlap_lab
