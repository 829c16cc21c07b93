#include <cmath>

#include "helpers.hpp"
#include "overlap_lab/distributions.hpp"
#include "overlap_lab/ensembles.hpp"
#include "overlap_lab/errors.hpp"

using namespace overlap_lab;
using testing::check_mean_within;

TEST_CASE("ensemble spec construction") {
    CHECK(EnsembleSpec::spherical(8).label() == "Sph(8)");
    CHECK(EnsembleSpec::truncated_unitary(8, 16).label() == "TUE(8,16)");
    CHECK(EnsembleSpec::ginibre(3).tag() == "cge");
    CHECK(EnsembleSpec::ginibre(3).m() == 0);
    CHECK_THROWS_AS(EnsembleSpec::ginibre(0), ParameterError);
    CHECK_THROWS_AS(EnsembleSpec::truncated_unitary(4, 3), ParameterError);
}

TEST_CASE("Ginibre entry moments") {
    RngStream rng(1, 0);
    MomentAccumulator mod2;
    ComplexMomentAccumulator entry;
    for (int i = 0; i < 62500; ++i) {
        const auto g = sample_ginibre(4, rng);
        for (const auto& e : g.entries()) {
            mod2.push(std::norm(e));
            entry.push(e);
        }
    }
    check_mean_within(mod2, 0.25);
    check_mean_within(entry.real(), 0.0);
    check_mean_within(entry.imag(), 0.0);
}

TEST_CASE("Ginibre circular law at n = 500") {
    RngStream rng(2, 0);
    const auto s = schur(sample_ginibre(500, rng));
    std::size_t inside = 0;
    for (const auto& l : s.eigenvalues.values) inside += std::abs(l) <= 1.05 ? 1 : 0;
    CHECK(static_cast<double>(inside) >= 0.99 * 500.0);
}

TEST_CASE("Haar unitary") {
    RngStream rng(3, 0);
    for (int i = 0; i < 100; ++i) CHECK(unitarity_residual(sample_haar_unitary(64, rng)) <= 1e-12 * 8.0);

    MomentAccumulator u11;
    for (int i = 0; i < 100000; ++i) u11.push(std::norm(sample_haar_unitary(8, rng)(0, 0)));
    check_mean_within(u11, 1.0 / 8.0);

    ComplexMomentAccumulator phase;
    for (int i = 0; i < 100000; ++i) {
        const Complex u = sample_haar_unitary(1, rng)(0, 0);
        CHECK(std::abs(u) == doctest::Approx(1.0).epsilon(1e-14));
        phase.push(u);
    }
    check_mean_within(phase.real(), 0.0);
    check_mean_within(phase.imag(), 0.0);
}

TEST_CASE("truncated unitary draws are contractions") {
    RngStream rng(4, 0);
    for (int i = 0; i < 200; ++i) {
        const auto t = sample_tue(6, 3 + static_cast<std::size_t>(i % 5) + 3, rng);
        CHECK(spectral_norm(t) <= 1.0 + 1e-12);
        for (const auto& l : schur(t).eigenvalues.values) CHECK(std::abs(l) <= 1.0 + 1e-12);
    }
    std::vector<double> r2(100000);
    for (auto& x : r2) x = std::norm(sample_tue(1, 1, rng)(0, 0));
    CHECK(ks_one_sample(r2, [](double x) { return x; }).pass);
}

TEST_CASE("spherical ensemble radial law") {
    RngStream rng(5, 0);
    std::vector<double> r2(100000);
    for (auto& x : r2) x = std::norm(sample_spherical(1, rng)(0, 0));
    // BetaPrime(1, 1): CDF t / (1 + t).
    CHECK(ks_one_sample(r2, [](double t) { return t / (1.0 + t); }).pass);

    // Swapping G1 and G2 inverts the spectrum, so |λ| and 1/|λ| share a law.
    std::vector<double> a(20000);
    std::vector<double> b(20000);
    for (std::size_t i = 0; i < a.size(); i += 4) {
        const auto s = schur(sample_spherical(4, rng)).eigenvalues;
        for (std::size_t k = 0; k < 4; ++k) {
            a[i + k] = std::abs(s[k]);
            b[i + k] = 1.0 / std::abs(s[k]);
        }
    }
    CHECK(ks_two_sample(a, b).pass);
}

TEST_CASE("spherical ensemble: half the eigenvalues in the unit disk") {
    RngStream rng(6, 0);
    const auto s = schur(sample_spherical(500, rng)).eigenvalues;
    double inside = 0.0;
    for (const auto& l : s.values) inside += std::norm(l) < 1.0 ? 1.0 : 0.0;
    CHECK(std::abs(inside / 500.0 - 0.5) <= 0.03);
}

TEST_CASE("sample_matrix dispatches by ensemble") {
    RngStream a(7, 0);
    RngStream b(7, 0);
    CHECK(testing::max_abs_diff(sample_matrix(EnsembleSpec::spherical(5), a), sample_spherical(5, b)) == 0.0);
    CHECK(testing::max_abs_diff(sample_matrix(EnsembleSpec::truncated_unitary(5, 7), a), sample_tue(5, 7, b)) == 0.0);
    CHECK(testing::max_abs_diff(sample_matrix(EnsembleSpec::ginibre(5), a), sample_ginibre(5, b)) == 0.0);
}

TEST_CASE("Kostlan radii") {
    RngStream rng(8, 0);
    CHECK(kostlan_radii(EnsembleSpec::spherical(7), false, rng).size() == 7);
    CHECK(kostlan_radii(EnsembleSpec::spherical(7), true, rng).size() == 6);
    for (int i = 0; i < 1000; ++i) {
        for (double r : kostlan_radii(EnsembleSpec::truncated_unitary(6, 9), false, rng)) {
            CHECK_UNARY(r > 0.0);
            CHECK_UNARY(r < 1.0);
        }
    }
    // Sph(2), first radius: 1/Beta(2, 1) - 1 is distributed as X_1.
    std::vector<double> r(20000);
    for (auto& x : r) x = kostlan_radii(EnsembleSpec::spherical(2), false, rng)[0];
    CHECK(ks_one_sample(r, [](double t) { return 1.0 - std::pow(1.0 + t, -2.0); }).pass);
}

TEST_CASE("Kostlan sum statistic matches direct spectra") {
    RngStream rng(9, 0);
    const auto spec = EnsembleSpec::spherical(16);
    std::vector<double> direct(4000);
    std::vector<double> radii(4000);
    for (auto& x : direct) {
        x = 0.0;
        for (const auto& l : schur(sample_matrix(spec, rng)).eigenvalues.values) x += std::log1p(std::norm(l));
    }
    for (auto& x : radii) {
        x = 0.0;
        for (double r : kostlan_radii(spec, false, rng)) x += std::log1p(r);
    }
    CHECK(ks_two_sample(direct, radii).pass);
}

TEST_CASE("stereographic projection") {
    const SpherePoint o = stereo_project({0.0, 0.0});
    CHECK(o.x == 0.0);
    CHECK(o.y == 0.0);
    CHECK(o.z == -1.0);
    for (double phi : {0.0, 1.0, 2.5, -2.0}) CHECK(std::abs(stereo_project(std::polar(1.0, phi)).z) <= 1e-15);

    RngStream rng(10, 0);
    for (int i = 0; i < 1000; ++i) {
        const Complex l = sample_complex_gaussian(4.0, rng);
        const Complex m = sample_complex_gaussian(4.0, rng);
        const SpherePoint p = stereo_project(l);
        CHECK(std::abs(p.x * p.x + p.y * p.y + p.z * p.z - 1.0) <= 1e-14);
        CHECK(std::abs(stereo_unproject(p) - l) <= 1e-12 * (1.0 + std::norm(l)));
        // Chordal identity: |w - w'|^2 = 4 |l - m|^2 / ((1 + |l|^2)(1 + |m|^2)).
        const double expected = 4.0 * std::norm(l - m) / ((1.0 + std::norm(l)) * (1.0 + std::norm(m)));
        CHECK(std::abs(chordal_distance_squared(p, stereo_project(m)) - expected) <= 1e-12);
    }
    CHECK_THROWS_AS(stereo_unproject({0.0, 0.0, 1.0}), PoleSingularity);
}

TEST_CASE("spherical spectra are uniform on the sphere") {
    RngStream rng(11, 0);
    std::vector<double> z;
    for (int i = 0; i < 2000; ++i) {
        for (const auto& l : schur(sample_spherical(5, rng)).eigenvalues.values) z.push_back(stereo_project(l).z);
    }
    CHECK(ks_one_sample(z, [](double x) { return (x + 1.0) / 2.0; }).pass);
}
