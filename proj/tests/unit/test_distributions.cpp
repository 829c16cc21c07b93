#include <algorithm>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "overlap_lab/distributions.hpp"
#include "overlap_lab/errors.hpp"
#include "overlap_lab/rng.hpp"

using namespace overlap_lab;
using testing::check_mean_within;

TEST_CASE("philox known-answer vectors") {
    using Block = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    RngStream a(42, 3);
    RngStream b(42, 3);
    RngStream c(42, 4);
    RngStream d(43, 3);
    int same_c = 0;
    int same_d = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a();
        CHECK(x == b());
        same_c += x == c() ? 1 : 0;
        same_d += x == d() ? 1 : 0;
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);
    CHECK(a.seed() == 42);
    CHECK(a.stream_id() == 3);
    CHECK(a.block_counter() == 500);
}

TEST_CASE("uniform and normal draws") {
    RngStream rng(1, 0);
    MomentAccumulator u;
    MomentAccumulator z;
    for (int i = 0; i < 200000; ++i) {
        const double x = rng.uniform();
        CHECK_UNARY(x >= 0.0);
        CHECK_UNARY(x < 1.0);
        u.push(x);
        const double y = rng.uniform_open0();
        CHECK_UNARY(y > 0.0);
        CHECK_UNARY(y <= 1.0);
        z.push(rng.normal());
    }
    check_mean_within(u, 0.5);
    check_mean_within(z, 0.0);
    CHECK(z.variance() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("X_m inverse CDF") {
    CHECK(x_from_uniform(5, 1.0) == 0.0);
    CHECK(x_from_uniform(1, 0.25) == doctest::Approx(1.0).epsilon(1e-14));
    RngStream rng(2, 0);
    MomentAccumulator acc;
    for (int i = 0; i < 1000000; ++i) {
        const double x = sample_x(10, rng);
        REQUIRE(x >= 0.0);
        acc.push(x);
    }
    check_mean_within(acc, 0.1);
}

TEST_CASE("Y_m inverse CDF") {
    CHECK(y_from_uniform(7, 1.0) == 0.0);
    CHECK(y_from_uniform(2, 0.3) == doctest::Approx(0.7).epsilon(1e-14));
    RngStream rng(3, 0);
    MomentAccumulator acc;
    for (int i = 0; i < 1000000; ++i) {
        const double y = sample_y(10, rng);
        REQUIRE(y >= 0.0);
        REQUIRE(y < 1.0);
        acc.push(y);
    }
    check_mean_within(acc, 0.1);
}

TEST_CASE("inverse-CDF samplers pass one-sample KS") {
    RngStream rng(4, 0);
    std::vector<double> xs(100000);
    std::vector<double> ys(100000);
    for (auto& x : xs) x = sample_x(3, rng);
    for (auto& y : ys) y = sample_y(4, rng);
    CHECK(ks_one_sample(xs, [](double x) { return 1.0 - std::pow(1.0 + x, -4.0); }).pass);
    CHECK(ks_one_sample(ys, [](double y) { return 1.0 - std::pow(1.0 - y, 3.0); }).pass);
    // Y_2 is uniform.
    for (auto& y : ys) y = sample_y(2, rng);
    CHECK(ks_one_sample(ys, [](double y) { return y; }).pass);
}

TEST_CASE("scalar law validation") {
    CHECK_THROWS_AS(validate(law::XM{0}), ParameterError);
    CHECK_THROWS_AS(validate(law::YM{1}), ParameterError);
    CHECK_THROWS_AS(validate(law::GammaVSpherical{0, 3}), ParameterError);
    CHECK_THROWS_AS(validate(law::GammaVSpherical{4, 3}), ParameterError);
    CHECK_THROWS_AS(validate(law::GammaVTue{0, 3}), ParameterError);
    CHECK_THROWS_AS(validate(law::Beta{0.0, 1.0}), ParameterError);
    CHECK_NOTHROW(validate(law::GammaVTue{5, 1}));
    RngStream rng(5, 0);
    CHECK_THROWS_AS(sample_gamma_v(law::XM{3}, rng), ParameterError);
}

TEST_CASE("gamma_V moments") {
    RngStream rng(6, 0);
    MomentAccumulator sph;
    MomentAccumulator tue;
    for (int i = 0; i < 1000000; ++i) {
        const double g = sample_gamma_v(law::GammaVSpherical{4, 10}, rng);
        REQUIRE(g > 0.0);
        sph.push(1.0 / g);
        const double b = sample_gamma_v(law::GammaVTue{3, 5}, rng);
        REQUIRE(b > 0.0);
        REQUIRE(b < 1.0);
        tue.push(1.0 / b);
    }
    check_mean_within(sph, 7.0 / 3.0);
    check_mean_within(tue, 3.5);
}

TEST_CASE("gamma_V spherical with alpha = N = 1 is 1/u - 1") {
    RngStream rng(7, 0);
    std::vector<double> g(20000);
    for (auto& x : g) x = sample_gamma_v(law::GammaVSpherical{1, 1}, rng);
    // 1/u - 1 with u uniform has CDF x/(1+x).
    CHECK(ks_one_sample(g, [](double x) { return x / (1.0 + x); }).pass);
}

TEST_CASE("gamma and beta samplers") {
    RngStream rng(8, 0);
    for (const double shape : {0.3, 1.0, 4.5}) {
        MomentAccumulator acc;
        for (int i = 0; i < 200000; ++i) acc.push(sample_gamma(shape, rng));
        check_mean_within(acc, shape);
    }
    MomentAccumulator beta;
    for (int i = 0; i < 200000; ++i) beta.push(sample_beta(2.0, 5.0, rng));
    check_mean_within(beta, 2.0 / 7.0);
    MomentAccumulator cg;
    for (int i = 0; i < 200000; ++i) cg.push(std::norm(sample_complex_gaussian(0.25, rng)));
    check_mean_within(cg, 0.25);
}

TEST_CASE("V law") {
    RngStream rng(9, 0);
    // n = 1: |v|^2 ~ X_{p-2}
    std::vector<double> a(10000);
    std::vector<double> b(10000);
    for (auto& x : a) x = std::norm(sample_v(1, 8, rng)[0]);
    for (auto& x : b) x = sample_x(6, rng);
    CHECK(ks_two_sample(a, b).pass);

    MomentAccumulator acc;
    for (int i = 0; i < 200000; ++i) {
        const auto v = sample_v(2, 6, rng);
        acc.push(std::norm(v[0]) + std::norm(v[1]));
    }
    check_mean_within(acc, 2.0 / 3.0);
    CHECK_THROWS_AS(sample_v(3, 4, rng), ParameterError);
}

TEST_CASE("V law direction is rotation invariant") {
    RngStream rng(10, 0);
    // Fixed unitary: a rotation mixing the two coordinates.
    const double c = std::cos(0.7);
    const Complex s = std::polar(std::sin(0.7), 0.3);
    std::vector<double> plain(10000);
    std::vector<double> rotated(10000);
    for (auto& x : plain) x = std::norm(sample_v(2, 7, rng)[0]);
    for (auto& x : rotated) {
        const auto v = sample_v(2, 7, rng);
        x = std::norm(c * v[0] - std::conj(s) * v[1]);
    }
    CHECK(ks_two_sample(plain, rotated).pass);
}

TEST_CASE("W law") {
    RngStream rng(11, 0);
    std::vector<double> a(10000);
    std::vector<double> b(10000);
    for (auto& x : a) x = std::norm(sample_w(1, 6, rng)[0]);
    for (auto& x : b) x = sample_y(8, rng);
    CHECK(ks_two_sample(a, b).pass);

    MomentAccumulator acc;
    for (int i = 0; i < 200000; ++i) {
        const auto w = sample_w(2, 0, rng);
        const double r2 = std::norm(w[0]) + std::norm(w[1]);
        REQUIRE(r2 < 1.0);
        acc.push(r2);
    }
    check_mean_within(acc, 2.0 / 3.0);
}

TEST_CASE("unit directions have unit norm") {
    RngStream rng(12, 0);
    for (int i = 0; i < 100; ++i) {
        const auto d = sample_unit_direction(5, rng);
        double s = 0.0;
        for (const auto& e : d) s += std::norm(e);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("normalization constants") {
    const double pi = std::numbers::pi;
    CHECK(constant_c(1, 2) == doctest::Approx(pi).epsilon(1e-14));
    CHECK(constant_c(2, 4) == doctest::Approx(pi * pi / 6.0).epsilon(1e-14));
    CHECK(constant_d(1, 0) == doctest::Approx(pi).epsilon(1e-14));
    CHECK(constant_d(2, 1) == doctest::Approx(pi * pi / 6.0).epsilon(1e-14));
    CHECK(std::isfinite(constant_c(300, 301)));
    CHECK(std::isfinite(constant_d(300, 300)));
    CHECK_THROWS_AS(constant_c(2, 2), ParameterError);
    CHECK_THROWS_AS(constant_d(0, 1), ParameterError);
}

TEST_CASE("Monte Carlo integration oracles for the constants") {
    RngStream rng(13, 0);
    const int draws = 400000;
    // C_{1,3}: uniform angle, radius^2 t with density (1/2)(1+t)^{-3/2}.
    MomentAccumulator c13;
    for (int i = 0; i < draws; ++i) {
        const double u = rng.uniform_open0();
        const double t = 1.0 / (u * u) - 1.0;
        c13.push(2.0 * std::numbers::pi * std::pow(1.0 + t, -3.0 + 1.5));
    }
    CHECK(std::abs(c13.mean() - constant_c(1, 3)) <= 0.01 * constant_c(1, 3));

    // D_{2,1}: uniform points of [-1, 1]^4.
    MomentAccumulator d21;
    for (int i = 0; i < draws; ++i) {
        double r2 = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double x = 2.0 * rng.uniform() - 1.0;
            r2 += x * x;
        }
        d21.push(r2 < 1.0 ? 16.0 * (1.0 - r2) : 0.0);
    }
    CHECK(std::abs(d21.mean() - constant_d(2, 1)) <= 0.01 * constant_d(2, 1));
}

TEST_CASE("projection of V and W laws onto a fixed direction") {
    RngStream rng(14, 0);
    const std::size_t n = 3;
    ComplexMatrix b(n, n);
    for (auto& e : b.entries()) e = sample_complex_gaussian(1.0, rng);
    ComplexMatrix s = b * b.adjoint();
    for (std::size_t i = 0; i < n; ++i) s(i, i) += 0.5;
    std::vector<Complex> a(n);
    for (auto& e : a) e = sample_complex_gaussian(1.0, rng);
    const auto sa = s * std::span<const Complex>(a);
    double sa2 = 0.0;
    for (const auto& e : sa) sa2 += std::norm(e);

    auto project = [&](const std::vector<Complex>& v) {
        const auto u = s * std::span<const Complex>(v);
        Complex dot{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) dot += std::conj(a[k]) * u[k];
        return std::norm(dot);
    };

    std::vector<double> lhs(10000);
    std::vector<double> rhs(10000);
    for (auto& x : lhs) x = project(sample_v(n, 9, rng));
    for (auto& x : rhs) x = sa2 * sample_x(9 - 4, rng);
    CHECK(ks_two_sample(lhs, rhs).pass);

    for (auto& x : lhs) x = project(sample_w(n, 4, rng));
    for (auto& x : rhs) x = sa2 * sample_y(4 + 4, rng);
    CHECK(ks_two_sample(lhs, rhs).pass);
}

TEST_CASE("sample dispatch through ScalarLaw") {
    RngStream a(15, 0);
    RngStream b(15, 0);
    CHECK(sample(law::XM{4}, a) == sample_x(4, b));
    CHECK(sample(law::YM{4}, a) == sample_y(4, b));
}
