#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "overlap_lab/distributions.hpp"
#include "overlap_lab/errors.hpp"
#include "overlap_lab/parallel.hpp"

using namespace overlap_lab;

TEST_CASE("KS critical coefficient") {
    CHECK(ks_coefficient(0.001) == doctest::Approx(1.9495).epsilon(1e-4));
    CHECK(ks_coefficient(0.05) == doctest::Approx(1.3581).epsilon(1e-4));
}

TEST_CASE("one-sample KS") {
    const std::vector<double> one{0.5};
    CHECK(ks_one_sample(one, [](double x) { return x; }).statistic == doctest::Approx(0.5));

    RngStream rng(1, 0);
    std::vector<double> u(100000);
    for (auto& x : u) x = rng.uniform();
    const auto v = ks_one_sample(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
    CHECK(v.n == 100000);
    CHECK(v.m == 0);
    CHECK(v.critical == doctest::Approx(0.0062).epsilon(0.01));
    CHECK(v.statistic <= 0.0062);
    CHECK(v.pass);

    std::vector<double> e(10000);
    for (auto& x : e) x = -std::log(rng.uniform_open0());
    // gamma_2 CDF 1 - (1 + t)e^{-t}; the gap to the exponential peaks at 1/e.
    const auto bad = ks_one_sample(e, [](double t) { return 1.0 - (1.0 + t) * std::exp(-t); });
    CHECK(bad.statistic >= 0.2);
    CHECK_FALSE(bad.pass);

    CHECK_THROWS_AS(ks_one_sample(std::vector<double>{}, [](double x) { return x; }), EmptyInput);
}

TEST_CASE("two-sample KS") {
    const std::vector<double> a{0.1, 0.5, 0.5, 0.9, 2.0};
    CHECK(ks_two_sample(a, a).statistic == 0.0);
    // Ties across samples must not inflate the statistic.
    CHECK(ks_two_sample(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0}).statistic == 0.0);
    CHECK(ks_two_sample(std::vector<double>{0.0, 1.0}, std::vector<double>{2.0, 3.0}).statistic == 1.0);

    RngStream r1(2, 0);
    RngStream r2(2, 1);
    std::vector<double> x1(10000);
    std::vector<double> x2(10000);
    std::vector<double> y(10000);
    for (auto& v : x1) v = sample_x(10, r1);
    for (auto& v : x2) v = sample_x(10, r2);
    for (auto& v : y) v = sample_y(10, r2);
    const auto same = ks_two_sample(x1, x2);
    CHECK(same.pass);
    CHECK(same.critical == doctest::Approx(1.9495 * std::sqrt(2.0 / 10000.0)).epsilon(1e-3));
    CHECK_FALSE(ks_two_sample(x1, y).pass);

    CHECK_THROWS_AS(ks_two_sample(std::vector<double>{}, a), EmptyInput);
    CHECK_THROWS_AS(ks_two_sample(std::vector<double>{std::nan("")}, a), ParameterError);
}

TEST_CASE("ecdf and median") {
    const std::vector<double> s{1.0, 2.0, 2.0, 4.0};
    CHECK(ecdf(s, 0.5) == 0.0);
    CHECK(ecdf(s, 2.0) == 0.75);
    CHECK(ecdf(s, 10.0) == 1.0);
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
}

TEST_CASE("moment accumulator") {
    MomentAccumulator empty;
    MomentAccumulator a;
    a.push(3.0);
    const auto same = merge_moments(a, empty);
    CHECK(same.count() == 1);
    CHECK(same.mean() == 3.0);
    CHECK(merge_moments(empty, a).mean() == 3.0);

    MomentAccumulator b;
    b.push(7.0);
    const auto two = merge_moments(a, b);
    CHECK(two.mean() == 5.0);
    CHECK(two.m2() == 8.0);
    CHECK(two.variance() == 8.0);
    CHECK(two.standard_error() == doctest::Approx(2.0));
}

TEST_CASE("16-way merge equals sequential accumulation") {
    RngStream rng(3, 0);
    std::vector<double> data(160000);
    for (auto& x : data) x = 10.0 + sample_x(5, rng);
    MomentAccumulator sequential;
    for (double x : data) sequential.push(x);

    const auto parts = parallel_map<MomentAccumulator>(16, 4, [&](std::size_t p) {
        MomentAccumulator acc;
        for (std::size_t i = p * 10000; i < (p + 1) * 10000; ++i) acc.push(data[i]);
        return acc;
    });
    MomentAccumulator merged;
    for (const auto& p : parts) merged.merge(p);
    CHECK(merged.count() == sequential.count());
    CHECK(merged.mean() == doctest::Approx(sequential.mean()).epsilon(1e-12));
    CHECK(merged.m2() == doctest::Approx(sequential.m2()).epsilon(1e-12));
}

TEST_CASE("parallel_map is independent of the thread count") {
    auto f = [](std::size_t i) {
        RngStream rng(9, i);
        return rng.normal();
    };
    const auto one = parallel_map<double>(1000, 1, f);
    const auto many = parallel_map<double>(1000, 7, f);
    CHECK(one == many);
    CHECK(parallel_map<double>(0, 4, f).empty());
    CHECK_THROWS_AS(parallel_map<double>(300, 3,
                                         [](std::size_t i) -> double {
                                             if (i == 150) throw ParameterError("boom");
                                             return 0.0;
                                         }),
                    ParameterError);
}
