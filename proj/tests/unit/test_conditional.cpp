#include <cmath>

#include "helpers.hpp"
#include "overlap_lab/conditional.hpp"
#include "overlap_lab/errors.hpp"
#include "overlap_lab/formulas.hpp"
#include "overlap_lab/overlaps.hpp"

using namespace overlap_lab;
using testing::check_mean_within;

namespace {

Spectrum spectrum(std::initializer_list<Complex> values) { return Spectrum{std::vector<Complex>(values)}; }

} // namespace

TEST_CASE("conditional Schur draws keep the prescribed diagonal") {
    RngStream rng(1, 0);
    const auto lambda = spectrum({{0.1, 0.2}, {-0.5, 0.3}, {0.6, -0.4}, {-0.3, -0.7}});
    for (const auto& spec : {EnsembleSpec::ginibre(4), EnsembleSpec::spherical(4), EnsembleSpec::truncated_unitary(4, 6)}) {
        const auto draw = conditional_schur(lambda, spec, rng);
        CHECK(draw.ensemble == spec);
        CHECK(testing::upper_triangular_exact(draw.t));
        for (std::size_t i = 0; i < 4; ++i) CHECK(draw.t(i, i) == lambda[i]);
    }
}

TEST_CASE("conditional Schur first-column moments") {
    RngStream rng(2, 0);
    MomentAccumulator sph;
    MomentAccumulator tue;
    const auto sph_lambda = spectrum({0.0, 1.0});
    const auto tue_lambda = spectrum({0.0, 0.5});
    const auto sph_spec = EnsembleSpec::spherical(2);
    const auto tue_spec = EnsembleSpec::truncated_unitary(2, 4);
    for (int i = 0; i < 1000000; ++i) {
        sph.push(std::norm(conditional_schur(sph_lambda, sph_spec, rng).t(0, 1)));
        tue.push(std::norm(conditional_schur(tue_lambda, tue_spec, rng).t(0, 1)));
    }
    check_mean_within(sph, 1.0);
    check_mean_within(tue, 0.1875);
}

TEST_CASE("conditional TUE draws are contractions") {
    RngStream rng(3, 0);
    const auto lambda = spectrum({{0.1, 0.2}, {-0.5, 0.3}, {0.6, -0.4}, {-0.3, -0.7}, {0.5, 0.6}, {-0.85, -0.2}});
    const auto spec = EnsembleSpec::truncated_unitary(6, 6);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) worst = std::max(worst, spectral_norm(conditional_schur(lambda, spec, rng).t));
    CHECK(worst <= 1.0 + 1e-12);
}

TEST_CASE("conditional Schur preconditions") {
    RngStream rng(4, 0);
    CHECK_THROWS_AS(conditional_schur(spectrum({0.0, 1.0}), EnsembleSpec::spherical(3), rng), DimensionMismatch);
    CHECK_THROWS_AS(conditional_schur(spectrum({0.0, 1.0}), EnsembleSpec::truncated_unitary(2, 3), rng),
                    ParameterError);
    CHECK_THROWS_AS(conditional_schur(spectrum({0.5, 0.5}), EnsembleSpec::spherical(2), rng), DegenerateSpectrum);
}

TEST_CASE("quenched diagonal overlap matches conditional draws") {
    RngStream rng(5, 0);
    MomentAccumulator sph;
    MomentAccumulator tue;
    MomentAccumulator sph_dec;
    MomentAccumulator tue_dec;
    const auto sph_lambda = spectrum({0.0, 1.0});
    const auto tue_lambda = spectrum({0.0, 0.5});
    const auto sph_spec = EnsembleSpec::spherical(2);
    const auto tue_spec = EnsembleSpec::truncated_unitary(2, 4);
    for (int i = 0; i < 1000000; ++i) {
        sph.push(overlap_pair_recurrence(conditional_schur(sph_lambda, sph_spec, rng).t).o11);
        tue.push(overlap_pair_recurrence(conditional_schur(tue_lambda, tue_spec, rng).t).o11);
        sph_dec.push(decompose_ov11_sample(sph_lambda, sph_spec, rng));
        tue_dec.push(decompose_ov11_sample(tue_lambda, tue_spec, rng));
    }
    check_mean_within(sph, 2.0);
    check_mean_within(tue, 1.75);
    check_mean_within(sph_dec, 2.0);
    check_mean_within(tue_dec, 1.75);
}

TEST_CASE("decomposition weights") {
    const auto w = ov11_weights(spectrum({0.0, 1.0}), EnsembleSpec::spherical(2));
    REQUIRE(w.size() == 1);
    // (1 + 0)(1 + 1) / |0 - 1|^2
    CHECK(w[0] == doctest::Approx(2.0));
    CHECK(ov11_weights(spectrum({0.3}), EnsembleSpec::spherical(1)).empty());
}

TEST_CASE("single-eigenvalue cases") {
    RngStream rng(6, 0);
    CHECK(decompose_ov11_sample(spectrum({{0.2, 0.1}}), EnsembleSpec::spherical(1), rng) == 1.0);
    CHECK(decompose_ov11_sample(spectrum({{0.2, 0.1}}), EnsembleSpec::truncated_unitary(1, 3), rng) == 1.0);
    CHECK(origin_limit_sample(EnsembleSpec::spherical(1), rng) == 1.0);
    CHECK(origin_limit_sample(EnsembleSpec::truncated_unitary(1, 1), rng) == 1.0);
    const auto one = conditional_schur(spectrum({{0.2, 0.1}}), EnsembleSpec::ginibre(1), rng);
    CHECK(overlap_pair_recurrence(one.t).o11 == 1.0);
}

TEST_CASE("origin factors have mean k/(k-1)") {
    RngStream rng(7, 0);
    for (std::size_t k : {3, 5, 10}) {
        MomentAccumulator sph;
        MomentAccumulator tue;
        for (int i = 0; i < 200000; ++i) {
            sph.push(origin_factor_sample(EnsembleSpec::spherical(12), k, rng));
            tue.push(origin_factor_sample(EnsembleSpec::truncated_unitary(12, 20), k, rng));
        }
        const double target = static_cast<double>(k) / static_cast<double>(k - 1);
        check_mean_within(sph, target);
        check_mean_within(tue, target);
    }
    CHECK_THROWS_AS(origin_factor_sample(EnsembleSpec::spherical(4), 1, rng), ParameterError);
    CHECK_THROWS_AS(origin_factor_sample(EnsembleSpec::spherical(4), 5, rng), ParameterError);
}

TEST_CASE("origin limit law approaches inverse gamma_2") {
    RngStream rng(8, 0);
    std::vector<double> x(10000);
    for (auto& v : x) v = origin_limit_sample(EnsembleSpec::spherical(400), rng);
    CHECK(ks_one_sample(x, inv_gamma2_cdf).statistic <= 0.03);
}
