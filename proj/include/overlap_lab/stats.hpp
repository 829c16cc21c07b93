#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace overlap_lab {

/// Asymptotic Kolmogorov critical coefficient sqrt(-ln(alpha/2)/2).
double ks_coefficient(double alpha);

struct KsVerdict {
    double statistic = 0.0;
    std::size_t n = 0;
    std::size_t m = 0;  ///< 0 for a one-sample test
    double alpha = 0.001;
    double critical = 0.0;
    bool pass = false;
};

/// Throws EmptyInput on an empty sample and ParameterError on non-finite values.
KsVerdict ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf,
                        double alpha = 0.001);

KsVerdict ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha = 0.001);

/// Fraction of sorted_samples that are <= x.
double ecdf(std::span<const double> sorted_samples, double x);

/// Median of the values; the mean of the two central order statistics for
/// even sizes. Throws EmptyInput.
double median(std::vector<double> values);

/// Streaming mean and second central moment (Welford), mergeable (Chan).
class MomentAccumulator {
public:
    void push(double x) noexcept;
    void merge(const MomentAccumulator& other) noexcept;

    [[nodiscard]] std::size_t count() const noexcept { return count_; }
    [[nodiscard]] double mean() const noexcept { return mean_; }
    [[nodiscard]] double m2() const noexcept { return m2_; }
    /// Unbiased sample variance; 0 below two observations.
    [[nodiscard]] double variance() const noexcept;
    /// sqrt(M2 / (n (n - 1))).
    [[nodiscard]] double standard_error() const noexcept;

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

MomentAccumulator merge_moments(MomentAccumulator a, const MomentAccumulator& b) noexcept;

/// Componentwise moments of a complex observable.
class ComplexMomentAccumulator {
public:
    void push(std::complex<double> z) noexcept {
        re_.push(z.real());
        im_.push(z.imag());
    }
    void merge(const ComplexMomentAccumulator& other) noexcept {
        re_.merge(other.re_);
        im_.merge(other.im_);
    }
    [[nodiscard]] std::size_t count() const noexcept { return re_.count(); }
    [[nodiscard]] std::complex<double> mean() const noexcept { return {re_.mean(), im_.mean()}; }
    [[nodiscard]] const MomentAccumulator& real() const noexcept { return re_; }
    [[nodiscard]] const MomentAccumulator& imag() const noexcept { return im_; }

private:
    MomentAccumulator re_;
    MomentAccumulator im_;
};

} // namespace overlap_lab
