#include "overlap_lab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "overlap_lab/errors.hpp"

namespace overlap_lab {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
}

std::vector<double> sorted_finite(std::span<const double> xs, const char* what) {
    if (xs.empty()) throw EmptyInput(std::string(what) + ": empty sample");
    std::vector<double> v(xs.begin(), xs.end());
    for (const double x : v)
        if (!std::isfinite(x)) throw ParameterError(std::string(what) + ": non-finite sample");
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

double ks_coefficient(double alpha) {
    check_alpha(alpha);
    return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

KsVerdict ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf, double alpha) {
    check_alpha(alpha);
    const std::vector<double> x = sorted_finite(samples, "ks_one_sample");
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    KsVerdict v;
    v.statistic = d;
    v.n = x.size();
    v.alpha = alpha;
    v.critical = ks_coefficient(alpha) / std::sqrt(n);
    v.pass = d <= v.critical;
    return v;
}

KsVerdict ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha) {
    check_alpha(alpha);
    const std::vector<double> x = sorted_finite(a, "ks_two_sample");
    const std::vector<double> y = sorted_finite(b, "ks_two_sample");
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == t) ++i;
        while (j < y.size() && y[j] == t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    KsVerdict v;
    v.statistic = d;
    v.n = x.size();
    v.m = y.size();
    v.alpha = alpha;
    v.critical = ks_coefficient(alpha) * std::sqrt((n + m) / (n * m));
    v.pass = d <= v.critical;
    return v;
}

double ecdf(std::span<const double> sorted_samples, double x) {
    if (sorted_samples.empty()) throw EmptyInput("ecdf: empty sample");
    const auto it = std::upper_bound(sorted_samples.begin(), sorted_samples.end(), x);
    return static_cast<double>(it - sorted_samples.begin()) / static_cast<double>(sorted_samples.size());
}

double median(std::vector<double> values) {
    if (values.empty()) throw EmptyInput("median: empty sample");
    const auto mid = static_cast<std::ptrdiff_t>(values.size() / 2);
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double upper = values[static_cast<std::size_t>(mid)];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lower + upper);
}

void MomentAccumulator::push(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

void MomentAccumulator::merge(const MomentAccumulator& other) noexcept {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / n;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    count_ += other.count_;
}

double MomentAccumulator::variance() const noexcept {
    return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double MomentAccumulator::standard_error() const noexcept {
    if (count_ < 2) return 0.0;
    const double n = static_cast<double>(count_);
    return std::sqrt(m2_ / (n * (n - 1.0)));
}

MomentAccumulator merge_moments(MomentAccumulator a, const MomentAccumulator& b) noexcept {
    a.merge(b);
    return a;
}

} // namespace overlap_lab
