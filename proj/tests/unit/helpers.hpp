#pragma once

#include <cmath>
#include <vector>

#include <doctest.h>

#include "overlap_lab/linalg.hpp"
#include "overlap_lab/stats.hpp"

namespace testing {

using overlap_lab::Complex;
using overlap_lab::ComplexMatrix;

// |mean - target| <= k standard errors.
inline void check_mean_within(const overlap_lab::MomentAccumulator& acc, double target, double k = 4.0) {
    const double se = acc.standard_error();
    INFO("mean = " << acc.mean() << ", target = " << target << ", se = " << se);
    CHECK(std::abs(acc.mean() - target) <= k * se);
}

inline bool upper_triangular_exact(const ComplexMatrix& t) {
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (t(i, j) != Complex{0.0, 0.0}) return false;
    return true;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) d = std::max(d, std::abs(a.entries()[i] - b.entries()[i]));
    return d;
}

} // namespace testing
