#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace overlap_lab {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    /// Takes ownership of row-major entries; throws if the size is wrong or
    /// any entry is not finite.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const Complex> values);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const Complex> entries() const noexcept { return data_; }
    [[nodiscard]] std::span<Complex> entries() noexcept { return data_; }
    [[nodiscard]] std::span<const Complex> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    [[nodiscard]] ComplexMatrix adjoint() const;
    [[nodiscard]] ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    [[nodiscard]] std::vector<Complex> diagonal_values() const;
    [[nodiscard]] double frobenius_norm() const noexcept;
    [[nodiscard]] bool all_finite() const noexcept;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex s) noexcept;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> x);

/// Largest singular value: sqrt of the top eigenvalue of a*a.
double spectral_norm(const ComplexMatrix& a);

/// ||a*a - I||_F.
double unitarity_residual(const ComplexMatrix& a);

/// Ordered eigenvalue list.
struct Spectrum {
    std::vector<Complex> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    const Complex& operator[](std::size_t i) const noexcept { return values[i]; }
    /// Smallest |λ_i - λ_j| over i != j; +inf for a single eigenvalue.
    [[nodiscard]] double min_gap() const;
};

/// a = u t u*, with t upper triangular.
struct SchurForm {
    ComplexMatrix u;
    ComplexMatrix t;
    Spectrum eigenvalues;
};

struct QrResult {
    ComplexMatrix q;
    ComplexMatrix r;
};

/// Householder QR of a square matrix; r has a real non-negative diagonal.
QrResult qr(const ComplexMatrix& a);

/// Relative deflation factor used when schur() is called with tol <= 0.
inline constexpr double default_schur_tol = 2.220446049250313e-16;

/// Complex Schur decomposition by Householder reduction to Hessenberg form
/// followed by Wilkinson-shifted single-shift QR with deflation.
///
/// A subdiagonal entry h is set to zero when
///   |h| <= tol * (|t_ii| + |t_{i+1,i+1}|)  or  |h| <= tol * ||a||_F.
/// Throws NonConvergence after max_sweeps QR steps (0 means 30 N).
SchurForm schur(const ComplexMatrix& a, double tol = default_schur_tol, std::size_t max_sweeps = 0);

/// Right eigenvectors of an upper triangular matrix, as columns normalized so
/// that y(j, j) = 1. Throws DegenerateSpectrum if two diagonal entries are
/// closer than 1e-12 ||t||_F.
ComplexMatrix triangular_eigenvectors(const ComplexMatrix& t);

/// Solves a x = b by partially pivoted LU. Throws SingularMatrix.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

/// Lower triangular A with A A* = h. Throws NotPositiveDefinite.
ComplexMatrix cholesky(const ComplexMatrix& h);

} // namespace overlap_lab
