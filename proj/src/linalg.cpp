#include "overlap_lab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "overlap_lab/errors.hpp"

namespace overlap_lab {

namespace {

double abs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

Complex phase_of(Complex z) {
    const double r = std::abs(z);
    return r == 0.0 ? Complex{1.0, 0.0} : z / r;
}

void require_square(const ComplexMatrix& a, const char* what) {
    if (!a.is_square()) {
        throw DimensionMismatch(std::string(what) + ": matrix must be square, got " + std::to_string(a.rows()) +
                                "x" + std::to_string(a.cols()));
    }
}

// Unitary 2x2 rotation G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0].
struct Givens {
    double c = 1.0;
    Complex s{0.0, 0.0};

    static Givens zeroing(Complex a, Complex b) {
        Givens g;
        const double nb = std::abs(b);
        if (nb == 0.0) return g;
        const double na = std::abs(a);
        if (na == 0.0) {
            g.c = 0.0;
            g.s = std::conj(b) / nb;
            return g;
        }
        const double rho = std::hypot(na, nb);
        g.c = na / rho;
        g.s = (a / na) * std::conj(b) / rho;
        return g;
    }

    // Rows p, q of m, columns [c0, c1).
    void apply_left(ComplexMatrix& m, std::size_t p, std::size_t q, std::size_t c0, std::size_t c1) const {
        for (std::size_t j = c0; j < c1; ++j) {
            const Complex x = m(p, j);
            const Complex y = m(q, j);
            m(p, j) = c * x + s * y;
            m(q, j) = -std::conj(s) * x + c * y;
        }
    }

    // Right multiplication by G* on columns p, q, rows [r0, r1).
    void apply_right_adjoint(ComplexMatrix& m, std::size_t p, std::size_t q, std::size_t r0, std::size_t r1) const {
        for (std::size_t i = r0; i < r1; ++i) {
            const Complex x = m(i, p);
            const Complex y = m(i, q);
            m(i, p) = c * x + std::conj(s) * y;
            m(i, q) = -s * x + c * y;
        }
    }
};

// Householder vector v (unit norm) with (I - 2 v v*) x = alpha e_1.
// Returns false when x is already zero below its first entry.
bool householder_vector(std::span<const Complex> x, std::vector<Complex>& v) {
    double tail = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) tail += std::norm(x[i]);
    if (tail == 0.0) return false;
    const double xnorm = std::sqrt(tail + std::norm(x[0]));
    const Complex alpha = -phase_of(x[0]) * xnorm;
    v.assign(x.begin(), x.end());
    v[0] -= alpha;
    double vnorm = 0.0;
    for (const auto& e : v) vnorm += std::norm(e);
    vnorm = std::sqrt(vnorm);
    for (auto& e : v) e /= vnorm;
    return true;
}

// m[r0.., c0..c1) <- (I - 2 v v*) m on rows r0 .. r0 + v.size().
void reflect_rows(ComplexMatrix& m, std::span<const Complex> v, std::size_t r0, std::size_t c0, std::size_t c1) {
    for (std::size_t j = c0; j < c1; ++j) {
        Complex dot{0.0, 0.0};
        for (std::size_t k = 0; k < v.size(); ++k) dot += std::conj(v[k]) * m(r0 + k, j);
        dot *= 2.0;
        for (std::size_t k = 0; k < v.size(); ++k) m(r0 + k, j) -= v[k] * dot;
    }
}

// m[r0..r1, c0..] <- m (I - 2 v v*) on columns c0 .. c0 + v.size().
void reflect_cols(ComplexMatrix& m, std::span<const Complex> v, std::size_t c0, std::size_t r0, std::size_t r1) {
    for (std::size_t i = r0; i < r1; ++i) {
        Complex dot{0.0, 0.0};
        for (std::size_t k = 0; k < v.size(); ++k) dot += m(i, c0 + k) * v[k];
        dot *= 2.0;
        for (std::size_t k = 0; k < v.size(); ++k) m(i, c0 + k) -= dot * std::conj(v[k]);
    }
}

// Eigenvalue of the trailing 2x2 block of h[iu-1..iu] closest to h(iu, iu).
Complex wilkinson_shift(const ComplexMatrix& h, std::size_t iu, std::size_t iter) {
    if (iter == 10 || iter == 20) {
        // exceptional shift
        double s = std::abs(h(iu, iu - 1).real());
        if (iu >= 2) s += std::abs(h(iu - 1, iu - 2).real());
        return {s, 0.0};
    }
    Complex t00 = h(iu - 1, iu - 1), t01 = h(iu - 1, iu);
    Complex t10 = h(iu, iu - 1), t11 = h(iu, iu);
    const double scale = abs1(t00) + abs1(t01) + abs1(t10) + abs1(t11);
    if (scale == 0.0) return {0.0, 0.0};
    t00 /= scale;
    t01 /= scale;
    t10 /= scale;
    t11 /= scale;
    const Complex b = t01 * t10;
    const Complex c = t00 - t11;
    const Complex disc = std::sqrt(c * c + 4.0 * b);
    const Complex det = t00 * t11 - b;
    const Complex trace = t00 + t11;
    Complex e1 = (trace + disc) / 2.0;
    Complex e2 = (trace - disc) / 2.0;
    if (abs1(e1) > abs1(e2)) {
        e2 = det / e1;
    } else if (e2 != Complex{0.0, 0.0}) {
        e1 = det / e2;
    }
    return scale * (abs1(e1 - t11) < abs1(e2 - t11) ? e1 : e2);
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionMismatch("ComplexMatrix: expected " + std::to_string(rows_ * cols_) + " entries, got " +
                                std::to_string(data_.size()));
    }
    if (!all_finite()) throw ParameterError("ComplexMatrix: non-finite entry");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionMismatch("ComplexMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    if (!all_finite()) throw ParameterError("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("ComplexMatrix::block out of range");
    ComplexMatrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
}

std::vector<Complex> ComplexMatrix::diagonal_values() const {
    const std::size_t n = std::min(rows_, cols_);
    std::vector<Complex> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = (*this)(i, i);
    return d;
}

double ComplexMatrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(),
                       [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix +: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix -: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) noexcept {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix *: inner dimensions differ");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> x) {
    if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector *: dimension mismatch");
    std::vector<Complex> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

double spectral_norm(const ComplexMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    const ComplexMatrix gram = a.adjoint() * a;
    const SchurForm s = schur(gram);
    double top = 0.0;
    for (const auto& ev : s.eigenvalues.values) top = std::max(top, ev.real());
    return std::sqrt(top);
}

double unitarity_residual(const ComplexMatrix& a) {
    return (a.adjoint() * a - ComplexMatrix::identity(a.cols())).frobenius_norm();
}

double Spectrum::min_gap() const {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j) gap = std::min(gap, std::abs(values[i] - values[j]));
    return gap;
}

QrResult qr(const ComplexMatrix& a) {
    require_square(a, "qr");
    if (!a.all_finite()) throw ParameterError("qr: non-finite input");
    const std::size_t n = a.rows();
    ComplexMatrix r = a;
    ComplexMatrix q = ComplexMatrix::identity(n);
    std::vector<Complex> x;
    std::vector<Complex> v;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        x.resize(n - k);
        for (std::size_t i = k; i < n; ++i) x[i - k] = r(i, k);
        if (!householder_vector(x, v)) continue;
        reflect_rows(r, v, k, k, n);
        reflect_cols(q, v, k, 0, n);
        for (std::size_t i = k + 1; i < n; ++i) r(i, k) = 0.0;
    }
    // Move the phases of diag(r) into q so that r_ii >= 0.
    for (std::size_t k = 0; k < n; ++k) {
        const Complex ph = phase_of(r(k, k));
        if (ph == Complex{1.0, 0.0}) continue;
        for (std::size_t j = k; j < n; ++j) r(k, j) *= std::conj(ph);
        for (std::size_t i = 0; i < n; ++i) q(i, k) *= ph;
        r(k, k) = std::abs(r(k, k));
    }
    return {std::move(q), std::move(r)};
}

SchurForm schur(const ComplexMatrix& a, double tol, std::size_t max_sweeps) {
    require_square(a, "schur");
    if (!a.all_finite()) throw ParameterError("schur: non-finite input");
    if (tol <= 0.0) tol = default_schur_tol;
    const std::size_t n = a.rows();
    if (max_sweeps == 0) max_sweeps = 30 * std::max<std::size_t>(n, 1);

    ComplexMatrix h = a;
    ComplexMatrix u = ComplexMatrix::identity(n);

    // Hessenberg reduction.
    std::vector<Complex> x;
    std::vector<Complex> v;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        x.resize(n - k - 1);
        for (std::size_t i = k + 1; i < n; ++i) x[i - k - 1] = h(i, k);
        if (!householder_vector(x, v)) continue;
        reflect_rows(h, v, k + 1, k, n);
        reflect_cols(h, v, k + 1, 0, n);
        reflect_cols(u, v, k + 1, 0, n);
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }

    const double abs_floor = tol * a.frobenius_norm();
    auto negligible = [&](std::size_t i) {
        // subdiagonal entry h(i + 1, i)
        const double sub = abs1(h(i + 1, i));
        return sub <= tol * (abs1(h(i, i)) + abs1(h(i + 1, i + 1))) || sub <= abs_floor;
    };

    std::size_t iu = n == 0 ? 0 : n - 1;
    std::size_t iter = 0;
    std::size_t total = 0;
    while (true) {
        while (iu > 0) {
            if (negligible(iu - 1)) {
                h(iu, iu - 1) = 0.0;
                --iu;
                iter = 0;
            } else {
                break;
            }
        }
        if (iu == 0) break;

        ++iter;
        if (++total > max_sweeps) {
            throw NonConvergence("schur: no deflation after " + std::to_string(max_sweeps) + " QR sweeps (n = " +
                                 std::to_string(n) + ")");
        }

        std::size_t il = iu - 1;
        while (il > 0 && !negligible(il - 1)) --il;
        if (il > 0) h(il, il - 1) = 0.0;

        const Complex shift = wilkinson_shift(h, iu, iter);
        Givens g = Givens::zeroing(h(il, il) - shift, h(il + 1, il));
        g.apply_left(h, il, il + 1, il, n);
        g.apply_right_adjoint(h, il, il + 1, 0, std::min(il + 2, iu) + 1);
        g.apply_right_adjoint(u, il, il + 1, 0, n);

        for (std::size_t i = il + 1; i < iu; ++i) {
            g = Givens::zeroing(h(i, i - 1), h(i + 1, i - 1));
            g.apply_left(h, i, i + 1, i - 1, n);
            h(i + 1, i - 1) = 0.0;
            g.apply_right_adjoint(h, i, i + 1, 0, std::min(i + 2, iu) + 1);
            g.apply_right_adjoint(u, i, i + 1, 0, n);
        }
    }

    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) h(i, j) = 0.0;

    Spectrum spectrum{h.diagonal_values()};
    return {std::move(u), std::move(h), std::move(spectrum)};
}

ComplexMatrix triangular_eigenvectors(const ComplexMatrix& t) {
    require_square(t, "triangular_eigenvectors");
    const std::size_t n = t.rows();
    const double gap_floor = 1e-12 * t.frobenius_norm();
    ComplexMatrix y(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex lambda = t(j, j);
        y(j, j) = 1.0;
        for (std::size_t ii = j; ii-- > 0;) {
            const Complex denom = t(ii, ii) - lambda;
            if (std::abs(denom) <= gap_floor) {
                throw DegenerateSpectrum("triangular_eigenvectors: eigenvalues " + std::to_string(ii) + " and " +
                                         std::to_string(j) + " coincide within tolerance");
            }
            Complex acc{0.0, 0.0};
            for (std::size_t k = ii + 1; k <= j; ++k) acc += t(ii, k) * y(k, j);
            y(ii, j) = -acc / denom;
        }
    }
    return y;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square(a, "solve");
    if (b.rows() != a.rows()) throw DimensionMismatch("solve: right-hand side has wrong row count");
    const std::size_t n = a.rows();
    double scale = 0.0;
    for (const auto& z : a.entries()) scale = std::max(scale, std::abs(z));
    const double pivot_floor = 1e-14 * scale;

    ComplexMatrix lu = a;
    ComplexMatrix x = b;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = std::abs(lu(i, k));
            if (m > best) {
                best = m;
                p = i;
            }
        }
        if (best <= pivot_floor || best == 0.0) {
            throw SingularMatrix("solve: pivot " + std::to_string(best) + " at column " + std::to_string(k));
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
            for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(p, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = lu(i, k) / lu(k, k);
            lu(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
        }
    }
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (std::size_t ii = n; ii-- > 0;) {
            Complex acc = x(ii, c);
            for (std::size_t j = ii + 1; j < n; ++j) acc -= lu(ii, j) * x(j, c);
            x(ii, c) = acc / lu(ii, ii);
        }
    }
    return x;
}

ComplexMatrix cholesky(const ComplexMatrix& h) {
    require_square(h, "cholesky");
    const std::size_t n = h.rows();
    const double pivot_floor = 1e-14 * h.frobenius_norm();
    ComplexMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = h(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > pivot_floor)) {
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(d) + " at column " + std::to_string(j));
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex acc = h(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
            l(i, j) = acc / ljj;
        }
    }
    return l;
}

} // namespace overlap_lab
