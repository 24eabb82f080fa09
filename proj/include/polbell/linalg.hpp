#pragma once

// Fixed-size complex matrices for the 2- and 4-dimensional spaces used
// throughout the library. Storage is row-major; sizes never change at runtime.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>

namespace polbell {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

template <std::size_t N>
struct SquareMatrix {
    std::array<cplx, N * N> data{};

    constexpr cplx& operator()(std::size_t r, std::size_t c) { return data[r * N + c]; }
    constexpr const cplx& operator()(std::size_t r, std::size_t c) const { return data[r * N + c]; }

    static constexpr std::size_t dim() { return N; }

    static SquareMatrix identity() {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static SquareMatrix zero() { return SquareMatrix{}; }

    /// Row-major initializer, e.g. `Matrix2::from({a, b, c, d})`.
    static SquareMatrix from(std::initializer_list<cplx> rows) {
        SquareMatrix m;
        std::size_t i = 0;
        for (const cplx& v : rows) {
            if (i == N * N) break;
            m.data[i++] = v;
        }
        return m;
    }

    SquareMatrix adjoint() const {
        SquareMatrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) m(r, c) = std::conj((*this)(c, r));
        return m;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    SquareMatrix& operator+=(const SquareMatrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) data[i] += o.data[i];
        return *this;
    }
    SquareMatrix& operator-=(const SquareMatrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) data[i] -= o.data[i];
        return *this;
    }
    SquareMatrix& operator*=(cplx s) {
        for (auto& v : data) v *= s;
        return *this;
    }

    friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
    friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
    friend SquareMatrix operator*(SquareMatrix a, cplx s) { return a *= s; }
    friend SquareMatrix operator*(cplx s, SquareMatrix a) { return a *= s; }

    friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t k = 0; k < N; ++k) {
                const cplx ark = a(r, k);
                for (std::size_t c = 0; c < N; ++c) m(r, c) += ark * b(k, c);
            }
        return m;
    }

    friend std::array<cplx, N> operator*(const SquareMatrix& a, const std::array<cplx, N>& v) {
        std::array<cplx, N> out{};
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) out[r] += a(r, c) * v[c];
        return out;
    }
};

using Matrix2 = SquareMatrix<2>;
using Matrix4 = SquareMatrix<4>;

/// Largest entrywise modulus of a - b.
template <std::size_t N>
double max_abs_diff(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < N * N; ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

template <std::size_t N>
bool is_unitary(const SquareMatrix<N>& u, double tol) {
    return max_abs_diff(u.adjoint() * u, SquareMatrix<N>::identity()) <= tol;
}

template <std::size_t N>
bool is_hermitian(const SquareMatrix<N>& m, double tol) {
    return max_abs_diff(m, m.adjoint()) <= tol;
}

/// (a ⊗ b) with a acting on the first (polarization) factor.
inline Matrix4 kron(const Matrix2& a, const Matrix2& b) {
    Matrix4 m;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t l = 0; l < 2; ++l) m(2 * i + j, 2 * k + l) = a(i, k) * b(j, l);
    return m;
}

namespace pauli {

inline Matrix2 sigma0() { return Matrix2::identity(); }
inline Matrix2 sigma1() { return Matrix2::from({0.0, 1.0, 1.0, 0.0}); }
inline Matrix2 sigma2() { return Matrix2::from({0.0, -kI, kI, 0.0}); }
inline Matrix2 sigma3() { return Matrix2::from({1.0, 0.0, 0.0, -1.0}); }

}  // namespace pauli

}  // namespace polbell
