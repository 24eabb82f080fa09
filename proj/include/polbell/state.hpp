#pragma once

/**
 * @file state.hpp
 * @brief Bipartite polarization x path states, density matrices, Stokes vectors.
 *
 * The global basis ordering is (hx, hy, vx, vy): index = 2 * pol + path with
 * pol in {h = 0, v = 1} and path in {x = 0, y = 1}. Polarization is the first
 * tensor factor everywhere.
 *
 * Stokes convention: for a 2x2 density matrix rho,
 *   s1 = 2 Re rho_12,  s2 = -2 Im rho_12,  s3 = rho_11 - rho_22,
 * i.e. s_i = Tr(rho sigma_i) with the standard Pauli matrices, so the
 * diagonal polarization (|h> + |v>)/sqrt2 has S = (1, 0, 0).
 */

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

#include "polbell/error.hpp"
#include "polbell/linalg.hpp"

namespace polbell {

inline constexpr double kNormTolerance = 1e-9;

enum class Pol : std::size_t { h = 0, v = 1 };
enum class PathMode : std::size_t { x = 0, y = 1 };

constexpr std::size_t basis_index(Pol p, PathMode m) {
    return 2 * static_cast<std::size_t>(p) + static_cast<std::size_t>(m);
}

using Amplitudes = std::array<cplx, 4>;

/// Pure state of the polarization x path field. Amplitudes may be
/// unnormalized only when produced by a lossy element (polarizer); every
/// factory that builds a physical state normalizes.
class PolPathState {
public:
    PolPathState() : amps_{1.0, 0.0, 0.0, 0.0} {}

    /// Normalizing factory. Throws degenerate_state on the zero vector.
    static PolPathState normalized(const Amplitudes& a) {
        double n2 = 0.0;
        for (const cplx& z : a) n2 += std::norm(z);
        if (!(n2 > 0.0)) throw Error(ErrorCode::degenerate_state, "degenerate state");
        const double inv = 1.0 / std::sqrt(n2);
        Amplitudes out{};
        for (std::size_t i = 0; i < 4; ++i) out[i] = a[i] * inv;
        return PolPathState(out);
    }

    /// Keeps the amplitudes as given (post-selected, possibly lossy field).
    static PolPathState unnormalized(const Amplitudes& a) { return PolPathState(a); }

    static PolPathState basis(Pol p, PathMode m) {
        Amplitudes a{};
        a[basis_index(p, m)] = 1.0;
        return PolPathState(a);
    }

    const Amplitudes& amplitudes() const { return amps_; }
    cplx amp(Pol p, PathMode m) const { return amps_[basis_index(p, m)]; }
    cplx operator[](std::size_t i) const { return amps_[i]; }

    double norm2() const {
        double n2 = 0.0;
        for (const cplx& z : amps_) n2 += std::norm(z);
        return n2;
    }

    bool is_normalized(double tol = kNormTolerance) const { return std::abs(norm2() - 1.0) <= tol; }

    PolPathState renormalized() const { return normalized(amps_); }

    PolPathState with_global_phase(double chi) const {
        Amplitudes out = amps_;
        const cplx ph = std::polar(1.0, chi);
        for (auto& z : out) z *= ph;
        return PolPathState(out);
    }

private:
    explicit PolPathState(const Amplitudes& a) : amps_(a) {}

    Amplitudes amps_;
};

/// Hermitian, unit-trace matrix of dimension 2 or 4.
template <std::size_t N>
class DensityMatrix {
    static_assert(N == 2 || N == 4, "DensityMatrix is defined for dimension 2 or 4");

public:
    /// Validating factory: Hermitian and unit trace within 1e-12.
    static DensityMatrix from_matrix(const SquareMatrix<N>& m, double tol = 1e-12) {
        if (!is_hermitian(m, tol))
            throw Error(ErrorCode::invalid_argument, "density matrix is not Hermitian");
        if (std::abs(m.trace() - 1.0) > tol)
            throw Error(ErrorCode::invalid_argument, "density matrix trace differs from 1");
        return DensityMatrix(m);
    }

    const SquareMatrix<N>& matrix() const { return m_; }
    cplx operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
    static constexpr std::size_t dim() { return N; }

    double purity() const { return (m_ * m_).trace().real(); }

private:
    template <std::size_t M>
    friend DensityMatrix<M> make_density_unchecked(const SquareMatrix<M>&);

    explicit DensityMatrix(const SquareMatrix<N>& m) : m_(m) {}

    SquareMatrix<N> m_;
};

// Library-internal: callers guarantee the invariants by construction.
template <std::size_t N>
DensityMatrix<N> make_density_unchecked(const SquareMatrix<N>& m) {
    return DensityMatrix<N>(m);
}

using DensityMatrix2 = DensityMatrix<2>;
using DensityMatrix4 = DensityMatrix<4>;

struct StokesVector {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;

    double norm() const { return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3); }
    double dot(const StokesVector& o) const { return s1 * o.s1 + s2 * o.s2 + s3 * o.s3; }

    StokesVector operator+(const StokesVector& o) const { return {s1 + o.s1, s2 + o.s2, s3 + o.s3}; }
    StokesVector operator-(const StokesVector& o) const { return {s1 - o.s1, s2 - o.s2, s3 - o.s3}; }
    StokesVector operator*(double c) const { return {s1 * c, s2 * c, s3 * c}; }

    double operator[](std::size_t i) const { return i == 0 ? s1 : (i == 1 ? s2 : s3); }

    double max_abs_diff(const StokesVector& o) const {
        return std::max({std::abs(s1 - o.s1), std::abs(s2 - o.s2), std::abs(s3 - o.s3)});
    }
};

enum class Dof { polarization, path };

/// State of Eq.-(2) form: amplitudes r_i e^{i phi_i} in (hx, hy, vx, vy) order,
/// renormalized to unit norm.
inline PolPathState make_general_state(std::span<const double, 4> r, std::span<const double, 4> phi) {
    Amplitudes a{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (r[i] < 0.0) throw Error(ErrorCode::invalid_argument, "amplitude moduli must be nonnegative");
        a[i] = std::polar(r[i], phi[i]);
    }
    return PolPathState::normalized(a);
}

inline PolPathState make_general_state(const std::array<double, 4>& r, const std::array<double, 4>& phi) {
    return make_general_state(std::span<const double, 4>(r), std::span<const double, 4>(phi));
}

/// |Phi><Phi| divided by <Phi|Phi>, so the trace is 1 to rounding.
inline DensityMatrix4 density(const PolPathState& state) {
    const double n2 = state.norm2();
    if (std::abs(n2 - 1.0) > kNormTolerance)
        throw Error(ErrorCode::invalid_argument, "density requires a normalized state");
    Matrix4 m;
    const auto& a = state.amplitudes();
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) m(r, c) = a[r] * std::conj(a[c]) / n2;
    return make_density_unchecked(m);
}

/// Reduced state of one DOF. keep = polarization returns rho_A = Tr_path,
/// keep = path returns rho_B = Tr_pol.
inline DensityMatrix2 partial_trace(const DensityMatrix4& rho, Dof keep) {
    Matrix2 out;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t k = 0; k < 2; ++k)
                out(a, b) += keep == Dof::polarization ? rho(2 * a + k, 2 * b + k) : rho(2 * k + a, 2 * k + b);
    return make_density_unchecked(out);
}

inline StokesVector stokes_of_matrix(const Matrix2& m) {
    const cplx off = m(0, 1);
    return {2.0 * off.real(), -2.0 * off.imag(), (m(0, 0) - m(1, 1)).real()};
}

inline StokesVector stokes(const DensityMatrix2& rho) { return stokes_of_matrix(rho.matrix()); }

/// Inverse of stokes(): 1/2 (sigma0 + S . sigma).
inline DensityMatrix2 density_from_stokes(const StokesVector& s) {
    Matrix2 m = pauli::sigma0() + s.s1 * pauli::sigma1() + s.s2 * pauli::sigma2() + s.s3 * pauli::sigma3();
    return make_density_unchecked(m * 0.5);
}

inline double degree_of_polarization(const StokesVector& s) { return s.norm(); }

/// Stokes vector of one DOF of a pure bipartite state.
inline StokesVector reduced_stokes(const PolPathState& state, Dof dof) {
    return stokes(partial_trace(density(state), dof));
}

/// Pure-state two-qubit concurrence 2|a_hx a_vy - a_hy a_vx|.
inline double concurrence(const PolPathState& state) {
    const double n2 = state.norm2();
    const auto& a = state.amplitudes();
    return 2.0 * std::abs(a[0] * a[3] - a[1] * a[2]) / n2;
}

/// Row-concatenation of a 2x2 matrix.
inline std::array<cplx, 4> vectorize(const Matrix2& m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }

/// vec(A)^* . vec(B), which equals Tr(A^dagger B).
inline cplx vectorize_inner(const Matrix2& a, const Matrix2& b) {
    const auto va = vectorize(a);
    const auto vb = vectorize(b);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < 4; ++i) acc += std::conj(va[i]) * vb[i];
    return acc;
}

/// (VA ⊗ VB)|Phi>: VA on polarization, VB on path.
inline PolPathState apply_local(const Matrix2& va, const Matrix2& vb, const PolPathState& state) {
    if (!is_unitary(va, kNormTolerance) || !is_unitary(vb, kNormTolerance))
        throw Error(ErrorCode::not_unitary, "not unitary");
    return PolPathState::unnormalized(kron(va, vb) * state.amplitudes());
}

}  // namespace polbell
