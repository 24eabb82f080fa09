#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "polbell/error.hpp"
#include "polbell/prep.hpp"
#include "polbell/state.hpp"

using namespace polbell;
using oracle::pi;

namespace {

void expect_stokes(const StokesVector& s, double a, double b, double c, double tol = 1e-12) {
    EXPECT_NEAR(s.s1, a, tol);
    EXPECT_NEAR(s.s2, b, tol);
    EXPECT_NEAR(s.s3, c, tol);
}

}  // namespace

TEST(GeneralState, BasisState) {
    const auto s = make_general_state({1, 0, 0, 0}, {0, 0, 0, 0});
    EXPECT_EQ(s[0], cplx(1.0));
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(s[i], cplx(0.0));
}

TEST(GeneralState, UniformModuliMatchProductFamily) {
    for (double d : {0.0, 0.3, 2.0, -1.1}) {
        const auto s = make_general_state({0.5, 0.5, 0.5, 0.5}, {0, d, 0, d});
        const auto t = target_product(d);
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s[i] - t[i]), 0.0, 1e-15);
    }
}

TEST(GeneralState, Normalizes) {
    const auto s = make_general_state({1, 1, 1, 1}, {0, 0, 0, 0});
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s[i] - 0.5), 0.0, 1e-15);
    EXPECT_TRUE(s.is_normalized());
}

TEST(GeneralState, ZeroModuliIsDegenerate) {
    try {
        make_general_state({0, 0, 0, 0}, {1, 2, 3, 4});
        FAIL() << "expected degenerate state";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::degenerate_state);
        EXPECT_STREQ(e.what(), "degenerate state");
    }
}

TEST(GeneralState, NegativeModulusRejected) {
    EXPECT_THROW(make_general_state({-1, 0, 0, 0}, {0, 0, 0, 0}), Error);
}

TEST(Density, BasisIsDiagonal) {
    const auto rho = density(PolPathState::basis(Pol::h, PathMode::x));
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(rho(r, c), cplx(r == 0 && c == 0 ? 1.0 : 0.0));
}

TEST(Density, UniformSuperpositionIsFlat) {
    const auto rho = density(target_product(0.0));
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(std::abs(rho(r, c) - 0.25), 0.0, 1e-15);
}

TEST(Density, RejectsUnnormalizedState) {
    const auto s = PolPathState::unnormalized({1.0, 1.0, 0.0, 0.0});
    EXPECT_THROW(density(s), Error);
}

TEST(Density, MatchesOuterProductOracle) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const auto s = oracle::random_state(rng);
        const auto want = oracle::outer(oracle::vec_of(s));
        EXPECT_LT(oracle::max_abs(oracle::to_eigen(density(s).matrix()) - want), 1e-14);
    }
}

TEST(DensityMatrix, FactoryValidates) {
    EXPECT_NO_THROW(DensityMatrix2::from_matrix(Matrix2::identity() * 0.5));
    EXPECT_THROW(DensityMatrix2::from_matrix(Matrix2::identity()), Error);
    EXPECT_THROW(DensityMatrix2::from_matrix(Matrix2::from({0.5, 1.0, 0.0, 0.5})), Error);
}

TEST(PartialTrace, BasisKeepPolarization) {
    const auto r = partial_trace(density(PolPathState::basis(Pol::h, PathMode::x)), Dof::polarization);
    EXPECT_EQ(r(0, 0), cplx(1.0));
    EXPECT_EQ(r(0, 1), cplx(0.0));
    EXPECT_EQ(r(1, 1), cplx(0.0));
}

TEST(PartialTrace, FullyEntangledPathIsMaximallyMixed) {
    const auto r = partial_trace(density(target_entangled(pi / 2)), Dof::path);
    EXPECT_NEAR(std::abs(r(0, 0) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r(1, 1) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r(0, 1)), 0.0, 1e-15);
}

TEST(PartialTrace, ProductStateFactors) {
    // (cos a |h> + e^{ib} sin a |v>) ⊗ (cos c |x> + e^{id} sin c |y>)
    const double a = 0.4, b = 1.3, c = 1.1, d = -0.7;
    const cplx p0 = std::cos(a), p1 = std::polar(std::sin(a), b);
    const cplx q0 = std::cos(c), q1 = std::polar(std::sin(c), d);
    const auto s = PolPathState::normalized({p0 * q0, p0 * q1, p1 * q0, p1 * q1});
    const auto rho = density(s);
    const auto ra = partial_trace(rho, Dof::polarization);
    const auto rb = partial_trace(rho, Dof::path);
    EXPECT_NEAR(std::abs(ra(0, 1) - p0 * std::conj(p1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(ra(0, 0) - std::norm(p0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(rb(0, 1) - q0 * std::conj(q1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(rb(1, 1) - std::norm(q1)), 0.0, 1e-15);
}

TEST(PartialTrace, MatchesTensorOracle) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 50; ++i) {
        const auto s = oracle::random_state(rng);
        const auto rho = oracle::outer(oracle::vec_of(s));
        const auto d = density(s);
        EXPECT_LT(oracle::max_abs(oracle::to_eigen(partial_trace(d, Dof::polarization).matrix()) -
                                  oracle::trace_out(rho, true)),
                  1e-14);
        EXPECT_LT(oracle::max_abs(oracle::to_eigen(partial_trace(d, Dof::path).matrix()) -
                                  oracle::trace_out(rho, false)),
                  1e-14);
    }
}

TEST(Stokes, Diagonal) {
    expect_stokes(stokes(DensityMatrix2::from_matrix(Matrix2::from({0.5, 0.5, 0.5, 0.5}))), 1, 0, 0);
}

TEST(Stokes, MaximallyMixed) { expect_stokes(stokes(DensityMatrix2::from_matrix(Matrix2::identity() * 0.5)), 0, 0, 0); }

TEST(Stokes, EntangledPathAtQuarterPi) {
    expect_stokes(reduced_stokes(target_entangled(pi / 4), Dof::path), std::sqrt(2.0) / 2, 0, 0, 1e-15);
}

TEST(Stokes, ConventionPinnedToOffDiagonal) {
    // rho_12 = (s1 - i s2) / 2 and rho = |r><r| for r = (1, i)/sqrt2 gives s2 = +1.
    const auto r = DensityMatrix2::from_matrix(Matrix2::from({0.5, cplx(0, -0.5), cplx(0, 0.5), 0.5}));
    expect_stokes(stokes(r), 0, 1, 0);
}

TEST(Stokes, MatchesPauliTraceOracle) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        const auto s = oracle::random_state(rng);
        const auto rho = oracle::outer(oracle::vec_of(s));
        for (Dof dof : {Dof::polarization, Dof::path}) {
            const auto want = oracle::bloch(oracle::trace_out(rho, dof == Dof::polarization));
            const auto got = reduced_stokes(s, dof);
            for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(got[k], want[k], 1e-14);
        }
    }
}

TEST(DegreeOfPolarization, Examples) {
    EXPECT_DOUBLE_EQ(degree_of_polarization({1, 0, 0}), 1.0);
    EXPECT_DOUBLE_EQ(degree_of_polarization({0, 0, 0}), 0.0);
    EXPECT_NEAR(degree_of_polarization(reduced_stokes(target_entangled(pi / 3), Dof::path)), 0.5, 1e-15);
}

TEST(Concurrence, ProductIsZero) {
    for (double d = 0; d < 2 * pi; d += 0.37) EXPECT_NEAR(concurrence(target_product(d)), 0.0, 1e-15);
}

TEST(Concurrence, FullEntanglement) { EXPECT_NEAR(concurrence(target_entangled(pi / 2)), 1.0, 1e-15); }

TEST(Concurrence, EntangledFamilyIsAbsSin) {
    for (double t = -3; t < 7; t += 0.29) EXPECT_NEAR(concurrence(target_entangled(t)), std::abs(std::sin(t)), 1e-15);
}

TEST(Concurrence, MatchesWoottersOracle) {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 100; ++i) {
        const auto s = oracle::random_state(rng);
        EXPECT_NEAR(concurrence(s), oracle::wootters(oracle::outer(oracle::vec_of(s))), 1e-7);
    }
}

TEST(Concurrence, MatchesLinearEntropyOracle) {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 100; ++i) {
        const auto s = oracle::random_state(rng);
        const auto ra = oracle::trace_out(oracle::outer(oracle::vec_of(s)), true);
        const double purity = (ra * ra).trace().real();
        EXPECT_NEAR(concurrence(s), std::sqrt(std::max(0.0, 2.0 * (1.0 - purity))), 1e-7);
    }
}

TEST(VectorizeInner, IdentityPair) { EXPECT_EQ(vectorize_inner(Matrix2::identity(), Matrix2::identity()), cplx(2.0)); }

TEST(VectorizeInner, PauliOrthogonal) {
    EXPECT_EQ(vectorize_inner(pauli::sigma1(), pauli::sigma2()), cplx(0.0));
    EXPECT_EQ(vectorize_inner(pauli::sigma2(), pauli::sigma3()), cplx(0.0));
}

TEST(VectorizeInner, RowMajorConcatenation) {
    const auto m = Matrix2::from({1.0, 2.0, 3.0, 4.0});
    const auto v = vectorize(m);
    EXPECT_EQ(v[1], cplx(2.0));
    EXPECT_EQ(v[2], cplx(3.0));
}

TEST(VectorizeInner, RandomMatchesTrace) {
    std::mt19937_64 rng(16);
    std::normal_distribution<double> g;
    for (int i = 0; i < 1000; ++i) {
        oracle::M2 a, b;
        for (int k = 0; k < 4; ++k) {
            a(k / 2, k % 2) = {g(rng), g(rng)};
            b(k / 2, k % 2) = {g(rng), g(rng)};
        }
        const cplx want = (a.adjoint() * b).trace();
        EXPECT_LT(std::abs(vectorize_inner(oracle::from_eigen(a), oracle::from_eigen(b)) - want), 1e-12);
    }
}

TEST(ApplyLocal, IdentityLeavesState) {
    std::mt19937_64 rng(17);
    const auto s = oracle::random_state(rng);
    const auto t = apply_local(Matrix2::identity(), Matrix2::identity(), s);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(s[i], t[i]);
}

TEST(ApplyLocal, BitFlipOnPolarization) {
    const auto t = apply_local(pauli::sigma1(), Matrix2::identity(), PolPathState::basis(Pol::h, PathMode::x));
    EXPECT_EQ(t.amp(Pol::v, PathMode::x), cplx(1.0));
    EXPECT_EQ(t.amp(Pol::h, PathMode::x), cplx(0.0));
}

TEST(ApplyLocal, MatchesKroneckerOracle) {
    std::mt19937_64 rng(18);
    for (int i = 0; i < 20; ++i) {
        const auto va = oracle::random_unitary(rng);
        const auto vb = oracle::random_unitary(rng);
        const auto s = oracle::random_state(rng);
        oracle::M4 k;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) k(r, c) = va(r / 2, c / 2) * vb(r % 2, c % 2);
        const Eigen::Vector4cd want = k * oracle::vec_of(s);
        const auto got = apply_local(oracle::from_eigen(va), oracle::from_eigen(vb), s);
        EXPECT_LT((oracle::vec_of(got) - want).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(ApplyLocal, RejectsNonUnitary) {
    try {
        apply_local(Matrix2::identity() * 2.0, Matrix2::identity(), PolPathState{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::not_unitary);
        EXPECT_STREQ(e.what(), "not unitary");
    }
}

TEST(ApplyLocal, ConcurrenceIsLocallyInvariant) {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 100; ++i) {
        const auto s = oracle::random_state(rng);
        const auto t = apply_local(oracle::from_eigen(oracle::random_unitary(rng)),
                                   oracle::from_eigen(oracle::random_unitary(rng)), s);
        EXPECT_NEAR(t.norm2(), 1.0, 1e-12);
        EXPECT_NEAR(concurrence(t), concurrence(s), 1e-12);
    }
}

// Properties over random pure states.

class RandomStates : public ::testing::Test {
protected:
    std::mt19937_64 rng{0xC0FFEE};
};

TEST_F(RandomStates, DensityTraceAndPurity) {
    for (int i = 0; i < 500; ++i) {
        const auto rho = density(oracle::random_state(rng));
        EXPECT_NEAR(std::abs(rho.matrix().trace() - 1.0), 0.0, 1e-12);
        EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
        EXPECT_TRUE(is_hermitian(rho.matrix(), 1e-12));
        EXPECT_GE(oracle::min_eigenvalue<4>(oracle::to_eigen(rho.matrix())), -1e-10);
    }
}

TEST_F(RandomStates, ReducedStatesValid) {
    for (int i = 0; i < 500; ++i) {
        const auto rho = density(oracle::random_state(rng));
        for (Dof dof : {Dof::polarization, Dof::path}) {
            const auto r = partial_trace(rho, dof);
            EXPECT_TRUE(is_hermitian(r.matrix(), 1e-12));
            EXPECT_NEAR(std::abs(r.matrix().trace() - 1.0), 0.0, 1e-12);
            EXPECT_GE(oracle::min_eigenvalue<2>(oracle::to_eigen(r.matrix())), -1e-10);
            EXPECT_LE(stokes(r).norm(), 1.0 + 1e-9);
        }
    }
}

TEST_F(RandomStates, EqualReducedModuli) {
    for (int i = 0; i < 500; ++i) {
        const auto s = oracle::random_state(rng);
        EXPECT_NEAR(reduced_stokes(s, Dof::polarization).norm(), reduced_stokes(s, Dof::path).norm(), 1e-9);
    }
}

TEST_F(RandomStates, StokesRoundTrip) {
    for (int i = 0; i < 500; ++i) {
        const auto r = partial_trace(density(oracle::random_state(rng)), Dof::path);
        EXPECT_LT(max_abs_diff(density_from_stokes(stokes(r)).matrix(), r.matrix()), 1e-12);
    }
}

TEST_F(RandomStates, ConcurrenceAndPolarizationDegreeComplement) {
    for (int i = 0; i < 500; ++i) {
        const auto s = oracle::random_state(rng);
        const double c = concurrence(s);
        const double p = degree_of_polarization(reduced_stokes(s, Dof::polarization));
        EXPECT_NEAR(c * c + p * p, 1.0, 1e-9);
        EXPECT_GE(c, 0.0);
        EXPECT_LE(c, 1.0 + 1e-12);
    }
}

TEST_F(RandomStates, GlobalPhaseInvariance) {
    std::uniform_real_distribution<double> u(0, 2 * pi);
    for (int i = 0; i < 500; ++i) {
        const auto s = oracle::random_state(rng);
        const auto t = s.with_global_phase(u(rng));
        EXPECT_LT(max_abs_diff(density(s).matrix(), density(t).matrix()), 1e-12);
        EXPECT_LT(reduced_stokes(s, Dof::polarization).max_abs_diff(reduced_stokes(t, Dof::polarization)), 1e-12);
        EXPECT_LT(reduced_stokes(s, Dof::path).max_abs_diff(reduced_stokes(t, Dof::path)), 1e-12);
        EXPECT_NEAR(concurrence(s), concurrence(t), 1e-12);
        EXPECT_NEAR(fidelity(s, t), 1.0, 1e-12);
    }
}

TEST(Linalg, KroneckerLayout) {
    const auto a = Matrix2::from({1.0, 2.0, 3.0, 4.0});
    const auto b = Matrix2::from({0.0, 5.0, 6.0, 7.0});
    const auto k = kron(a, b);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t p = 0; p < 2; ++p)
                for (std::size_t q = 0; q < 2; ++q) EXPECT_EQ(k(2 * i + j, 2 * p + q), a(i, p) * b(j, q));
}

TEST(Linalg, PauliAlgebra) {
    EXPECT_LT(max_abs_diff(pauli::sigma1() * pauli::sigma2(), pauli::sigma3() * kI), 1e-15);
    for (const auto& s : {pauli::sigma1(), pauli::sigma2(), pauli::sigma3()}) {
        EXPECT_TRUE(is_unitary(s, 1e-15));
        EXPECT_TRUE(is_hermitian(s, 1e-15));
    }
}
