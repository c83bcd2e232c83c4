#include <gtest/gtest.h>

#include <random>

#include "mitbag/clifford.hpp"
#include "mitbag/eigensolvers.hpp"

using namespace mitbag;

namespace {

constexpr double kTol = 1e-13;

std::mt19937_64 rng(20240811);

Vec3 random_vec() {
    std::normal_distribution<double> g(0.0, 1.0);
    return {g(rng), g(rng), g(rng)};
}

UnitVector3 random_unit() { return UnitVector3::normalized(random_vec()); }

Spinor random_spinor() {
    std::normal_distribution<double> g(0.0, 1.0);
    Spinor s;
    for (int i = 0; i < 4; ++i) s[i] = cplx(g(rng), g(rng));
    return s;
}

// Gaussian triple + Gram-Schmidt with handedness correction: returns a frame
// (n, n', n'') with n' x n'' = n.
SurfaceFrame random_frame() {
    Vec3 a = random_vec(), b = random_vec();
    const double na = norm(a);
    for (auto& x : a) x /= na;
    const double ab = dot(a, b);
    for (int i = 0; i < 3; ++i) b[i] -= ab * a[i];
    const double nb = norm(b);
    for (auto& x : b) x /= nb;
    const Vec3 n = cross(a, b);
    return SurfaceFrame(UnitVector3(n), UnitVector3(a), UnitVector3(b));
}

double herm_defect(const SpinorMatrix& m) { return entrywise_distance(m, m.adjoint()); }

std::vector<double> eigenvalues4(const SpinorMatrix& m) {
    HermitianDense A(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) A.at(i, j) = m(i, j);
    return eig_hermitian(A, std::nullopt, 4, false).eigenvalues;
}

}  // namespace

TEST(CliffordAlgebra, GeneratorsAreHermitianUnitaryInvolutions) {
    const auto I = SpinorMatrix::identity();
    for (int k = 1; k <= 3; ++k) {
        EXPECT_LE(herm_defect(dirac_alpha(k)), kTol);
        EXPECT_LE(entrywise_distance(dirac_alpha(k) * dirac_alpha(k), I), kTol);
    }
    EXPECT_LE(herm_defect(dirac_beta()), kTol);
    EXPECT_LE(entrywise_distance(dirac_beta() * dirac_beta(), I), kTol);
    EXPECT_LE(herm_defect(dirac_gamma5()), kTol);
    EXPECT_LE(entrywise_distance(dirac_gamma5() * dirac_gamma5(), I), kTol);
}

TEST(CliffordAlgebra, AnticommutationTable) {
    const auto zero = SpinorMatrix::zero();
    const auto I = SpinorMatrix::identity();
    for (int j = 1; j <= 3; ++j) {
        for (int k = 1; k <= 3; ++k) {
            const auto anti = dirac_alpha(j) * dirac_alpha(k) + dirac_alpha(k) * dirac_alpha(j);
            EXPECT_LE(entrywise_distance(anti, j == k ? cplx(2.0) * I : zero), kTol);
        }
        EXPECT_LE((dirac_alpha(j) * dirac_beta() + dirac_beta() * dirac_alpha(j)).max_abs(), kTol);
        EXPECT_LE((dirac_gamma5() * dirac_alpha(j) - dirac_alpha(j) * dirac_gamma5()).max_abs(), kTol);
    }
    EXPECT_LE((dirac_gamma5() * dirac_beta() + dirac_beta() * dirac_gamma5()).max_abs(), kTol);
}

TEST(AlphaDot, BasisAndSquares) {
    EXPECT_LE(entrywise_distance(alpha_dot({1, 0, 0}), dirac_alpha(1)), kTol);
    const Vec3 x{1, 2, 2};
    const auto sq = alpha_dot(x) * alpha_dot(x);
    EXPECT_LE(entrywise_distance(sq, cplx(9.0) * SpinorMatrix::identity()), kTol);
    // alpha(e1) alpha(e2) = i gamma5 alpha(e3)
    const auto lhs = alpha_dot({1, 0, 0}) * alpha_dot({0, 1, 0});
    const auto rhs = cplx(0, 1) * (dirac_gamma5() * alpha_dot({0, 0, 1}));
    EXPECT_LE(entrywise_distance(lhs, rhs), kTol);
}

TEST(AlphaDot, ProductIdentityRandomized) {
    for (int t = 0; t < 1000; ++t) {
        const Vec3 x = random_vec(), y = random_vec();
        const auto lhs = alpha_dot(x) * alpha_dot(y);
        const auto rhs = cplx(dot(x, y)) * SpinorMatrix::identity() +
                         cplx(0, 1) * (dirac_gamma5() * alpha_dot(cross(x, y)));
        EXPECT_LE(entrywise_distance(lhs, rhs), kTol * std::max(1.0, norm(x) * norm(y)));
    }
}

TEST(BoundaryMatrix, AlgebraicContract) {
    const auto I = SpinorMatrix::identity();
    for (int t = 0; t < 50; ++t) {
        const auto n = random_unit();
        const auto B = boundary_matrix(n);
        EXPECT_LE(herm_defect(B), kTol);
        EXPECT_LE(entrywise_distance(B * B, I), kTol);
        EXPECT_LE(std::abs(B.trace()), kTol);
        const auto ev = eigenvalues4(B);
        EXPECT_NEAR(ev[0], -1.0, 1e-12);
        EXPECT_NEAR(ev[1], -1.0, 1e-12);
        EXPECT_NEAR(ev[2], 1.0, 1e-12);
        EXPECT_NEAR(ev[3], 1.0, 1e-12);
    }
    const auto z = UnitVector3(0.0, 0.0, 1.0);
    const auto expected = cplx(0, -1) * (dirac_beta() * dirac_alpha(3));
    EXPECT_LE(entrywise_distance(boundary_matrix(z), expected), kTol);
    const auto x = UnitVector3(1.0, 0.0, 0.0);
    EXPECT_LE(entrywise_distance(boundary_matrix(-x), cplx(-1.0) * boundary_matrix(x)), kTol);
    EXPECT_THROW(UnitVector3(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(Diagonalizer, ConjugatesBoundaryMatrixToBeta) {
    for (int t = 0; t < 100; ++t) {
        const auto n = random_unit();
        const auto P = diagonalizer(n);
        EXPECT_LE(entrywise_distance(P * P.adjoint(), SpinorMatrix::identity()), kTol);
        const auto conj = P.adjoint() * (boundary_matrix(n) * P);
        EXPECT_LE(entrywise_distance(conj, dirac_beta()), kTol);
    }
    const auto z = UnitVector3(0.0, 0.0, 1.0);
    const auto conj = diagonalizer(z).adjoint() * (boundary_matrix(z) * diagonalizer(z));
    EXPECT_LE(entrywise_distance(conj, dirac_beta()), kTol);
}

TEST(Diagonalizer, LeadingColumnsSpanPositiveEigenspace) {
    // span of the first two columns of P_n == ker(B - 1) == range((1+B)/2)
    const auto n = UnitVector3(1.0, 0.0, 0.0);
    const auto P = diagonalizer(n);
    SpinorMatrix col_proj;
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) col_proj(i, j) += P(i, c) * std::conj(P(j, c));
    EXPECT_LE(entrywise_distance(col_proj, projector_minus(n)), 1e-12);
}

TEST(Projectors, RankAndIdempotence) {
    const auto z = UnitVector3(0.0, 0.0, 1.0);
    const auto Pp = projector_plus(z);
    const auto Pm = projector_minus(z);
    EXPECT_LE(entrywise_distance(Pp * Pp, Pp), kTol);
    EXPECT_LE(herm_defect(Pp), kTol);
    EXPECT_NEAR(Pp.trace().real(), 2.0, kTol);
    EXPECT_LE(entrywise_distance(Pp + Pm, SpinorMatrix::identity()), kTol);
    const auto B = boundary_matrix(z);
    EXPECT_LE(entrywise_distance(Pp * B, B * Pp), kTol);
    // the printed formula (1 - B)/2 annihilates ker(B - 1): B Pp = -Pp
    EXPECT_LE(entrywise_distance(B * Pp, cplx(-1.0) * Pp), kTol);
    EXPECT_LE(entrywise_distance(B * Pm, Pm), kTol);
}

TEST(DiscreteSymmetries, InvolutionsAndOrthogonality) {
    Spinor e1;
    e1[0] = 1.0;
    const auto cc = discrete_symmetry(DiscreteSymmetry::C, discrete_symmetry(DiscreteSymmetry::C, e1));
    for (int i = 0; i < 4; ++i) EXPECT_LE(std::abs(cc[i] - e1[i]), kTol);
    for (int t = 0; t < 100; ++t) {
        const auto psi = random_spinor();
        EXPECT_LE(std::abs(inner(psi, discrete_symmetry(DiscreteSymmetry::T, psi))), 1e-12);
        const auto tt = discrete_symmetry(DiscreteSymmetry::T, discrete_symmetry(DiscreteSymmetry::T, psi));
        for (int i = 0; i < 4; ++i) EXPECT_LE(std::abs(tt[i] + psi[i]), 1e-12);
        const auto cc2 = discrete_symmetry(DiscreteSymmetry::C, discrete_symmetry(DiscreteSymmetry::C, psi));
        for (int i = 0; i < 4; ++i) EXPECT_LE(std::abs(cc2[i] - psi[i]), 1e-12);
    }
    Spinor e2;
    e2[1] = 1.0;
    const auto ct = discrete_symmetry(DiscreteSymmetry::CT, e2);
    const auto ref = (dirac_beta() * dirac_gamma5()) * e2;
    for (int i = 0; i < 4; ++i) EXPECT_LE(std::abs(ct[i] - ref[i]), kTol);
}

TEST(CurvatureCommutator, CanonicalFrame) {
    const SurfaceFrame f(UnitVector3(0.0, 0.0, 1.0), UnitVector3(1.0, 0.0, 0.0), UnitVector3(0.0, 1.0, 0.0));
    const auto m = curvature_commutator_core(f, 1.0, 1.0);
    const auto expected = cplx(0, -2) * (dirac_gamma5() * dirac_alpha(3));
    EXPECT_LE(entrywise_distance(m, expected), kTol);
    EXPECT_LE(curvature_commutator_core(f, 0.0, 0.0).max_abs(), kTol);
}

TEST(CurvatureCommutator, RandomFramesAndCurvatures) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const auto f = random_frame();
        const double lp = g(rng), lpp = g(rng);
        const auto m = curvature_commutator_core(f, lp, lpp);  // throws on defect
        const auto expected = cplx(0.0, -(lp + lpp)) * (dirac_gamma5() * alpha_dot(f.n.vec()));
        EXPECT_LE(entrywise_distance(m, expected), kTol * std::max(1.0, std::abs(lp) + std::abs(lpp)));
    }
    const auto f = random_frame();
    const auto m = curvature_commutator_core(f, 2.0, -1.0);
    const auto direct = cplx(0, -1) * (dirac_gamma5() * alpha_dot(f.n.vec()));
    EXPECT_LE(entrywise_distance(m, direct), kTol * 3.0);
}

TEST(CurvatureCommutator, RejectsBadFrames) {
    EXPECT_THROW(SurfaceFrame(UnitVector3(0.0, 0.0, 1.0), UnitVector3(1.0, 0.0, 0.0),
                              UnitVector3(0.0, -1.0, 0.0)),
                 std::invalid_argument);  // wrong handedness
    EXPECT_THROW(SurfaceFrame(UnitVector3(0.0, 0.0, 1.0), UnitVector3(0.0, 0.0, 1.0),
                              UnitVector3(0.0, 1.0, 0.0)),
                 std::invalid_argument);  // not orthogonal
}
