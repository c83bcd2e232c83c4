#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mitbag/effective.hpp"

using namespace mitbag;

namespace {

SurfaceGrid sphere_grid(int n, int m_max = 8) {
    return SurfaceGrid::build(SurfaceOfRevolution::sphere(1.0), n, m_max);
}

}  // namespace

TEST(AssembleEffectiveForm, SphereHasNoPotentialAndIsSymmetric) {
    const auto grid = sphere_grid(96);
    const auto p = assemble_effective_form(grid, 0);
    for (std::size_t i = 0; i < p.potential.size(); ++i)
        EXPECT_LE(std::abs(p.potential[i]), 1e-12 * p.mass[i]);
    // band storage is symmetric by construction; hermiticity defect of the
    // densified block must vanish
    const int n = 2 * p.n_theta;
    double defect = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < std::min(n, i + 4); ++j)
            defect = std::max(defect, std::abs(p.stiffness.element(i, j) - p.stiffness.element(j, i)));
    EXPECT_LE(defect, 1e-12);
    EXPECT_THROW(assemble_effective_form(grid, 40), std::invalid_argument);  // Nyquist
}

TEST(AssembleEffectiveForm, SpheroidPotentialStrictlyNegative) {
    const auto grid = SurfaceGrid::build(SurfaceOfRevolution::spheroid(1.0, 2.0), 96, 4);
    const auto p = assemble_effective_form(grid, 0);
    for (std::size_t i = 0; i < p.potential.size(); ++i) EXPECT_LT(p.potential[i], 0.0);
}

TEST(EffectiveSpectrum, UnitSphereLadder) {
    const auto spec = effective_spectrum(sphere_grid(200), 6, 14);
    // ladder n^2 with multiplicity 4n under refinement
    ASSERT_GE(spec.levels.size(), 2u);
    EXPECT_NEAR(spec.levels[0].extrapolated, 1.0, 1e-4);
    EXPECT_EQ(spec.levels[0].multiplicity, 4);
    EXPECT_NEAR(spec.levels[1].extrapolated, 4.0, 5e-4);
    EXPECT_EQ(spec.levels[1].multiplicity, 8);
    for (const auto& lv : spec.levels) EXPECT_EQ(lv.multiplicity % 2, 0);
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
        EXPECT_NEAR(spec.eigenvalues[i], spec.extrapolated[i], 5e-3 * std::max(1.0, spec.extrapolated[i]));
}

TEST(EffectiveSpectrum, ScalesWithRadiusAndConverges) {
    const auto grid = SurfaceGrid::build(SurfaceOfRevolution::sphere(2.0), 160, 4);
    const auto spec = effective_spectrum(grid, 4, 6);
    EXPECT_NEAR(spec.extrapolated[0], 0.25, 2e-4);
    EXPECT_NEAR(spec.extrapolated[4], 1.0, 1e-3);

    const auto sphd = SurfaceGrid::build(SurfaceOfRevolution::spheroid(1.0, 1.5), 160, 4);
    const auto s1 = effective_spectrum(sphd, 4, 6);
    for (double v : s1.eigenvalues) EXPECT_GT(v, 0.0);
    // refinement stability: the two-resolution estimate brackets the value
    const auto sphd_f = SurfaceGrid::build(SurfaceOfRevolution::spheroid(1.0, 1.5), 320, 4);
    const auto s2 = effective_spectrum(sphd_f, 4, 6);
    for (int i = 0; i < 6; ++i)
        EXPECT_NEAR(s1.extrapolated[i], s2.extrapolated[i], 2e-4 * std::max(1.0, s2.extrapolated[i]));
    EXPECT_THROW(effective_spectrum(sphere_grid(64, 1), 1, 12), std::invalid_argument);  // mode budget
}

TEST(ConstrainedField, ReconstructionSatisfiesBoundaryConstraint) {
    const auto grid = sphere_grid(96);
    const auto p = assemble_effective_form(grid, 0);
    const auto eig = pencil_eigenpairs_dense(p, 3);
    for (int j = 0; j < 3; ++j) {
        for (int node = 0; node < grid.n_theta; node += 7) {
            const cplx xi0 = eig.eigenvectors[j][2 * node];
            const cplx xi1 = eig.eigenvectors[j][2 * node + 1];
            const auto psi = reconstruct_spinor(grid, node, xi0, xi1);
            const auto B = boundary_matrix(UnitVector3::normalized(grid.points[node].normal));
            const auto Bpsi = B * psi;
            for (int c = 0; c < 4; ++c) EXPECT_LE(std::abs(Bpsi[c] - psi[c]), 1e-10);
        }
    }
}

TEST(ConstrainedField, GaugeInvarianceOfRayleighQuotients) {
    const auto grid = sphere_grid(72);
    const auto p = assemble_effective_form(grid, 1);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    const int n = 2 * p.n_theta;
    std::vector<cplx> z(n);
    for (auto& v : z) v = cplx(g(rng), g(rng));
    auto rayleigh = [&](const std::vector<cplx>& x) {
        cplx num(0.0), den(0.0);
        for (int i = 0; i < n; ++i) {
            den += std::conj(x[i]) * x[i] * p.mass[i];
            num += std::conj(x[i]) * x[i] * p.potential[i];
            for (int d = 0; d <= p.stiffness.half_bandwidth(); ++d) {
                if (i + d >= n) continue;
                const double s = p.stiffness.at(d, i);
                if (d == 0)
                    num += std::conj(x[i]) * x[i] * s;
                else
                    num += (std::conj(x[i]) * x[i + d] + std::conj(x[i + d]) * x[i]) * s;
            }
        }
        return (num / den).real();
    };
    const double base = rayleigh(z);
    const cplx phase = std::polar(1.0, 0.7321);
    auto zp = z;
    for (auto& v : zp) v *= phase;
    EXPECT_NEAR(rayleigh(zp), base, 1e-12 * std::abs(base));
}

TEST(AzimuthalDecomposition, CrossModeLeakageVanishes) {
    // the quadratic form between fields of different azimuthal blocks must
    // vanish; phi-quadrature on a Nyquist-safe grid checks the assumption
    const auto grid = sphere_grid(48);
    const int n_phi = 64;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    auto field = [&](int m, int node, int jphi, const std::vector<double>& prof) {
        // psi = T(theta) (f, g) with per-component modes (m, m+1, m, m+1)
        const double th = grid.theta[node];
        const double phi = 2.0 * kPi * jphi / n_phi;
        const double nz = std::cos(th), nr = std::sin(th);
        const double f = prof[2 * node], gg = prof[2 * node + 1];
        const double inv = 1.0 / std::sqrt(2.0);
        std::array<cplx, 4> comp = {inv * f, inv * gg, cplx(0, inv) * (nz * f + nr * gg),
                                    cplx(0, inv) * (nr * f - nz * gg)};
        std::array<cplx, 4> out;
        for (int c = 0; c < 4; ++c) {
            const int mc = (c % 2 == 0) ? m : m + 1;
            out[c] = comp[c] * std::polar(1.0, mc * phi);
        }
        return out;
    };
    std::vector<double> prof_a(2 * grid.n_theta), prof_b(2 * grid.n_theta);
    for (auto& v : prof_a) v = g(rng);
    for (auto& v : prof_b) v = g(rng);
    const int ma = 1, mb = 3;
    cplx acc(0.0);
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < n_phi; ++j) {
            const auto A = field(ma, i, j, prof_a);
            const auto B = field(mb, i, j, prof_b);
            cplx dot(0.0);
            for (int c = 0; c < 4; ++c) dot += std::conj(A[c]) * B[c];
            acc += dot * grid.dGamma[i] / static_cast<double>(n_phi);
        }
    }
    EXPECT_LE(std::abs(acc), 1e-10);
}

TEST(FormLowerBound, SphereAndSpheroid) {
    EXPECT_GE(verify_form_lower_bound(sphere_grid(96), 60), -1e-8);
    const auto sphd = SurfaceGrid::build(SurfaceOfRevolution::spheroid(1.0, 2.0), 96, 4);
    EXPECT_GE(verify_form_lower_bound(sphd, 60), -1e-8);
}

TEST(Sandwich, SphereBracketsAndMonotonicity) {
    const auto grid = sphere_grid(160);
    const auto sw = sandwich_operators(grid, 100.0, 5.0, 5, 12);
    // effective indices 2n-1, 2n bound the n-th positive level; on the unit
    // sphere the expanded positive ladder is {1,1,2,2,2,2,...}
    const double positive_ladder[3] = {1.0, 1.0, 2.0};
    for (int n = 1; n <= 3; ++n) {
        EXPECT_LE(sw.lower[2 * n - 2], positive_ladder[n - 1]);
        EXPECT_GE(sw.upper[2 * n - 1], positive_ladder[n - 1]);
    }
    // C = 0 degenerates to the square root of the base spectrum
    const auto sw0 = sandwich_operators(grid, 100.0, 0.0, 5, 4);
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(sw0.lower[i], 1.0, 1e-4);
        EXPECT_NEAR(sw0.upper[i], 1.0, 1e-4);
    }
    // monotonicity in C
    const auto swA = sandwich_operators(grid, 100.0, 2.0, 5, 8);
    const auto swB = sandwich_operators(grid, 100.0, 5.0, 5, 8);
    for (int i = 0; i < 8; ++i) {
        EXPECT_LE(swB.lower[i], swA.lower[i] + 1e-12);
        EXPECT_GE(swB.upper[i], swA.upper[i] - 1e-12);
    }
    // lower entries clamp at zero once the inner operator dips negative
    const auto swC = sandwich_operators(grid, 4.0, 5.0, 5, 4);
    for (double v : swC.lower) EXPECT_DOUBLE_EQ(v, 0.0);
}
