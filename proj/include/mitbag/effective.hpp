#ifndef MITBAG_EFFECTIVE_HPP
#define MITBAG_EFFECTIVE_HPP

/** \file effective.hpp
 *  The effective boundary operator L^G - kappa^2/4 + K acting on spinor fields
 *  constrained pointwise to ker(B(n) - 1), discretized on surfaces of
 *  revolution.
 *
 *  Fields are parametrized through the boundary diagonalizer: psi = P_n (xi, 0)
 *  with xi a 2-component amplitude, which satisfies the constraint exactly.
 *  On a surface of revolution the four spinor components of such a field carry
 *  azimuthal modes (m, m+1, m, m+1), so the quadratic form splits into integer
 *  -indexed blocks; each block is a real symmetric band pencil in the meridian
 *  variable (half-bandwidth 3, lumped diagonal mass).
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mitbag/eigensolvers.hpp"
#include "mitbag/surface.hpp"

namespace mitbag {

struct EffectivePencil {
    int m_mode = 0;
    int n_theta = 0;
    SymBandMatrix stiffness;         // discretized Q^Gamma on reconstructed spinors
    std::vector<double> potential;   // (-kappa^2/4 + K) dGamma per DOF
    std::vector<double> mass;        // dGamma per DOF
    double hermiticity_defect = 0.0; // by construction 0; kept for the contract

    EffectivePencil() : stiffness(1, 0) {}
};

namespace detail {

/// Real 2x2 block of the lower spinor pair: sigma.n restricted to phi = 0.
inline std::array<double, 4> lower_block(const SurfacePoint& p) {
    const double nrho = std::hypot(p.normal[0], p.normal[1]);
    const double nz = p.normal[2];
    return {nz, nrho, nrho, -nz};
}

}  // namespace detail

/// Assemble the per-azimuthal-mode pencil of Q^Gamma (stiffness), the
/// curvature potential and the mass on the grid's staggered meridian nodes.
/// The connection term d(P_n)/d theta is analytic on the sphere and a centered
/// difference on general profiles.
inline EffectivePencil assemble_effective_form(const SurfaceGrid& grid, int m_mode) {
    const int M = grid.n_theta;
    const int mc_max = std::max(std::abs(m_mode), std::abs(m_mode + 1));
    if (M < 4 * mc_max + 12)
        throw std::invalid_argument("assemble_effective_form: grid too coarse for the requested mode");
    EffectivePencil out;
    out.m_mode = m_mode;
    out.n_theta = M;
    out.stiffness = SymBandMatrix(2 * M, 3);
    out.potential.assign(2 * M, 0.0);
    out.mass.assign(2 * M, 0.0);
    const double d = kPi / M;
    const double inv2 = 0.5;  // |R1 zeta'|^2 carries the 1/2 from P_n's normalization

    // nodal terms
    for (int i = 0; i < M; ++i) {
        const auto& p = grid.points[i];
        const double w = grid.dGamma[i];
        const auto rz = grid.surface.rz(grid.theta[i]);
        const double r = rz[0];
        const auto b = detail::lower_block(p);
        const double m0 = m_mode, m1 = m_mode + 1.0;
        // (1/2) M_c^2 from the upper pair, R2^T M_c^2 R2 / ... from the lower pair
        const double q00 = 0.5 * (m0 * m0) + 0.5 * (b[0] * b[0] * m0 * m0 + b[2] * b[2] * m1 * m1);
        const double q11 = 0.5 * (m1 * m1) + 0.5 * (b[1] * b[1] * m0 * m0 + b[3] * b[3] * m1 * m1);
        const double q01 = 0.5 * (b[0] * b[1] * m0 * m0 + b[2] * b[3] * m1 * m1);
        const double scale = w / (r * r);
        out.stiffness.add(2 * i, 2 * i, q00 * scale);
        out.stiffness.add(2 * i + 1, 2 * i + 1, q11 * scale);
        if (q01 != 0.0) out.stiffness.add(2 * i, 2 * i + 1, q01 * scale);
        const double pot = (-0.25 * p.kappa * p.kappa + p.gauss) * w;
        out.potential[2 * i] = pot;
        out.potential[2 * i + 1] = pot;
        out.mass[2 * i] = w;
        out.mass[2 * i + 1] = w;
    }

    // interval (gradient) terms at midpoints
    for (int i = 0; i + 1 < M; ++i) {
        const double tm = 0.5 * (grid.theta[i] + grid.theta[i + 1]);
        const auto rz = grid.surface.rz(tm);
        const double ell = grid.surface.arc(tm);
        const double wg = 2.0 * kPi * rz[0] * d / ell;
        std::array<double, 4> R2m, dR2;
        if (grid.surface.is_sphere()) {
            R2m = {std::cos(tm), std::sin(tm), std::sin(tm), -std::cos(tm)};
            dR2 = {-std::sin(tm), std::cos(tm), std::cos(tm), std::sin(tm)};
        } else {
            const auto bl = detail::lower_block(grid.surface.point(grid.theta[i]));
            const auto bu = detail::lower_block(grid.surface.point(grid.theta[i + 1]));
            for (int t = 0; t < 4; ++t) {
                R2m[t] = 0.5 * (bl[t] + bu[t]);
                dR2[t] = (bu[t] - bl[t]) / d;
            }
        }
        // local DOFs (f_i, g_i, f_{i+1}, g_{i+1}); zeta' = D z, zeta_mid = A z
        // upper pair: (1/2) |zeta'|^2 ; lower pair: (1/2) |dR2 A z + R2 D z|^2
        double loc[4][4] = {};
        const double Dc[2] = {-1.0 / d, 1.0 / d};
        const double Ac[2] = {0.5, 0.5};
        // rows of the 2x4 operator L2 z = dR2 (A z) + R2 (D z), and L1 z = D z
        double L1[2][4] = {}, L2[2][4] = {};
        for (int half = 0; half < 2; ++half) {  // node i then i+1
            for (int comp = 0; comp < 2; ++comp) {
                const int col = 2 * half + comp;
                L1[comp][col] += Dc[half];
                for (int row = 0; row < 2; ++row) {
                    L2[row][col] += dR2[2 * row + comp] * Ac[half] + R2m[2 * row + comp] * Dc[half];
                }
            }
        }
        for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b) {
                double s = 0.0;
                for (int row = 0; row < 2; ++row) s += inv2 * (L1[row][a] * L1[row][b] + L2[row][a] * L2[row][b]);
                loc[a][b] = s * wg;
            }
        for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b)
                if (loc[a][b] != 0.0) out.stiffness.add(2 * i + a, 2 * i + b, loc[a][b]);
    }
    return out;
}

namespace detail {

/// Band eigenvalues of (a_stiff * S + c_pot * P + b_mass * M) against M,
/// reduced to a standard band problem through the diagonal mass.
inline SymBandMatrix combine_pencil(const EffectivePencil& p, double a_stiff, double c_pot, double b_mass) {
    const int n = 2 * p.n_theta;
    SymBandMatrix B(n, p.stiffness.half_bandwidth());
    for (int i = 0; i < n; ++i) {
        const double si = 1.0 / std::sqrt(p.mass[i]);
        for (int dd = 0; dd <= p.stiffness.half_bandwidth(); ++dd) {
            if (i + dd >= n) continue;
            double v = a_stiff * p.stiffness.at(dd, i);
            if (dd == 0) v += c_pot * p.potential[i] + b_mass * p.mass[i];
            B.at(dd, i) = v * si / std::sqrt(p.mass[i + dd]);
        }
    }
    return B;
}

}  // namespace detail

/// Lowest k eigenvalues of the block pencil a*S + c*P + b*M against M.
inline std::vector<double> pencil_lowest(const EffectivePencil& p, int k, double a_stiff = 1.0,
                                         double c_pot = 1.0, double b_mass = 0.0) {
    const auto B = detail::combine_pencil(p, a_stiff, c_pot, b_mass);
    const int n = B.size();
    return band_eigenvalues_by_index(B, 0, std::min(k, n) - 1);
}

/// All block eigenvalues below lambda_max.
inline std::vector<double> pencil_below(const EffectivePencil& p, double lambda_max, double a_stiff = 1.0,
                                        double c_pot = 1.0, double b_mass = 0.0) {
    const auto B = detail::combine_pencil(p, a_stiff, c_pot, b_mass);
    const int c = band_count_below(B, lambda_max);
    if (c == 0) return {};
    return band_eigenvalues_by_index(B, 0, c - 1);
}

/// Dense eigenpairs of one block (test support: eigenvectors in the reduced
/// xi variables).
inline EigenDecomposition pencil_eigenpairs_dense(const EffectivePencil& p, int k) {
    const int n = 2 * p.n_theta;
    HermitianDense A(n), B(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j <= std::min(n - 1, i + p.stiffness.half_bandwidth()); ++j) {
            const double v = p.stiffness.element(i, j) + (i == j ? p.potential[i] : 0.0);
            A.at(i, j) = v;
            A.at(j, i) = v;
        }
        B.at(i, i) = p.mass[i];
    }
    return eig_hermitian(A, B, k, true);
}

/// Reconstruct the 4-spinor at meridian node i (phi = 0 section) from reduced
/// amplitudes; satisfies B(n) psi = psi by construction of P_n.
inline Spinor reconstruct_spinor(const SurfaceGrid& grid, int node, cplx xi0, cplx xi1) {
    const auto P = diagonalizer(UnitVector3::normalized(grid.points[node].normal));
    Spinor e;
    e[0] = xi0;
    e[1] = xi1;
    return P * e;
}

struct EffectiveLevel {
    double value = 0.0;
    double extrapolated = 0.0;
    int multiplicity = 0;
};

struct EffectiveSpectrum {
    std::string geometry;
    int n_theta = 0;
    int n_theta_fine = 0;
    int m_max = 0;
    std::vector<double> eigenvalues;   // ascending, fine-grid values
    std::vector<double> extrapolated;  // Richardson from the two resolutions
    std::vector<int> mode_of;          // azimuthal block of each eigenvalue
    std::vector<EffectiveLevel> levels;
};

/// k lowest eigenvalues of L^G - kappa^2/4 + K merged over azimuthal blocks
/// |m| <= m_max, with a two-resolution convergence estimate and measured
/// multiplicities.  Errors out if the mode budget may truncate the window.
inline EffectiveSpectrum effective_spectrum(const SurfaceGrid& grid, int m_max, int k) {
    if (k < 1) throw std::invalid_argument("effective_spectrum: k >= 1");
    EffectiveSpectrum out;
    out.geometry = grid.surface.is_sphere() ? "sphere" : "surface-of-revolution";
    out.n_theta = grid.n_theta;
    out.n_theta_fine = 2 * grid.n_theta;
    out.m_max = m_max;
    const SurfaceGrid fine = SurfaceGrid::build(grid.surface, 2 * grid.n_theta, grid.m_max);

    struct Entry {
        double coarse, finev;
        int mode;
    };
    std::vector<Entry> entries;
    double guard_lowest = std::numeric_limits<double>::infinity();
    for (int m = -m_max; m <= m_max; ++m) {
        const auto pc = assemble_effective_form(grid, m);
        const auto pf = assemble_effective_form(fine, m);
        const int kb = std::min(k + 2, 2 * grid.n_theta);
        const auto vc = pencil_lowest(pc, kb);
        const auto vf = pencil_lowest(pf, kb);
        for (int j = 0; j < kb; ++j) entries.push_back({vc[j], vf[j], m});
        if (std::abs(m) == m_max) guard_lowest = std::min(guard_lowest, vf[0]);
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.finev < b.finev; });
    if (static_cast<int>(entries.size()) < k)
        throw std::invalid_argument("effective_spectrum: not enough eigenvalues collected");
    if (m_max > 0 && guard_lowest < entries[k - 1].finev)
        throw std::invalid_argument("effective_spectrum: azimuthal mode budget insufficient");
    for (int j = 0; j < k; ++j) {
        out.eigenvalues.push_back(entries[j].finev);
        out.extrapolated.push_back((4.0 * entries[j].finev - entries[j].coarse) / 3.0);
        out.mode_of.push_back(entries[j].mode);
    }
    // measured multiplicities by clustering
    for (int j = 0; j < k;) {
        EffectiveLevel lv;
        lv.value = out.eigenvalues[j];
        lv.extrapolated = out.extrapolated[j];
        lv.multiplicity = 1;
        int t = j + 1;
        while (t < k && std::abs(out.eigenvalues[t] - lv.value) <= 5e-3 * std::max(1.0, std::abs(lv.value))) {
            ++lv.multiplicity;
            ++t;
        }
        out.levels.push_back(lv);
        j = t;
    }
    return out;
}

/// All merged eigenvalues (with block provenance) of the base pencil below
/// lambda_max; building block for the spectral sandwiches at scale.
inline std::vector<double> effective_levels_below(const SurfaceGrid& grid, int m_max, double lambda_max) {
    std::vector<double> all;
    double guard_lowest = std::numeric_limits<double>::infinity();
    for (int m = -m_max; m <= m_max; ++m) {
        const auto p = assemble_effective_form(grid, m);
        const auto v = pencil_below(p, lambda_max);
        all.insert(all.end(), v.begin(), v.end());
        if (std::abs(m) == m_max && !v.empty()) guard_lowest = std::min(guard_lowest, v[0]);
    }
    if (guard_lowest < lambda_max)
        throw std::invalid_argument("effective_levels_below: azimuthal mode budget insufficient");
    std::sort(all.begin(), all.end());
    return all;
}

/// Smallest eigenvalue of the form Q^Gamma - int (kappa^2/4 - K)|psi|^2,
/// relative to the stiffness scale, plus a randomized Rayleigh-quotient check
/// on `trials` constrained fields.  The contract is >= -1e-8.
inline double verify_form_lower_bound(const SurfaceGrid& grid, int trials = 100,
                                      std::uint64_t seed = 0x9e3779b97f4a7c15ull) {
    const int m_scan = std::max(1, std::min(8, (grid.n_theta - 16) / 6));
    double min_rel = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int m = -m_scan; m <= m_scan; ++m) {
        const auto p = assemble_effective_form(grid, m);
        // spectral scale of the combined (mass-reduced) operator
        const double scale = std::max(detail::combine_pencil(p, 1.0, 1.0, 0.0).norm_inf(), 1e-300);
        const double lowest = pencil_lowest(p, 1)[0];
        min_rel = std::min(min_rel, lowest / scale);
        // random constrained fields: any xi satisfies the constraint, so the
        // Rayleigh quotient of the combined pencil must share the bound
        const int n = 2 * p.n_theta;
        for (int t = 0; t < trials / (2 * m_scan + 1) + 1; ++t) {
            std::vector<double> z(n);
            for (auto& zi : z) zi = g(rng);
            double num = 0.0, den = 0.0;
            for (int i = 0; i < n; ++i) {
                den += p.mass[i] * z[i] * z[i];
                num += p.potential[i] * z[i] * z[i];
                for (int dd = 0; dd <= p.stiffness.half_bandwidth(); ++dd) {
                    if (i + dd >= n) continue;
                    const double s = p.stiffness.at(dd, i);
                    num += (dd == 0 ? 1.0 : 2.0) * s * z[i] * z[i + dd];
                }
            }
            min_rel = std::min(min_rel, num / den / scale);
        }
    }
    return min_rel;
}

struct SandwichSpectra {
    std::vector<double> lower;  // ([1 - C m^{-1/2}] L - kappa^2/4 + K - C/m)_+^{1/2}
    std::vector<double> upper;  // ([1 + C m^{-1/2}] L - kappa^2/4 + K + C/m)^{1/2}
};

/// k lowest eigenvalues of the two comparison operators, by spectral mapping
/// of the assembled pencils.  The inner upper operator must be PSD
/// (guaranteed by the curvature lower bound); violation raises an error.
inline SandwichSpectra sandwich_operators(const SurfaceGrid& grid, double mass, double C, int m_max, int k) {
    if (!(mass > 0.0) || C < 0.0) throw std::invalid_argument("sandwich_operators: need m > 0, C >= 0");
    const double alo = 1.0 - C / std::sqrt(mass);
    const double ahi = 1.0 + C / std::sqrt(mass);
    std::vector<double> lo_all, hi_all;
    double scale_probe = 1.0;
    for (int m = -m_max; m <= m_max; ++m) {
        const auto p = assemble_effective_form(grid, m);
        scale_probe = std::max(scale_probe, p.stiffness.norm_inf());
        const int kb = std::min(k + 2, 2 * p.n_theta);
        const auto vlo = pencil_lowest(p, kb, alo, 1.0, -C / mass);
        const auto vhi = pencil_lowest(p, kb, ahi, 1.0, +C / mass);
        lo_all.insert(lo_all.end(), vlo.begin(), vlo.end());
        hi_all.insert(hi_all.end(), vhi.begin(), vhi.end());
    }
    std::sort(lo_all.begin(), lo_all.end());
    std::sort(hi_all.begin(), hi_all.end());
    if (!hi_all.empty() && hi_all.front() < -1e-8 * std::max(1.0, scale_probe))
        throw verification_error("sandwich_operators: inner upper operator not PSD (assembly bug)");
    SandwichSpectra out;
    for (int j = 0; j < k && j < static_cast<int>(lo_all.size()); ++j)
        out.lower.push_back(std::sqrt(std::max(0.0, lo_all[j])));
    for (int j = 0; j < k && j < static_cast<int>(hi_all.size()); ++j)
        out.upper.push_back(std::sqrt(std::max(0.0, hi_all[j])));
    return out;
}

}  // namespace mitbag

#endif
