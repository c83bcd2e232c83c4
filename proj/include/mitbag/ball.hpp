#ifndef MITBAG_BALL_HPP
#define MITBAG_BALL_HPP

/** \file ball.hpp
 *  Eigenvalues and radial eigenfunctions of the confined Dirac operator on a
 *  ball, by two independent routes:
 *
 *   (A) transcendental matching of spherical Bessel solutions, analytically
 *       continued with modified Bessel functions for eigenvalues inside the
 *       mass gap |E| < |m|;
 *   (B) a P1/P0 mixed discretization of the 2x2 radial system whose assembled
 *       pencil is exactly symmetric tridiagonal in interleaved ordering.
 *
 *  Radial convention (calibrated; frozen by the convention table tests):
 *     u' = -(kappa/r) u + (E + m) v
 *     v' = +(kappa/r) v - (E - m) u
 *  with u(0) = v(0) = 0 and the confining condition v(R) = -u(R).  Regular
 *  solutions are u = r j_{l_up}(kr), v = s (k/(E+m)) r j_{l_low}(kr) with
 *  s = sign(kappa), l_up = kappa (kappa > 0) or |kappa|-1 (kappa < 0).
 */

#include <algorithm>
#include <cmath>

#include "mitbag/eigensolvers.hpp"
#include "mitbag/numerics.hpp"

namespace mitbag {

struct RadialChannel {
    int kappa = -1;   // nonzero angular quantum number
    int l_upper = 0;
    int l_lower = 1;
    int degeneracy = 2;
    int coupling_sign = -1;  // s = sign(kappa)

    static RadialChannel make(int kappa) {
        if (kappa == 0) throw std::invalid_argument("RadialChannel: kappa must be nonzero");
        RadialChannel c;
        c.kappa = kappa;
        if (kappa > 0) {
            c.l_upper = kappa;
            c.l_lower = kappa - 1;
        } else {
            c.l_upper = -kappa - 1;
            c.l_lower = -kappa;
        }
        c.degeneracy = 2 * std::abs(kappa);
        c.coupling_sign = kappa > 0 ? 1 : -1;
        return c;
    }
};

enum class RadialSolverKind { bessel, fdm };

struct BallMode {
    double energy = 0.0;
    double mass = 0.0;
    double radius = 1.0;
    RadialChannel channel;
    RadialSolverKind solver = RadialSolverKind::bessel;
    std::vector<double> r, u, v;  // samples on (0, R], uniform
    bool in_gap = false;
    double wavenumber = 0.0;  // k above the gap, chi inside it
    double amplitude = 1.0;   // normalization factor applied to the analytic solution
};

namespace detail {

/// Normalized matching value; zero crossings are eigenvalues.  bc = -1 is the
/// confining condition v(R) = -u(R); bc = +1 the sign-flipped one.
inline double matching_value(const RadialChannel& ch, double mass, double R, double E, int bc) {
    const double am = std::abs(mass);
    const double s = ch.coupling_sign;
    const double c = bc;
    if (std::abs(E) > am) {
        const double k = std::sqrt(E * E - mass * mass);
        const double t1 = spherical_bessel_j(ch.l_upper, k * R);
        const double t2 = -(s / c) * (k / (E + mass)) * spherical_bessel_j(ch.l_lower, k * R);
        const double env = std::abs(t1) + std::abs(t2);
        return env > 0.0 ? (t1 + t2) / env : 0.0;
    }
    if (std::abs(E) == am) {
        // removable corner k = 0: t2/t1 has a finite limit on both branches
        double rho;
        if (ch.kappa < 0) {
            rho = -(s / c) * (E - mass) * R / (2.0 * ch.l_upper + 3.0);
        } else {
            if (E + mass == 0.0) return (s / c) > 0 ? -1.0 : 1.0;
            rho = -(s / c) * (2.0 * ch.l_upper + 1.0) / ((E + mass) * R);
        }
        return (1.0 + rho) / (1.0 + std::abs(rho));
    }
    const double chi = std::sqrt(mass * mass - E * E);
    const double t1 = spherical_bessel_i_scaled(ch.l_upper, chi * R);
    const double t2 = -(1.0 / c) * (chi / (E + mass)) * spherical_bessel_i_scaled(ch.l_lower, chi * R);
    const double env = std::abs(t1) + std::abs(t2);
    return env > 0.0 ? (t1 + t2) / env : 0.0;
}

}  // namespace detail

/// Real continuous function of E whose zeros in a channel are the eigenvalues.
inline double mit_matching_function(const RadialChannel& ch, double mass, double R, double E) {
    if (!(R > 0.0)) throw std::invalid_argument("mit_matching_function: R must be positive");
    if (!(E > 0.0)) throw std::invalid_argument("mit_matching_function: E must be positive");
    return detail::matching_value(ch, mass, R, E, -1);
}

struct ChannelScanOptions {
    double gap_step_factor = 0.25;   // E-step inside the gap, in units of 1/R
    double k_step = 0.0;             // k-step above the gap; default pi/(8R)
    double root_tol = 1e-13;
    int bc = -1;
};

/// All matching roots with Elo < E < Ehi (either sign), by branch-adapted
/// scanning: fixed E-step inside the mass gap, fixed k-step outside it.
inline std::vector<double> channel_roots(const RadialChannel& ch, double mass, double R, double Elo,
                                         double Ehi, const ChannelScanOptions& opts = {}) {
    if (!(R > 0.0)) throw std::invalid_argument("channel_roots: R must be positive");
    if (!(Elo < Ehi)) throw std::invalid_argument("channel_roots: empty window");
    const double am = std::abs(mass);
    const double dk = opts.k_step > 0.0 ? opts.k_step : kPi / (8.0 * R);
    const double dE_gap = opts.gap_step_factor / R;
    std::vector<double> roots;

    auto f = [&](double E) { return detail::matching_value(ch, mass, R, E, opts.bc); };
    auto scan_energy_grid = [&](const std::vector<double>& grid) {
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            const double fa = f(grid[i]);
            const double fb = f(grid[i + 1]);
            if (fa == 0.0) {
                roots.push_back(grid[i]);
                continue;
            }
            if ((fa > 0.0) != (fb > 0.0)) {
                const auto r = find_root(f, grid[i], grid[i + 1], opts.root_tol);
                roots.push_back(r.value);
            }
        }
    };

    // the matching function has removable corners (and, for one sign, a
    // bounded jump) at E = +-|m|; every scan grid stays strictly off them
    const double edge = 1e-9 * std::max(1.0, am);
    const double corner = am * (1.0 + 1e-13);
    // segment 1: below the gap, E < -|m|
    if (Elo < -corner) {
        const double khi = std::sqrt(Elo * Elo - mass * mass);
        const double klo = Ehi < -corner ? std::sqrt(Ehi * Ehi - mass * mass) : std::sqrt(corner * corner - mass * mass);
        std::vector<double> grid;
        for (double k = khi; k > klo + dk * 1e-6; k -= dk) grid.push_back(-std::sqrt(mass * mass + k * k));
        grid.push_back(-std::sqrt(mass * mass + klo * klo));
        scan_energy_grid(grid);
    }
    // segment 2: inside the gap
    if (am > 0.0 && Ehi > -am && Elo < am) {
        const double a = std::max(Elo, -am + edge);
        const double b = std::min(Ehi, am - edge);
        if (a < b) {
            std::vector<double> grid;
            for (double E = a; E < b; E += dE_gap) grid.push_back(E);
            grid.push_back(b);
            scan_energy_grid(grid);
        }
    }
    // segment 3: above the gap, E > |m|
    if (Ehi > corner) {
        const double klo =
            Elo > corner ? std::sqrt(Elo * Elo - mass * mass) : std::sqrt(corner * corner - mass * mass);
        const double khi = std::sqrt(Ehi * Ehi - mass * mass);
        std::vector<double> grid;
        grid.push_back(std::sqrt(mass * mass + klo * klo));
        for (double k = klo + dk; k < khi; k += dk) grid.push_back(std::sqrt(mass * mass + k * k));
        grid.push_back(std::sqrt(mass * mass + khi * khi));
        scan_energy_grid(grid);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-11 * std::max(1.0, std::abs(x)); }),
                roots.end());
    return roots;
}

namespace detail {

/// d/dr [ r j_l(k r) ] = (l+1) j_l(x) - x j_{l+1}(x),  x = k r.
inline double radial_bessel_deriv_j(int l, double x) {
    return (l + 1.0) * spherical_bessel_j(l, x) - x * spherical_bessel_j(l + 1, x);
}
/// scaled gap variant: d/dr [ r i_l(chi r) e^{-chi R} ] * e^{chi(R - r)}.
inline double radial_bessel_deriv_i_scaled(int l, double x) {
    return (l + 1.0) * spherical_bessel_i_scaled(l, x) + x * spherical_bessel_i_scaled(l + 1, x);
}

}  // namespace detail

/// Analytic radial samples (and optional derivatives) of a matching-root mode.
inline BallMode assemble_bessel_mode(const RadialChannel& ch, double mass, double R, double E,
                                     int n_samples = 2000) {
    if (n_samples < 16 || n_samples % 2 != 0)
        throw std::invalid_argument("assemble_bessel_mode: n_samples must be even and >= 16");
    BallMode mode;
    mode.energy = E;
    mode.mass = mass;
    mode.radius = R;
    mode.channel = ch;
    mode.solver = RadialSolverKind::bessel;
    mode.in_gap = std::abs(E) < std::abs(mass);
    const double h = R / n_samples;
    mode.r.resize(n_samples);
    mode.u.resize(n_samples);
    mode.v.resize(n_samples);
    const double s = ch.coupling_sign;
    if (!mode.in_gap) {
        const double k = std::sqrt(E * E - mass * mass);
        mode.wavenumber = k;
        const double vfac = s * k / (E + mass);
        for (int i = 0; i < n_samples; ++i) {
            const double r = (i + 1) * h;
            mode.r[i] = r;
            mode.u[i] = r * spherical_bessel_j(ch.l_upper, k * r);
            mode.v[i] = vfac * r * spherical_bessel_j(ch.l_lower, k * r);
        }
    } else {
        const double chi = std::sqrt(mass * mass - E * E);
        mode.wavenumber = chi;
        const double vfac = chi / (E + mass);
        for (int i = 0; i < n_samples; ++i) {
            const double r = (i + 1) * h;
            const double damp = std::exp(chi * (r - R));
            mode.r[i] = r;
            mode.u[i] = r * spherical_bessel_i_scaled(ch.l_upper, chi * r) * damp;
            mode.v[i] = vfac * r * spherical_bessel_i_scaled(ch.l_lower, chi * r) * damp;
        }
    }
    // L2 normalization of (u, v) on (0, R] (Simpson, with the regular origin)
    std::vector<double> dens(n_samples + 1, 0.0);
    for (int i = 0; i < n_samples; ++i) dens[i + 1] = mode.u[i] * mode.u[i] + mode.v[i] * mode.v[i];
    const double nrm2 = integrate_samples(dens, h);
    const double A = 1.0 / std::sqrt(nrm2);
    mode.amplitude = A;
    for (int i = 0; i < n_samples; ++i) {
        mode.u[i] *= A;
        mode.v[i] *= A;
    }
    return mode;
}

/// u'(r) and v'(r) of a bessel-route mode, from Bessel recurrences (does not
/// use the eigenvalue relation, so identity checks stay independent).
inline std::pair<double, double> bessel_mode_derivatives(const BallMode& mode, double r) {
    const auto& ch = mode.channel;
    const double s = ch.coupling_sign;
    if (!mode.in_gap) {
        const double k = mode.wavenumber;
        const double vfac = s * k / (mode.energy + mode.mass);
        return {mode.amplitude * detail::radial_bessel_deriv_j(ch.l_upper, k * r),
                mode.amplitude * vfac * detail::radial_bessel_deriv_j(ch.l_lower, k * r)};
    }
    const double chi = mode.wavenumber;
    const double vfac = chi / (mode.energy + mode.mass);
    const double damp = std::exp(chi * (r - mode.radius));
    return {mode.amplitude * damp * detail::radial_bessel_deriv_i_scaled(ch.l_upper, chi * r),
            mode.amplitude * damp * vfac * detail::radial_bessel_deriv_i_scaled(ch.l_lower, chi * r)};
}

/// Matching roots in (0, e_max), assembled into normalized modes.
inline std::vector<BallMode> solve_channel_bessel(const RadialChannel& ch, double mass, double R,
                                                  double e_max, int n_samples = 2000,
                                                  const ChannelScanOptions& opts = {}) {
    if (!(e_max > 0.0)) throw std::invalid_argument("solve_channel_bessel: window must be (0, e_max)");
    const auto roots = channel_roots(ch, mass, R, 1e-12, e_max, opts);
    std::vector<BallMode> modes;
    modes.reserve(roots.size());
    for (double E : roots) modes.push_back(assemble_bessel_mode(ch, mass, R, E, n_samples));
    return modes;
}

// ---------------------------------------------------------------------------
// Route B: mixed P1/P0 finite elements on (0, R)
// ---------------------------------------------------------------------------

namespace detail {

struct FdmPencil {
    std::vector<double> diag, off;  // scaled symmetric tridiagonal, size 2N
    double h = 0.0;
    int N = 0;
};

/// Interleaved (v_1, u_1, v_2, u_2, ..., v_N, u_N) assembly of the weak form
///   a(psi,psi~) = int [ m(u u~ - v v~) + (kappa/r)(u v~ + v u~) + u' v~ + u~' v ] dr
///                 - bc * u(R) u~(R),
/// u in P1 (u(0)=0), v in P0, masses lumped; exactly symmetric by construction.
inline FdmPencil assemble_fdm(const RadialChannel& ch, double mass, double R, int N, int bc) {
    if (N < 200) throw std::invalid_argument("solve_channel_fdm: need N >= 200");
    FdmPencil p;
    p.N = N;
    p.h = R / N;
    const double h = p.h;
    const int n = 2 * N;
    std::vector<double> S_diag(n, 0.0), S_off(n - 1, 0.0), M(n, 0.0);
    auto vi = [](int i) { return 2 * (i - 1); };      // v on cell i = 1..N
    auto uj = [](int j) { return 2 * (j - 1) + 1; };  // u at node j = 1..N
    for (int i = 1; i <= N; ++i) {
        const double rmid = (i - 0.5) * h;
        const double w = ch.kappa * h / (2.0 * rmid);
        S_diag[vi(i)] = -mass * h;
        M[vi(i)] = h;
        // coupling to u_i (always) and u_{i-1} (i >= 2)
        S_off[vi(i)] += 1.0 + w;  // between v_i and u_i (vi+1 == uj(i))
        if (i >= 2) S_off[vi(i) - 1] += -1.0 + w;  // between u_{i-1} and v_i
    }
    for (int j = 1; j <= N; ++j) {
        const double mj = (j < N) ? h : 0.5 * h;
        S_diag[uj(j)] = mass * mj;
        M[uj(j)] = mj;
    }
    S_diag[uj(N)] += -static_cast<double>(bc);
    // scale: T = M^{-1/2} S M^{-1/2}
    p.diag.resize(n);
    p.off.resize(n - 1);
    for (int i = 0; i < n; ++i) p.diag[i] = S_diag[i] / M[i];
    for (int i = 0; i + 1 < n; ++i) p.off[i] = S_off[i] / std::sqrt(M[i] * M[i + 1]);
    return p;
}

}  // namespace detail

struct FdmResult {
    std::vector<BallMode> modes;
    int discarded_spurious = 0;
};


/// Discrete eigenpairs in (0, e_max); eigenvectors whose u-part oscillates at
/// grid scale are discarded as spurious and counted.
inline FdmResult solve_channel_fdm(const RadialChannel& ch, double mass, double R, int N, double e_max,
                                   bool want_modes = true, int bc = -1) {
    const auto p = detail::assemble_fdm(ch, mass, R, N, bc);
    const int n = 2 * N;
    SymBandMatrix T(n, 1);
    for (int i = 0; i < n; ++i) T.at(0, i) = p.diag[i];
    for (int i = 0; i + 1 < n; ++i) T.at(1, i) = p.off[i];
    const double elo = 1e-9 * std::max(1.0, std::abs(mass));
    const int c_lo = band_count_below(T, elo);
    const int c_hi = band_count_below(T, e_max);
    FdmResult out;
    if (c_hi <= c_lo) return out;
    const auto vals = band_eigenvalues_by_index(T, c_lo, c_hi - 1, 1e-13 * std::max(1.0, std::abs(mass) + e_max));
    const double h = p.h;
    for (double lam : vals) {
        auto z = tridiag_eigenvector(p.diag, p.off, lam);
        // unscale (M^{-1/2}) and split into u at nodes, v on cells
        std::vector<double> u(N), vc(N);
        double u_mass = 0.0, v_mass = 0.0;
        for (int i = 1; i <= N; ++i) {
            const double mj = (i < N) ? h : 0.5 * h;
            vc[i - 1] = z[2 * (i - 1)] / std::sqrt(h);
            u[i - 1] = z[2 * (i - 1) + 1] / std::sqrt(mj);
            u_mass += mj * u[i - 1] * u[i - 1];
            v_mass += h * vc[i - 1] * vc[i - 1];
        }
        // spurious branches: grid-scale oscillation of u, or the discretely
        // admissible irregular solution (v-only, pinned at E = -mass)
        int flips = 0;
        for (int i = 0; i + 1 < N; ++i)
            if (u[i] != 0.0 && u[i + 1] != 0.0 && (u[i] > 0) != (u[i + 1] > 0)) ++flips;
        if (flips > N / 2 || u_mass < 1e-8 * (u_mass + v_mass)) {
            ++out.discarded_spurious;
            continue;
        }
        if (!want_modes) {
            BallMode m;
            m.energy = lam;
            m.mass = mass;
            m.radius = R;
            m.channel = ch;
            m.solver = RadialSolverKind::fdm;
            out.modes.push_back(std::move(m));
            continue;
        }
        BallMode m;
        m.energy = lam;
        m.mass = mass;
        m.radius = R;
        m.channel = ch;
        m.solver = RadialSolverKind::fdm;
        m.r.resize(N);
        m.u = u;
        m.v.resize(N);
        for (int i = 0; i < N; ++i) m.r[i] = (i + 1) * h;
        for (int i = 0; i + 1 < N; ++i) m.v[i] = 0.5 * (vc[i] + vc[i + 1]);
        m.v[N - 1] = 1.5 * vc[N - 1] - 0.5 * vc[N - 2];
        // normalize against Simpson on the node grid
        std::vector<double> dens(N + 1, 0.0);
        for (int i = 0; i < N; ++i) dens[i + 1] = m.u[i] * m.u[i] + m.v[i] * m.v[i];
        double nrm2 = (N % 2 == 0) ? integrate_samples(dens, h) : 0.0;
        if (N % 2 != 0) {
            for (int i = 0; i < N; ++i) nrm2 += dens[i + 1] * h;  // trapezoid fallback for odd N
        }
        const double A = 1.0 / std::sqrt(nrm2);
        for (int i = 0; i < N; ++i) {
            m.u[i] *= A;
            m.v[i] *= A;
        }
        out.modes.push_back(std::move(m));
    }
    return out;
}

/// Number of genuine (non-spurious) discrete eigenvalues in (0, e_max); used
/// by the scan-step validation against the matching route.
inline int fdm_count_in_window(const RadialChannel& ch, double mass, double R, int N, double e_max,
                               int bc = -1) {
    return static_cast<int>(solve_channel_fdm(ch, mass, R, N, e_max, false, bc).modes.size());
}

/// Richardson-extrapolated eigenvalues from grids N and 2N, paired by index.
inline std::vector<double> fdm_levels_extrapolated(const RadialChannel& ch, double mass, double R, int N,
                                                   double e_max, int bc = -1) {
    const auto a = solve_channel_fdm(ch, mass, R, N, e_max, false, bc);
    const auto b = solve_channel_fdm(ch, mass, R, 2 * N, e_max, false, bc);
    const std::size_t n = std::min(a.modes.size(), b.modes.size());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e1 = a.modes[i].energy, e2 = b.modes[i].energy;
        if (std::abs(e2 - e1) > 0.05 * std::max(1.0, std::abs(e2)))
            throw convergence_error("fdm_levels_extrapolated: grids disagree, refine N");
        out[i] = (4.0 * e2 - e1) / 3.0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Merged spectrum
// ---------------------------------------------------------------------------

struct ChannelSpectrum {
    int kappa = 0;
    int degeneracy = 0;
    std::vector<double> eigenvalues;
};

struct SpectrumLevel {
    double energy = 0.0;
    int degeneracy = 0;
    std::vector<std::pair<int, int>> contributions;  // (kappa, degeneracy)
};

struct SpectrumResult {
    double mass = 0.0;
    double radius = 1.0;
    double e_max = 0.0;
    int kappa_max = 0;
    std::vector<ChannelSpectrum> channels;
    std::vector<SpectrumLevel> levels;

    /// Multiplicity-expanded ascending eigenvalue list mu_1 <= mu_2 <= ...
    std::vector<double> expanded() const {
        std::vector<double> out;
        for (const auto& lv : levels)
            for (int i = 0; i < lv.degeneracy; ++i) out.push_back(lv.energy);
        return out;
    }
};

/// Positive spectrum in (0, e_max) merged over channels |kappa| <= kappa_max
/// with degeneracies 2|kappa|.  Requires the cutoff channels to be silent in
/// the window (checked).
inline SpectrumResult assemble_spectrum(double mass, double R, double e_max, int kappa_max,
                                        const ChannelScanOptions& opts = {}) {
    if (kappa_max < 1) throw std::invalid_argument("assemble_spectrum: kappa_max >= 1");
    for (int sgn : {+1, -1}) {
        const auto guard = channel_roots(RadialChannel::make(sgn * kappa_max), mass, R, 1e-12, e_max, opts);
        if (!guard.empty())
            throw std::invalid_argument("assemble_spectrum: channel cutoff insufficient, raise kappa_max");
    }
    SpectrumResult res;
    res.mass = mass;
    res.radius = R;
    res.e_max = e_max;
    res.kappa_max = kappa_max;
    std::vector<std::pair<double, int>> all;  // (E, kappa)
    for (int a = 1; a <= kappa_max; ++a) {
        for (int sgn : {+1, -1}) {
            const int kappa = sgn * a;
            const auto ch = RadialChannel::make(kappa);
            ChannelSpectrum cs;
            cs.kappa = kappa;
            cs.degeneracy = ch.degeneracy;
            cs.eigenvalues = channel_roots(ch, mass, R, 1e-12, e_max, opts);
            for (double e : cs.eigenvalues) all.emplace_back(e, kappa);
            res.channels.push_back(std::move(cs));
        }
    }
    std::sort(all.begin(), all.end());
    const double merge_tol = 1e-9;
    for (const auto& [e, kappa] : all) {
        if (!res.levels.empty() && std::abs(e - res.levels.back().energy) <= merge_tol * std::max(1.0, std::abs(e))) {
            auto& lv = res.levels.back();
            const int deg = 2 * std::abs(kappa);
            lv.energy = (lv.energy * lv.degeneracy + e * deg) / (lv.degeneracy + deg);
            lv.degeneracy += deg;
            lv.contributions.emplace_back(kappa, deg);
        } else {
            SpectrumLevel lv;
            lv.energy = e;
            lv.degeneracy = 2 * std::abs(kappa);
            lv.contributions.emplace_back(kappa, lv.degeneracy);
            res.levels.push_back(std::move(lv));
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Identities and localization diagnostics
// ---------------------------------------------------------------------------

namespace detail {

/// u/r with the regular-origin limit, for the centrifugal integrands.
inline double over_r(double val, double r) { return val / r; }

struct ModeDerivatives {
    std::vector<double> du, dv;  // aligned with mode.r
};

inline ModeDerivatives mode_derivatives(const BallMode& m) {
    ModeDerivatives d;
    const int n = static_cast<int>(m.r.size());
    d.du.resize(n);
    d.dv.resize(n);
    if (m.solver == RadialSolverKind::bessel) {
        for (int i = 0; i < n; ++i) {
            const auto der = bessel_mode_derivatives(m, m.r[i]);
            d.du[i] = der.first;
            d.dv[i] = der.second;
        }
        return d;
    }
    const double h = m.r[1] - m.r[0];
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            d.du[i] = m.u[1] / (2.0 * h);  // centered with u(0)=0
            d.dv[i] = m.v[1] / (2.0 * h);
        } else if (i == n - 1) {
            d.du[i] = (3.0 * m.u[i] - 4.0 * m.u[i - 1] + m.u[i - 2]) / (2.0 * h);
            d.dv[i] = (3.0 * m.v[i] - 4.0 * m.v[i - 1] + m.v[i - 2]) / (2.0 * h);
        } else {
            d.du[i] = (m.u[i + 1] - m.u[i - 1]) / (2.0 * h);
            d.dv[i] = (m.v[i + 1] - m.v[i - 1]) / (2.0 * h);
        }
    }
    return d;
}

}  // namespace detail

/// Relative residuals of the two square identities
///   E^2 ||psi||^2 = ||a.D psi||^2 + m ||psi||^2_bnd + m^2 ||psi||^2
///   ||a.D psi||^2 = ||grad psi||^2 + (1/2) int_G kappa |psi|^2
/// with every integral reduced to radial Simpson quadrature.
inline std::pair<double, double> verify_square_identities(const BallMode& m) {
    const int n = static_cast<int>(m.r.size());
    if (n < 3) throw std::invalid_argument("verify_square_identities: mode has no samples");
    const double h = m.r[1] - m.r[0];
    const double R = m.radius;
    const auto der = detail::mode_derivatives(m);
    const int kappa = m.channel.kappa;
    const int lu = m.channel.l_upper, ll = m.channel.l_lower;

    std::vector<double> dens(n + 1, 0.0), alpha_d(n + 1, 0.0), grad(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        const double r = m.r[i];
        const double uor = m.u[i] / r;
        const double vor = m.v[i] / r;
        dens[i + 1] = m.u[i] * m.u[i] + m.v[i] * m.v[i];
        const double up = der.du[i], vp = der.dv[i];
        const double a_upper = -vp + kappa * vor;  // (alpha.D psi) upper radial part
        const double a_lower = up + kappa * uor;
        alpha_d[i + 1] = a_upper * a_upper + a_lower * a_lower;
        grad[i + 1] = up * up + vp * vp + lu * (lu + 1.0) * uor * uor + ll * (ll + 1.0) * vor * vor;
    }
    // regular-origin limits: u/r -> A j_l(0) etc.; all integrands above vanish
    // at r=0 except via u', which is finite; Simpson node at 0:
    {
        const double up0 = (m.solver == RadialSolverKind::bessel)
                               ? bessel_mode_derivatives(m, 1e-12).first
                               : m.u[0] / m.r[0];
        const double vp0 = (m.solver == RadialSolverKind::bessel)
                               ? bessel_mode_derivatives(m, 1e-12).second
                               : m.v[0] / m.r[0];
        const double uor0 = lu == 0 ? up0 : 0.0;  // u/r -> u'(0) only for l=0
        const double vor0 = ll == 0 ? vp0 : 0.0;
        const double a_up0 = -vp0 + kappa * vor0;
        const double a_lo0 = up0 + kappa * uor0;
        alpha_d[0] = a_up0 * a_up0 + a_lo0 * a_lo0;
        grad[0] = up0 * up0 + vp0 * vp0 + lu * (lu + 1.0) * uor0 * uor0 + ll * (ll + 1.0) * vor0 * vor0;
    }
    const double I0 = integrate_samples(dens, h);
    if (std::abs(I0 - 1.0) > 1e-6)
        throw std::invalid_argument("verify_square_identities: mode is not L2-normalized");
    const double Iad = integrate_samples(alpha_d, h);
    const double Igrad_bulk = integrate_samples(grad, h);
    const double bnd = m.u[n - 1] * m.u[n - 1] + m.v[n - 1] * m.v[n - 1];  // |psi|^2 at r=R
    const double E = m.energy, mm = m.mass;

    const double lhs1 = E * E * I0;
    const double rhs1 = Iad + mm * bnd + mm * mm * I0;
    const double res1 = std::abs(lhs1 - rhs1) / std::max(std::abs(lhs1), 1e-300);

    const double grad_full = Igrad_bulk - bnd / R;          // ||grad psi||^2
    const double curv_term = bnd / R;                       // (1/2) int kappa |psi|^2, kappa = 2/R
    const double res2 = std::abs(Iad - grad_full - curv_term) / std::max(std::abs(Iad), 1e-300);
    return {res1, res2};
}

struct AgmonProfile {
    double slope = 0.0;                  // d/dr log(u^2+v^2), fitted on (R/4, 3R/4)
    double boundary_mass_fraction = 0.0; // mass within distance 4/|m| of the boundary
};

/// Fraction of the mode's L2 mass within `width` of the boundary.
inline double boundary_mass_fraction(const BallMode& m, double width) {
    const double R = m.radius;
    const double r0 = std::max(0.0, R - width);
    double inside = 0.0, total = 0.0;
    const double h = m.r[1] - m.r[0];
    for (std::size_t i = 0; i < m.r.size(); ++i) {
        const double d = m.u[i] * m.u[i] + m.v[i] * m.v[i];
        total += d * h;
        if (m.r[i] >= r0) inside += d * h;
    }
    return inside / total;
}

/// Exponential localization of an in-gap mode of the negative-mass problem.
/// Requires mass < 0 and 0 < E <= |m| sqrt(1 - eps0).
inline AgmonProfile agmon_decay_profile(const BallMode& m, double eps0 = 0.5) {
    const double am = std::abs(m.mass);
    if (!(m.mass < 0.0) || !(m.energy > 0.0) || !(m.energy <= am * std::sqrt(1.0 - eps0)))
        throw std::invalid_argument("agmon_decay_profile: mode is not an in-gap negative-mass mode");
    AgmonProfile out;
    const double R = m.radius;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < m.r.size(); ++i) {
        if (m.r[i] <= 0.25 * R || m.r[i] >= 0.75 * R) continue;
        const double d = m.u[i] * m.u[i] + m.v[i] * m.v[i];
        if (!(d > 0.0)) continue;
        const double y = std::log(d);
        sx += m.r[i];
        sy += y;
        sxx += m.r[i] * m.r[i];
        sxy += m.r[i] * y;
        ++cnt;
    }
    if (cnt < 8) throw convergence_error("agmon_decay_profile: too few usable samples");
    out.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    out.boundary_mass_fraction = boundary_mass_fraction(m, 4.0 / am);
    const double gamma = std::sqrt(1.0 - (m.energy / am) * (m.energy / am)) - 0.1;
    if (gamma > 0.0 && out.slope < 2.0 * gamma * am * 0.95)
        throw verification_error("agmon_decay_profile: decay slower than the localization bound");
    return out;
}

/// Reference ladder: squares of spherical Bessel zeros with the spinor
/// degeneracy 2(2l+1), multiplicity-expanded and ascending.  These are the
/// large-mass limits of (mu_n(m) - m) * 2m.
inline std::vector<double> dirichlet_reference_expanded(double R, int count) {
    std::vector<std::pair<double, int>> levels;  // (value, degeneracy)
    for (int l = 0; l <= 12; ++l) {
        for (int nz = 1; nz <= 8; ++nz) {
            const double z = spherical_bessel_j_zero(l, nz) / R;
            levels.emplace_back(z * z, 2 * (2 * l + 1));
        }
    }
    std::sort(levels.begin(), levels.end());
    std::vector<double> out;
    for (const auto& [v, d] : levels) {
        for (int i = 0; i < d && static_cast<int>(out.size()) < count; ++i) out.push_back(v);
        if (static_cast<int>(out.size()) >= count) break;
    }
    return out;
}

}  // namespace mitbag

#endif
