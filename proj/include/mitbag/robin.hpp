#ifndef MITBAG_ROBIN_HPP
#define MITBAG_ROBIN_HPP

/** \file robin.hpp
 *  The 1D model operator on (0, 1/hbar):
 *      H u = -a^{-1} (a u')',   a(tau) = 1 - hbar^2 kappa tau + hbar^4 K tau^2,
 *  with the Robin condition (d/dtau + 1 - hbar^2 kappa / 2) u(0) = 0 imposed
 *  weakly through the form and a Dirichlet end at tau = 1/hbar.  Ground data:
 *      lambda_1 = -1 + hbar^4 (K - kappa^2/4) + O(hbar^6),
 *      u ~ sqrt(2) e^{-tau} in weighted H^1, within O(hbar^2).
 */

#include <algorithm>
#include <cmath>

#include "mitbag/eigensolvers.hpp"
#include "mitbag/fit.hpp"

namespace mitbag {

struct ModelParams {
    double hbar = 0.2;
    double kappa = 0.0;
    double gauss = 0.0;
    double curvature_bound = 4.0;  // C0: |kappa|, |K| < C0

    double weight(double tau) const {
        const double h2 = hbar * hbar;
        return 1.0 - h2 * kappa * tau + h2 * h2 * gauss * tau * tau;
    }

    std::pair<double, double> weight_range() const {
        const double L = 1.0 / hbar;
        double wmin = std::min(weight(0.0), weight(L));
        double wmax = std::max(weight(0.0), weight(L));
        const double h4K = hbar * hbar * hbar * hbar * gauss;
        if (h4K != 0.0) {
            const double tv = hbar * hbar * kappa / (2.0 * h4K);
            if (tv > 0.0 && tv < L) {
                wmin = std::min(wmin, weight(tv));
                wmax = std::max(wmax, weight(tv));
            }
        }
        return {wmin, wmax};
    }

    /// The semiclassical smallness regime keeps the weight within (1/2, 3/2);
    /// larger hbar values are still solvable as long as the weight stays
    /// elliptic, and the expansion checks report against this flag.
    bool within_smallness_band() const {
        const auto [wmin, wmax] = weight_range();
        return wmin > 0.5 && wmax < 1.5;
    }

    void validate() const {
        if (!(hbar > 0.0)) throw std::invalid_argument("ModelParams: hbar must be positive");
        if (!(std::abs(kappa) < curvature_bound) || !(std::abs(gauss) < curvature_bound))
            throw std::invalid_argument("ModelParams: curvatures exceed the stated bound");
        const auto [wmin, wmax] = weight_range();
        if (!(wmin > 0.05) || !(wmax < 3.0))
            throw std::invalid_argument("ModelParams: weight degenerates on the interval");
    }
};

struct ModelEigenpair {
    double lambda = 0.0;
    std::vector<double> tau;  // nodes 0..N (last one is the Dirichlet end)
    std::vector<double> u;    // u[N] = 0; normalized in L2(a dtau), u(0) > 0
};

namespace detail {

struct RobinPencil {
    std::vector<double> diag, off;  // scaled tridiagonal, size N (DOFs 0..N-1)
    std::vector<double> mass;       // lumped weighted masses
    double h = 0.0;
};

struct RobinAssemblyOptions {
    bool freeze_parameters = false;  // drop every kappa/K dependence (test hook)
};

inline RobinPencil assemble_robin(const ModelParams& p, int N, const RobinAssemblyOptions& opts = {}) {
    p.validate();
    if (N < 500) throw std::invalid_argument("solve_model: need N >= 500");
    RobinPencil out;
    const double L = 1.0 / p.hbar;
    const double h = L / N;
    out.h = h;
    auto a = [&](double tau) { return opts.freeze_parameters ? 1.0 : p.weight(tau); };
    std::vector<double> S_diag(N, 0.0), S_off(N - 1, 0.0), M(N, 0.0);
    for (int i = 0; i < N; ++i) {
        const double amid = a((i + 0.5) * h);
        const double k = amid / h;
        S_diag[i] += k;
        if (i + 1 < N) {
            S_diag[i + 1] += k;
            S_off[i] -= k;
        }
        // interval (N-1, N) only loads the diagonal of DOF N-1 (u_N = 0)
    }
    const double robin = -1.0 + (opts.freeze_parameters ? 0.0 : 0.5 * p.hbar * p.hbar * p.kappa);
    S_diag[0] += robin;
    M[0] = 0.5 * h * a(0.0);
    for (int i = 1; i < N; ++i) M[i] = h * a(i * h);
    out.diag.resize(N);
    out.off.resize(N - 1);
    for (int i = 0; i < N; ++i) out.diag[i] = S_diag[i] / M[i];
    for (int i = 0; i + 1 < N; ++i) out.off[i] = S_off[i] / std::sqrt(M[i] * M[i + 1]);
    out.mass = std::move(M);
    return out;
}

}  // namespace detail

/// k lowest eigenpairs of the model operator on an N-interval grid.
inline std::vector<ModelEigenpair> solve_model(const ModelParams& p, int N, int k,
                                               const detail::RobinAssemblyOptions& opts = {}) {
    const auto pencil = detail::assemble_robin(p, N, opts);
    const auto eig = eig_sym_tridiag(pencil.diag, pencil.off, k, true);
    std::vector<ModelEigenpair> out(k);
    const double h = pencil.h;
    for (int j = 0; j < k; ++j) {
        ModelEigenpair& ep = out[j];
        ep.lambda = eig.eigenvalues[j];
        ep.tau.resize(N + 1);
        ep.u.assign(N + 1, 0.0);
        double m_norm = 0.0;
        for (int i = 0; i < N; ++i) {
            ep.tau[i] = i * h;
            ep.u[i] = eig.eigenvectors[j][i].real() / std::sqrt(pencil.mass[i]);
        }
        ep.tau[N] = N * h;
        for (int i = 0; i < N; ++i) m_norm += pencil.mass[i] * ep.u[i] * ep.u[i];
        double s = 1.0 / std::sqrt(m_norm);
        if (ep.u[0] < 0.0) s = -s;
        for (auto& v : ep.u) v *= s;
    }
    return out;
}

/// Richardson-extrapolated lowest-k eigenvalues from grids N and 2N.
inline std::vector<double> solve_model_levels(const ModelParams& p, int N, int k,
                                              const detail::RobinAssemblyOptions& opts = {}) {
    const auto pc = detail::assemble_robin(p, N, opts);
    const auto pf = detail::assemble_robin(p, 2 * N, opts);
    const auto a = eig_sym_tridiag(pc.diag, pc.off, k, false);
    const auto b = eig_sym_tridiag(pf.diag, pf.off, k, false);
    std::vector<double> out(k);
    for (int j = 0; j < k; ++j) out[j] = (4.0 * b.eigenvalues[j] - a.eigenvalues[j]) / 3.0;
    return out;
}

struct RobinSweepRow {
    double hbar = 0.0;
    double kappa = 0.0;
    double gauss = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double predicted = 0.0;  // -1 + hbar^4 (K - kappa^2/4)
    double residual = 0.0;
    double h1_distance = 0.0;
    double bo_correction = 0.0;
};

/// Weighted-H1 distance of the computed ground state to sqrt(2) e^{-tau}.
inline double ground_state_distance(const ModelParams& p, int N) {
    const auto pairs = solve_model(p, N, 1);
    const auto& ep = pairs[0];
    const double h = ep.tau[1] - ep.tau[0];
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < ep.u.size(); ++i) {
        const double tm = 0.5 * (ep.tau[i] + ep.tau[i + 1]);
        const double am = p.weight(tm);
        const double du = (ep.u[i + 1] - ep.u[i]) / h;
        const double dpsi = -std::sqrt(2.0) * std::exp(-tm);
        acc += am * h * (du - dpsi) * (du - dpsi);
        const double um = 0.5 * (ep.u[i] + ep.u[i + 1]);
        const double psim = std::sqrt(2.0) * std::exp(-tm);
        acc += am * h * (um - psim) * (um - psim);
    }
    return std::sqrt(acc);
}

/// Parametric Born-Oppenheimer proxy || du/dkappa + du/dK ||^2 in L2(a dtau),
/// by central differences; the differencing step is validated by halving.
inline double born_oppenheimer_correction(const ModelParams& p, double dkappa, double dK, int N,
                                          bool freeze_parameters = false) {
    if (!(dkappa > 0.0) || !(dK > 0.0))
        throw std::invalid_argument("born_oppenheimer_correction: steps must be positive");
    detail::RobinAssemblyOptions opts;
    opts.freeze_parameters = freeze_parameters;
    auto solve_u = [&](double kap, double gau) {
        ModelParams q = p;
        q.kappa = kap;
        q.gauss = gau;
        return solve_model(q, N, 1, opts)[0].u;
    };
    auto value_for_steps = [&](double dk_, double dK_) {
        const auto ukp = solve_u(p.kappa + dk_, p.gauss);
        const auto ukm = solve_u(p.kappa - dk_, p.gauss);
        const auto uKp = solve_u(p.kappa, p.gauss + dK_);
        const auto uKm = solve_u(p.kappa, p.gauss - dK_);
        const double h = 1.0 / (p.hbar * N);
        double acc = 0.0;
        for (std::size_t i = 0; i < ukp.size(); ++i) {
            const double g = (ukp[i] - ukm[i]) / (2.0 * dk_) + (uKp[i] - uKm[i]) / (2.0 * dK_);
            const double w = (i == 0 || i + 1 == ukp.size()) ? 0.5 * h : h;
            acc += w * p.weight(i * h) * g * g;
        }
        return acc;
    };
    const double coarse = value_for_steps(dkappa, dK);
    const double fine = value_for_steps(0.5 * dkappa, 0.5 * dK);
    const double scale = std::max(fine, 1e-18);
    if (std::abs(coarse - fine) > 0.5 * scale && fine > 1e-16)
        throw std::invalid_argument("born_oppenheimer_correction: differencing step too large");
    return fine;
}

/// Sweep verification of the ground-eigenvalue expansion: fits the residual
/// |lambda_1 - (-1 + hbar^4 (K - kappa^2/4))| over the hbar sweep and checks
/// the spectral gap lambda_2 >= -1/2 at the smallest hbar.
inline AsymptoticReport check_expansion(const std::vector<double>& hbars, double kappa, double gauss,
                                        int N0 = 3000, std::vector<RobinSweepRow>* rows_out = nullptr) {
    if (hbars.size() < 2) throw std::invalid_argument("check_expansion: sweep too short");
    for (std::size_t i = 0; i + 1 < hbars.size(); ++i)
        if (!(hbars[i] > hbars[i + 1])) throw std::invalid_argument("check_expansion: sweep must descend");
    AsymptoticReport rep;
    rep.theorem_id = "robin-ground-expansion";
    rep.sweep = hbars;
    rep.residual_names = {"|lambda1 - predicted|", "lambda2"};
    rep.residuals.assign(2, {});
    double lambda2_smallest = 0.0;
    for (double hb : hbars) {
        ModelParams p;
        p.hbar = hb;
        p.kappa = kappa;
        p.gauss = gauss;
        const auto lam = solve_model_levels(p, N0, 2);
        const double predicted = -1.0 + std::pow(hb, 4) * (gauss - 0.25 * kappa * kappa);
        const double resid = std::abs(lam[0] - predicted);
        rep.residuals[0].push_back(resid);
        rep.residuals[1].push_back(lam[1]);
        lambda2_smallest = lam[1];
        if (rows_out) {
            RobinSweepRow row;
            row.hbar = hb;
            row.kappa = kappa;
            row.gauss = gauss;
            row.lambda1 = lam[0];
            row.lambda2 = lam[1];
            row.predicted = predicted;
            row.residual = resid;
            rows_out->push_back(row);
        }
    }
    const auto fit = fit_order(hbars, rep.residuals[0]);
    rep.fitted_order = fit.order;
    rep.fitted_constant = fit.constant;
    rep.tolerance_note = "order >= 5.5; lambda2 >= -0.5 at smallest hbar";
    rep.pass = fit.order >= 5.5 && lambda2_smallest >= -0.5;
    rep.stamp_hash();
    return rep;
}

}  // namespace mitbag

#endif
