#ifndef MITBAG_EIGENSOLVERS_HPP
#define MITBAG_EIGENSOLVERS_HPP

/** \file eigensolvers.hpp
 *  Self-contained eigenvalue kernels:
 *   - symmetric banded / tridiagonal matrices: bisection on LDL^T inertia
 *     counts (Sturm sequence for half-bandwidth 1), inverse iteration for
 *     eigenvectors of tridiagonal problems;
 *   - dense complex Hermitian matrices: cyclic Jacobi, optionally generalized
 *     with a positive definite mass matrix through its Cholesky factor.
 */

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "mitbag/common.hpp"

namespace mitbag {

struct EigenDecomposition {
    std::vector<double> eigenvalues;                 // ascending
    std::vector<std::vector<cplx>> eigenvectors;     // column per eigenvalue, may be empty
    double residual_norm = 0.0;                      // max_i ||A v - lambda B v|| / ||A||
};

/// Symmetric real band matrix, upper storage: at(d, i) = A[i][i+d].
class SymBandMatrix {
  public:
    SymBandMatrix(int n, int hbw) : n_(n), hbw_(hbw), a_(static_cast<std::size_t>(n) * (hbw + 1), 0.0) {}

    int size() const { return n_; }
    int half_bandwidth() const { return hbw_; }

    double& at(int d, int i) { return a_[static_cast<std::size_t>(d) * n_ + i]; }
    double at(int d, int i) const { return a_[static_cast<std::size_t>(d) * n_ + i]; }

    /// Symmetric accumulate of A[i][j] += v (|i-j| <= hbw).
    void add(int i, int j, double v) {
        if (j < i) std::swap(i, j);
        const int d = j - i;
        if (d > hbw_) throw std::invalid_argument("SymBandMatrix::add outside band");
        at(d, i) += v;
    }

    double element(int i, int j) const {
        if (j < i) std::swap(i, j);
        const int d = j - i;
        if (d > hbw_) return 0.0;
        return at(d, i);
    }

    /// Infinity norm, used as the scale for tolerances.
    double norm_inf() const {
        double m = 0.0;
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            for (int j = std::max(0, i - hbw_); j <= std::min(n_ - 1, i + hbw_); ++j)
                s += std::abs(element(i, j));
            m = std::max(m, s);
        }
        return m;
    }

    /// Gershgorin interval containing the whole spectrum.
    std::pair<double, double> gershgorin() const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int i = 0; i < n_; ++i) {
            double r = 0.0;
            for (int j = std::max(0, i - hbw_); j <= std::min(n_ - 1, i + hbw_); ++j)
                if (j != i) r += std::abs(element(i, j));
            lo = std::min(lo, at(0, i) - r);
            hi = std::max(hi, at(0, i) + r);
        }
        return {lo, hi};
    }

  private:
    int n_;
    int hbw_;
    std::vector<double> a_;
};

namespace detail {

/// Number of eigenvalues of A strictly below sigma, from the inertia of the
/// LDL^T factorization of A - sigma I.  Tiny pivots are pushed to -tiny so a
/// shift landing on an eigenvalue cannot stall the bisection.
inline int band_negcount(const SymBandMatrix& A, double sigma, double pivot_floor) {
    const int n = A.size();
    const int b = A.half_bandwidth();
    std::vector<double> d(n, 0.0);
    std::vector<double> L(static_cast<std::size_t>(n) * b, 0.0);  // L[i*b + (i-k-1)] = L[i][k]
    int count = 0;
    for (int i = 0; i < n; ++i) {
        const int k0 = std::max(0, i - b);
        for (int k = k0; k < i; ++k) {
            double s = A.element(i, k);
            for (int j = std::max(k0, k - b); j < k; ++j)
                s -= L[static_cast<std::size_t>(i) * b + (i - j - 1)] * d[j] *
                     L[static_cast<std::size_t>(k) * b + (k - j - 1)];
            L[static_cast<std::size_t>(i) * b + (i - k - 1)] = s / d[k];
        }
        double di = A.at(0, i) - sigma;
        for (int j = k0; j < i; ++j) {
            const double lij = L[static_cast<std::size_t>(i) * b + (i - j - 1)];
            di -= lij * lij * d[j];
        }
        if (std::abs(di) < pivot_floor) di = -pivot_floor;
        if (di < 0.0) ++count;
        d[i] = di;
    }
    return count;
}

}  // namespace detail

/// Eigenvalues number idx_lo..idx_hi (0-based, ascending order) of a symmetric
/// band matrix, each located by inertia-count bisection to abs_tol.
inline std::vector<double> band_eigenvalues_by_index(const SymBandMatrix& A, int idx_lo, int idx_hi,
                                                     double abs_tol = 0.0) {
    const int n = A.size();
    if (idx_lo < 0 || idx_hi >= n || idx_lo > idx_hi)
        throw std::invalid_argument("band_eigenvalues_by_index: bad index range");
    auto [glo, ghi] = A.gershgorin();
    const double scale = std::max({std::abs(glo), std::abs(ghi), 1e-300});
    const double pivot_floor = scale * std::numeric_limits<double>::epsilon() * 1e-3;
    if (abs_tol <= 0.0) abs_tol = scale * 1e-13;
    glo -= scale * 1e-12;
    ghi += scale * 1e-12;

    const int m = idx_hi - idx_lo + 1;
    std::vector<double> lo(m, glo), hi(m, ghi), out(m);
    for (int j = 0; j < m; ++j) {
        for (int it = 0; it < 120 && (hi[j] - lo[j]) > abs_tol; ++it) {
            const double mid = 0.5 * (lo[j] + hi[j]);
            const int c = detail::band_negcount(A, mid, pivot_floor);
            // each count evaluation bounds every remaining target as well
            for (int r = j; r < m; ++r) {
                if (c <= idx_lo + r)
                    lo[r] = std::max(lo[r], mid);
                else
                    hi[r] = std::min(hi[r], mid);
            }
        }
        out[j] = 0.5 * (lo[j] + hi[j]);
    }
    return out;
}

/// All eigenvalues in [lo, hi), ascending.
inline std::vector<double> band_eigenvalues_in_window(const SymBandMatrix& A, double lo, double hi,
                                                      double abs_tol = 0.0) {
    const double scale = std::max(A.norm_inf(), 1e-300);
    const double pivot_floor = scale * std::numeric_limits<double>::epsilon() * 1e-3;
    const int c_lo = detail::band_negcount(A, lo, pivot_floor);
    const int c_hi = detail::band_negcount(A, hi, pivot_floor);
    if (c_hi <= c_lo) return {};
    return band_eigenvalues_by_index(A, c_lo, c_hi - 1, abs_tol);
}

inline int band_count_below(const SymBandMatrix& A, double sigma) {
    const double scale = std::max(A.norm_inf(), 1e-300);
    return detail::band_negcount(A, sigma, scale * std::numeric_limits<double>::epsilon() * 1e-3);
}

namespace detail {

/// One inverse-iteration solve (T - lambda I) x = rhs for tridiagonal T given
/// by (d, e), with partial pivoting (two superdiagonals of fill).
inline void tridiag_shifted_solve(const std::vector<double>& d, const std::vector<double>& e,
                                  double lambda, std::vector<double>& x) {
    const int n = static_cast<int>(d.size());
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0);  // diag, super1, super2 of U
    std::vector<double> sub(n, 0.0);                      // subdiagonal workspace
    for (int i = 0; i < n; ++i) {
        a[i] = d[i] - lambda;
        if (i + 1 < n) {
            b[i] = e[i];
            sub[i] = e[i];
        }
    }
    const double tiny = 1e-300;
    // forward elimination with row swaps
    for (int i = 0; i + 1 < n; ++i) {
        if (std::abs(sub[i]) > std::abs(a[i])) {
            std::swap(a[i], sub[i]);
            std::swap(b[i], a[i + 1]);
            if (i + 2 < n) std::swap(c[i], b[i + 1]);
            std::swap(x[i], x[i + 1]);
        }
        if (std::abs(a[i]) < tiny) a[i] = tiny;
        const double m = sub[i] / a[i];
        a[i + 1] -= m * b[i];
        if (i + 2 < n) b[i + 1] -= m * c[i];
        x[i + 1] -= m * x[i];
    }
    if (std::abs(a[n - 1]) < tiny) a[n - 1] = tiny;
    // back substitution
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        if (i + 1 < n) s -= b[i] * x[i + 1];
        if (i + 2 < n) s -= c[i] * x[i + 2];
        x[i] = s / a[i];
    }
}

}  // namespace detail

/// Eigenvector of a symmetric tridiagonal matrix by inverse iteration.
inline std::vector<double> tridiag_eigenvector(const std::vector<double>& d, const std::vector<double>& e,
                                               double lambda) {
    const int n = static_cast<int>(d.size());
    std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(n));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = uni(rng);
    for (int it = 0; it < 4; ++it) {
        detail::tridiag_shifted_solve(d, e, lambda, x);
        double nrm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
        if (!(nrm > 0.0) || !std::isfinite(nrm)) throw convergence_error("tridiag_eigenvector: breakdown");
        for (auto& v : x) v /= nrm;
    }
    return x;
}

/// k smallest eigenpairs of a symmetric tridiagonal matrix.
/// diag has size n, offdiag size n-1.  Eigenvectors within a numerically
/// degenerate cluster are re-orthogonalized.
inline EigenDecomposition eig_sym_tridiag(const std::vector<double>& diag, const std::vector<double>& offdiag,
                                          int k, bool want_vectors = true) {
    const int n = static_cast<int>(diag.size());
    if (n < 1 || static_cast<int>(offdiag.size()) != n - 1)
        throw std::invalid_argument("eig_sym_tridiag: inconsistent sizes");
    if (k < 1 || k > n) throw std::invalid_argument("eig_sym_tridiag: bad k");

    SymBandMatrix T(n, n > 1 ? 1 : 0);
    for (int i = 0; i < n; ++i) T.at(0, i) = diag[i];
    for (int i = 0; i + 1 < n && n > 1; ++i) T.at(1, i) = offdiag[i];

    EigenDecomposition out;
    out.eigenvalues = band_eigenvalues_by_index(T, 0, k - 1);
    if (want_vectors) {
        const double scale = std::max(T.norm_inf(), 1e-300);
        std::vector<std::vector<double>> vecs;
        for (int j = 0; j < k; ++j) {
            auto v = tridiag_eigenvector(diag, offdiag, out.eigenvalues[j]);
            // re-orthogonalize against earlier members of the same cluster
            for (int p = j - 1; p >= 0; --p) {
                if (std::abs(out.eigenvalues[j] - out.eigenvalues[p]) > 1e-7 * scale) break;
                const double dot = std::inner_product(v.begin(), v.end(), vecs[p].begin(), 0.0);
                for (int i = 0; i < n; ++i) v[i] -= dot * vecs[p][i];
            }
            double nrm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
            if (!(nrm > 1e-8)) {
                // cluster starvation: retry from the solver with a nudged shift
                v = tridiag_eigenvector(diag, offdiag, out.eigenvalues[j] * (1.0 + 1e-12) + 1e-305);
                for (int p = j - 1; p >= 0; --p) {
                    if (std::abs(out.eigenvalues[j] - out.eigenvalues[p]) > 1e-7 * scale) break;
                    const double dot = std::inner_product(v.begin(), v.end(), vecs[p].begin(), 0.0);
                    for (int i = 0; i < n; ++i) v[i] -= dot * vecs[p][i];
                }
                nrm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
                if (!(nrm > 0.0)) throw convergence_error("eig_sym_tridiag: degenerate cluster breakdown");
            }
            for (auto& c : v) c /= nrm;
            vecs.push_back(std::move(v));
        }
        double max_res = 0.0;
        for (int j = 0; j < k; ++j) {
            double r2 = 0.0;
            for (int i = 0; i < n; ++i) {
                double t = (diag[i] - out.eigenvalues[j]) * vecs[j][i];
                if (i > 0) t += offdiag[i - 1] * vecs[j][i - 1];
                if (i + 1 < n) t += offdiag[i] * vecs[j][i + 1];
                r2 += t * t;
            }
            max_res = std::max(max_res, std::sqrt(r2));
        }
        out.residual_norm = max_res / std::max(T.norm_inf(), 1e-300);
        out.eigenvectors.resize(k);
        for (int j = 0; j < k; ++j) {
            out.eigenvectors[j].assign(vecs[j].begin(), vecs[j].end());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dense complex Hermitian path (cyclic Jacobi)
// ---------------------------------------------------------------------------

/// Row-major dense complex matrix with Hermitian use.
class HermitianDense {
  public:
    explicit HermitianDense(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0)) {}

    int size() const { return n_; }
    cplx& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    cplx at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    double hermiticity_defect() const {
        double m = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) m = std::max(m, std::abs(at(i, j) - std::conj(at(j, i))));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (const auto& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

  private:
    int n_;
    std::vector<cplx> a_;
};

namespace detail {

inline void jacobi_hermitian_inplace(HermitianDense& A, std::vector<std::vector<cplx>>* V) {
    const int n = A.size();
    if (V) {
        V->assign(n, std::vector<cplx>(n, cplx(0.0)));
        for (int i = 0; i < n; ++i) (*V)[i][i] = 1.0;  // (*V)[col][row]: column vectors
    }
    const double scale = std::max(A.frobenius(), 1e-300);
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(A.at(p, q));
        if (std::sqrt(off) <= 1e-15 * scale) return;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = A.at(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300) continue;
                const cplx phase = apq / r;  // e^{i phi}
                const double app = A.at(p, p).real();
                const double aqq = A.at(q, q).real();
                const double tau = (app - aqq) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // rotation J: J[p][p]=c, J[p][q]=-s*phase, J[q][p]=s*conj(phase), J[q][q]=c
                for (int i = 0; i < n; ++i) {
                    const cplx aip = A.at(i, p);
                    const cplx aiq = A.at(i, q);
                    A.at(i, p) = c * aip + s * std::conj(phase) * aiq;
                    A.at(i, q) = -s * phase * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const cplx apj = A.at(p, j);
                    const cplx aqj = A.at(q, j);
                    A.at(p, j) = c * apj + s * phase * aqj;
                    A.at(q, j) = -s * std::conj(phase) * apj + c * aqj;
                }
                A.at(p, q) = cplx(0.0);
                A.at(q, p) = cplx(0.0);
                if (V) {
                    for (int i = 0; i < n; ++i) {
                        const cplx vip = (*V)[p][i];
                        const cplx viq = (*V)[q][i];
                        (*V)[p][i] = c * vip + s * std::conj(phase) * viq;
                        (*V)[q][i] = -s * phase * vip + c * viq;
                    }
                }
            }
        }
    }
    throw convergence_error("jacobi_hermitian: not converged in 60 sweeps");
}

/// In-place Cholesky B = L L^*; returns false if not positive definite.
inline bool cholesky_inplace(HermitianDense& B) {
    const int n = B.size();
    for (int j = 0; j < n; ++j) {
        double d = B.at(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(B.at(j, k));
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        B.at(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            cplx s = B.at(i, j);
            for (int k = 0; k < j; ++k) s -= B.at(i, k) * std::conj(B.at(j, k));
            B.at(i, j) = s / ljj;
        }
        for (int i = 0; i < j; ++i) B.at(i, j) = cplx(0.0);
    }
    return true;
}

}  // namespace detail

/// k smallest eigenpairs of A v = lambda v (B absent) or A v = lambda B v with
/// B positive definite.  Dense cyclic Jacobi; intended for moderate sizes.
inline EigenDecomposition eig_hermitian(const HermitianDense& A_in, const std::optional<HermitianDense>& B_in,
                                        int k, bool want_vectors = true) {
    const int n = A_in.size();
    if (k < 1 || k > n) throw std::invalid_argument("eig_hermitian: bad k");
    if (A_in.hermiticity_defect() > 1e-10 * std::max(1.0, A_in.frobenius()))
        throw std::invalid_argument("eig_hermitian: input is not Hermitian");
    HermitianDense A = A_in;
    HermitianDense L(n);
    bool generalized = false;
    if (B_in) {
        if (B_in->size() != n) throw std::invalid_argument("eig_hermitian: dimension mismatch");
        L = *B_in;
        if (!detail::cholesky_inplace(L))
            throw std::invalid_argument("eig_hermitian: mass matrix not positive definite");
        generalized = true;
        // A <- L^{-1} A L^{-H}
        // step 1: Y = L^{-1} A  (forward substitution per column)
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                cplx s = A.at(i, j);
                for (int p = 0; p < i; ++p) s -= L.at(i, p) * A.at(p, j);
                A.at(i, j) = s / L.at(i, i).real();
            }
        }
        // step 2: A <- Y L^{-H}  ==  solve X L^H = Y row-wise
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                cplx s = A.at(i, j);
                for (int p = 0; p < j; ++p) s -= A.at(i, p) * std::conj(L.at(j, p));
                A.at(i, j) = s / L.at(j, j).real();
            }
        }
    }

    std::vector<std::vector<cplx>> V;
    detail::jacobi_hermitian_inplace(A, want_vectors ? &V : nullptr);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = A.at(i, i).real();
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });

    EigenDecomposition out;
    out.eigenvalues.resize(k);
    for (int j = 0; j < k; ++j) out.eigenvalues[j] = vals[order[j]];
    if (want_vectors) {
        out.eigenvectors.resize(k);
        for (int j = 0; j < k; ++j) {
            std::vector<cplx> v = V[order[j]];
            if (generalized) {
                // v <- L^{-H} w (back substitution)
                for (int i = n - 1; i >= 0; --i) {
                    cplx s = v[i];
                    for (int p = i + 1; p < n; ++p) s -= std::conj(L.at(p, i)) * v[p];
                    v[i] = s / L.at(i, i).real();
                }
            }
            out.eigenvectors[j] = std::move(v);
        }
        // residual against the original pencil
        double max_res = 0.0;
        const double anorm = std::max(A_in.frobenius(), 1e-300);
        for (int j = 0; j < k; ++j) {
            const auto& v = out.eigenvectors[j];
            double r2 = 0.0;
            for (int i = 0; i < n; ++i) {
                cplx t(0.0);
                for (int p = 0; p < n; ++p) t += A_in.at(i, p) * v[p];
                if (B_in) {
                    cplx bv(0.0);
                    for (int p = 0; p < n; ++p) bv += B_in->at(i, p) * v[p];
                    t -= out.eigenvalues[j] * bv;
                } else {
                    t -= out.eigenvalues[j] * v[i];
                }
                r2 += std::norm(t);
            }
            double v2 = 0.0;
            for (const auto& z : v) v2 += std::norm(z);
            max_res = std::max(max_res, std::sqrt(r2 / std::max(v2, 1e-300)));
        }
        out.residual_norm = max_res / anorm;
    }
    return out;
}

}  // namespace mitbag

#endif
