#ifndef MITBAG_CLIFFORD_HPP
#define MITBAG_CLIFFORD_HPP

/** \file clifford.hpp
 *  Machine-precision 4x4 Dirac algebra: the alpha/beta/gamma5 matrices, the
 *  confining boundary matrix B(n) = -i beta (alpha.n), its diagonalizer and
 *  rank-two projectors, the discrete symmetries C/T/CT, and the curvature
 *  commutator identity used by the boundary analysis.
 *
 *  Conventions (standard representation):
 *    beta = diag(1,1,-1,-1),  gamma5 = offdiag(1_2; 1_2),
 *    alpha_k = offdiag(sigma_k; sigma_k).
 */

#include <array>
#include <cmath>

#include "mitbag/common.hpp"

namespace mitbag {

struct Spinor {
    std::array<cplx, 4> c{};

    cplx& operator[](int i) { return c[i]; }
    const cplx& operator[](int i) const { return c[i]; }
};

inline cplx inner(const Spinor& a, const Spinor& b) {
    cplx s(0.0);
    for (int i = 0; i < 4; ++i) s += std::conj(a.c[i]) * b.c[i];
    return s;
}

/// Dense 4x4 complex matrix, row-major.
struct SpinorMatrix {
    std::array<cplx, 16> a{};

    cplx& operator()(int i, int j) { return a[4 * i + j]; }
    const cplx& operator()(int i, int j) const { return a[4 * i + j]; }

    static SpinorMatrix zero() { return {}; }
    static SpinorMatrix identity() {
        SpinorMatrix m;
        for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
        return m;
    }

    SpinorMatrix operator+(const SpinorMatrix& o) const {
        SpinorMatrix r;
        for (int i = 0; i < 16; ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }
    SpinorMatrix operator-(const SpinorMatrix& o) const {
        SpinorMatrix r;
        for (int i = 0; i < 16; ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }
    SpinorMatrix operator*(const SpinorMatrix& o) const {
        SpinorMatrix r;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) {
                const cplx aik = (*this)(i, k);
                if (aik == cplx(0.0)) continue;
                for (int j = 0; j < 4; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }
    friend SpinorMatrix operator*(cplx s, const SpinorMatrix& m) {
        SpinorMatrix r;
        for (int i = 0; i < 16; ++i) r.a[i] = s * m.a[i];
        return r;
    }
    Spinor operator*(const Spinor& v) const {
        Spinor r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r.c[i] += (*this)(i, j) * v.c[j];
        return r;
    }

    SpinorMatrix adjoint() const {
        SpinorMatrix r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r(i, j) = std::conj((*this)(j, i));
        return r;
    }

    cplx trace() const { return a[0] + a[5] + a[10] + a[15]; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : a) m = std::max(m, std::abs(z));
        return m;
    }
};

inline double entrywise_distance(const SpinorMatrix& x, const SpinorMatrix& y) { return (x - y).max_abs(); }

using Vec3 = std::array<double, 3>;

inline Vec3 cross(const Vec3& x, const Vec3& y) {
    return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}
inline double dot(const Vec3& x, const Vec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }
inline double norm(const Vec3& x) { return std::sqrt(dot(x, x)); }

/// Unit vector validated on construction (Euclidean norm 1 within 1e-14).
class UnitVector3 {
  public:
    explicit UnitVector3(const Vec3& v) : v_(v) {
        if (std::abs(norm(v) - 1.0) > 1e-14) throw std::invalid_argument("UnitVector3: norm must be 1");
    }
    UnitVector3(double x, double y, double z) : UnitVector3(Vec3{x, y, z}) {}

    const Vec3& vec() const { return v_; }
    double operator[](int i) const { return v_[i]; }
    UnitVector3 operator-() const { return UnitVector3(Vec3{-v_[0], -v_[1], -v_[2]}); }

    /// Normalizing factory for nearly-unit input.
    static UnitVector3 normalized(const Vec3& v) {
        const double n = norm(v);
        if (!(n > 0.0)) throw std::invalid_argument("UnitVector3: zero vector");
        return UnitVector3(Vec3{v[0] / n, v[1] / n, v[2] / n});
    }

  private:
    Vec3 v_;
};

inline const SpinorMatrix& pauli(int k) {
    static const std::array<SpinorMatrix, 3> s = [] {
        std::array<SpinorMatrix, 3> m{};
        m[0](0, 1) = 1.0;
        m[0](1, 0) = 1.0;
        m[1](0, 1) = cplx(0.0, -1.0);
        m[1](1, 0) = cplx(0.0, 1.0);
        m[2](0, 0) = 1.0;
        m[2](1, 1) = -1.0;
        return m;
    }();
    return s[k - 1];
}

inline const SpinorMatrix& dirac_beta() {
    static const SpinorMatrix m = [] {
        SpinorMatrix b;
        b(0, 0) = b(1, 1) = 1.0;
        b(2, 2) = b(3, 3) = -1.0;
        return b;
    }();
    return m;
}

inline const SpinorMatrix& dirac_gamma5() {
    static const SpinorMatrix m = [] {
        SpinorMatrix g;
        g(0, 2) = g(1, 3) = g(2, 0) = g(3, 1) = 1.0;
        return g;
    }();
    return m;
}

inline const SpinorMatrix& dirac_alpha(int k) {
    static const std::array<SpinorMatrix, 3> s = [] {
        std::array<SpinorMatrix, 3> m{};
        for (int k = 1; k <= 3; ++k) {
            const auto& p = pauli(k);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    m[k - 1](i, 2 + j) = p(i, j);
                    m[k - 1](2 + i, j) = p(i, j);
                }
        }
        return m;
    }();
    return s[k - 1];
}

/// alpha . x = sum_k x_k alpha_k ; Hermitian for real x.
inline SpinorMatrix alpha_dot(const Vec3& x) {
    SpinorMatrix r;
    for (int k = 1; k <= 3; ++k) {
        const auto& ak = dirac_alpha(k);
        for (int i = 0; i < 16; ++i) r.a[i] += x[k - 1] * ak.a[i];
    }
    return r;
}

/// 2x2 block sigma . n embedded where needed by the diagonalizer.
inline SpinorMatrix sigma_dot_2x2(const Vec3& x) {
    SpinorMatrix r;
    r(0, 0) = x[2];
    r(0, 1) = cplx(x[0], -x[1]);
    r(1, 0) = cplx(x[0], x[1]);
    r(1, 1) = -x[2];
    return r;
}

/// Confining boundary matrix B(n) = -i beta (alpha . n): Hermitian, B^2 = 1,
/// trace 0, eigenvalues +1 and -1 with multiplicity two each.
inline SpinorMatrix boundary_matrix(const UnitVector3& n) {
    return cplx(0.0, -1.0) * (dirac_beta() * alpha_dot(n.vec()));
}

/// Unitary P_n with blocks [[1, i sigma.n],[i sigma.n, 1]]/sqrt(2) satisfying
/// P_n^{-1} B(n) P_n = beta.
inline SpinorMatrix diagonalizer(const UnitVector3& n) {
    const SpinorMatrix sn = sigma_dot_2x2(n.vec());
    SpinorMatrix p;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 2; ++i) {
        p(i, i) = inv_sqrt2;
        p(2 + i, 2 + i) = inv_sqrt2;
        for (int j = 0; j < 2; ++j) {
            p(i, 2 + j) = cplx(0.0, 1.0) * sn(i, j) * inv_sqrt2;
            p(2 + i, j) = cplx(0.0, 1.0) * sn(i, j) * inv_sqrt2;
        }
    }
    return p;
}

/// (1 - B(n))/2, reproducing the printed sign convention.  Note that this
/// formula projects onto ker(B + 1); the companion projector_minus gives the
/// complementary (1 + B)/2 which projects onto ker(B - 1).
inline SpinorMatrix projector_plus(const UnitVector3& n) {
    const SpinorMatrix b = boundary_matrix(n);
    SpinorMatrix r = SpinorMatrix::identity() - b;
    return cplx(0.5) * r;
}

inline SpinorMatrix projector_minus(const UnitVector3& n) {
    const SpinorMatrix b = boundary_matrix(n);
    SpinorMatrix r = SpinorMatrix::identity() + b;
    return cplx(0.5) * r;
}

enum class DiscreteSymmetry { C, T, CT };

/// Charge conjugation C psi = i beta alpha_2 conj(psi); time reversal
/// T psi = -i gamma5 alpha_2 conj(psi); CT psi = beta gamma5 psi.
inline Spinor discrete_symmetry(DiscreteSymmetry which, const Spinor& psi) {
    Spinor conj_psi;
    for (int i = 0; i < 4; ++i) conj_psi.c[i] = std::conj(psi.c[i]);
    switch (which) {
        case DiscreteSymmetry::C: {
            const SpinorMatrix m = cplx(0.0, 1.0) * (dirac_beta() * dirac_alpha(2));
            return m * conj_psi;
        }
        case DiscreteSymmetry::T: {
            const SpinorMatrix m = cplx(0.0, -1.0) * (dirac_gamma5() * dirac_alpha(2));
            return m * conj_psi;
        }
        case DiscreteSymmetry::CT: {
            return (dirac_beta() * dirac_gamma5()) * psi;
        }
    }
    throw std::logic_error("discrete_symmetry: unreachable");
}

/// Right-handed orthonormal frame (n, n', n'') with n'' x n' = -n, i.e.
/// n' x n'' = n.  Rejects frames violating orthonormality beyond 1e-12.
struct SurfaceFrame {
    UnitVector3 n;
    UnitVector3 t1;  // n'
    UnitVector3 t2;  // n''

    SurfaceFrame(const UnitVector3& normal, const UnitVector3& tp, const UnitVector3& tpp)
        : n(normal), t1(tp), t2(tpp) {
        const double tol = 1e-12;
        if (std::abs(dot(n.vec(), t1.vec())) > tol || std::abs(dot(n.vec(), t2.vec())) > tol ||
            std::abs(dot(t1.vec(), t2.vec())) > tol)
            throw std::invalid_argument("SurfaceFrame: frame not orthogonal");
        const Vec3 c = cross(t2.vec(), t1.vec());
        if (std::abs(c[0] + n[0]) > 1e-10 || std::abs(c[1] + n[1]) > 1e-10 || std::abs(c[2] + n[2]) > 1e-10)
            throw std::invalid_argument("SurfaceFrame: wrong handedness, need n'' x n' = -n");
    }
};

/// M = lp (alpha.n'')(alpha.n') - lpp (alpha.n')(alpha.n''), which collapses to
/// -i (lp + lpp) gamma5 (alpha.n); the collapse is asserted to 1e-13 entrywise.
inline SpinorMatrix curvature_commutator_core(const SurfaceFrame& f, double lp, double lpp) {
    const SpinorMatrix a1 = alpha_dot(f.t1.vec());
    const SpinorMatrix a2 = alpha_dot(f.t2.vec());
    const SpinorMatrix m = (cplx(lp) * (a2 * a1)) - (cplx(lpp) * (a1 * a2));
    const SpinorMatrix expected = cplx(0.0, -(lp + lpp)) * (dirac_gamma5() * alpha_dot(f.n.vec()));
    const double scale = std::max(1.0, std::abs(lp) + std::abs(lpp));
    if (entrywise_distance(m, expected) > 1e-13 * scale)
        throw verification_error("curvature_commutator_core: algebraic identity violated");
    return m;
}

}  // namespace mitbag

#endif
