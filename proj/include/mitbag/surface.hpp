#ifndef MITBAG_SURFACE_HPP
#define MITBAG_SURFACE_HPP

/** \file surface.hpp
 *  Surfaces of revolution: analytic sphere/spheroid points with Weingarten
 *  data (principal curvatures, kappa = trace, K = det), general profiles with
 *  finite-difference curvature, staggered polar grids with exact frustum ring
 *  areas, and the tubular coordinate weight 1 - t*kappa + t^2*K.
 */

#include <fstream>
#include <functional>
#include <ostream>

#include "mitbag/clifford.hpp"
#include "mitbag/common.hpp"

namespace mitbag {

struct SurfacePoint {
    Vec3 position{};
    Vec3 normal{};      // outward unit normal
    double kappa = 0.0;  // trace of the Weingarten map
    double gauss = 0.0;  // determinant of the Weingarten map
    double lambda_meridian = 0.0;
    double lambda_parallel = 0.0;
};

inline SurfacePoint sphere_point(double R, double theta, double phi) {
    if (!(R > 0.0)) throw std::invalid_argument("sphere_point: radius must be positive");
    const double st = std::sin(theta), ct = std::cos(theta);
    SurfacePoint p;
    p.position = {R * st * std::cos(phi), R * st * std::sin(phi), R * ct};
    p.normal = {st * std::cos(phi), st * std::sin(phi), ct};
    p.lambda_meridian = 1.0 / R;
    p.lambda_parallel = 1.0 / R;
    p.kappa = 2.0 / R;
    p.gauss = 1.0 / (R * R);
    return p;
}

/// Spheroid x = (a sin t cos p, a sin t sin p, c cos t).  Principal curvatures
/// from the fundamental forms: meridian a c / w^3, parallel c / (a w) with
/// w^2 = a^2 cos^2 t + c^2 sin^2 t.  Both poles are umbilic with value c/a^2.
inline SurfacePoint spheroid_point(double a, double c, double theta, double phi) {
    if (!(a > 0.0) || !(c > 0.0)) throw std::invalid_argument("spheroid_point: semi-axes must be positive");
    const double st = std::sin(theta), ct = std::cos(theta);
    const double w = std::sqrt(a * a * ct * ct + c * c * st * st);
    SurfacePoint p;
    p.position = {a * st * std::cos(phi), a * st * std::sin(phi), c * ct};
    p.normal = {c * st * std::cos(phi) / w, c * st * std::sin(phi) / w, a * ct / w};
    p.lambda_meridian = a * c / (w * w * w);
    p.lambda_parallel = c / (a * w);
    p.kappa = p.lambda_meridian + p.lambda_parallel;
    p.gauss = p.lambda_meridian * p.lambda_parallel;
    return p;
}

struct TubularWeight {
    double t = 0.0;
    double value = 1.0;
};

/// Exact quadratic collar weight 1 - t*kappa + t^2*K; cross-checked against
/// det(Id - t L) = (1 - t l')(1 - t l'').
inline TubularWeight tubular_weight(const SurfacePoint& p, double t) {
    if (t < 0.0) throw std::invalid_argument("tubular_weight: t must be >= 0");
    TubularWeight w;
    w.t = t;
    w.value = 1.0 - t * p.kappa + t * t * p.gauss;
    const double det = (1.0 - t * p.lambda_meridian) * (1.0 - t * p.lambda_parallel);
    if (std::abs(w.value - det) > 1e-14 * std::max(1.0, std::abs(det)))
        throw verification_error("tubular_weight: quadratic form disagrees with det(Id - tL)");
    return w;
}

/// Generatrix description of a surface of revolution.  Sphere and spheroid
/// carry analytic curvature; a general profile (r(t), z(t)) uses centered
/// differences for the Weingarten data.
class SurfaceOfRevolution {
  public:
    static SurfaceOfRevolution sphere(double R) {
        SurfaceOfRevolution s;
        s.kind_ = Kind::Sphere;
        s.a_ = R;
        s.c_ = R;
        return s;
    }
    static SurfaceOfRevolution spheroid(double a, double c) {
        SurfaceOfRevolution s;
        s.kind_ = Kind::Spheroid;
        s.a_ = a;
        s.c_ = c;
        return s;
    }
    static SurfaceOfRevolution profile(std::function<std::array<double, 2>(double)> rz) {
        SurfaceOfRevolution s;
        s.kind_ = Kind::Profile;
        s.rz_ = std::move(rz);
        return s;
    }

    bool is_sphere() const { return kind_ == Kind::Sphere; }
    double sphere_radius() const { return a_; }
    double semi_axis_a() const { return a_; }
    double semi_axis_c() const { return c_; }

    /// (r, z) of the generatrix.
    std::array<double, 2> rz(double theta) const {
        switch (kind_) {
            case Kind::Sphere:
            case Kind::Spheroid:
                return {a_ * std::sin(theta), c_ * std::cos(theta)};
            case Kind::Profile:
                return rz_(theta);
        }
        throw std::logic_error("unreachable");
    }

    /// Arc-length density |d(generatrix)/d theta|.
    double arc(double theta) const {
        switch (kind_) {
            case Kind::Sphere:
                return a_;
            case Kind::Spheroid: {
                const double st = std::sin(theta), ct = std::cos(theta);
                return std::sqrt(a_ * a_ * ct * ct + c_ * c_ * st * st);
            }
            case Kind::Profile: {
                const double h = fd_step_;
                const auto pm = rz_(theta - h), pp = rz_(theta + h);
                return std::hypot(pp[0] - pm[0], pp[1] - pm[1]) / (2.0 * h);
            }
        }
        throw std::logic_error("unreachable");
    }

    SurfacePoint point(double theta, double phi = 0.0) const {
        switch (kind_) {
            case Kind::Sphere:
                return sphere_point(a_, theta, phi);
            case Kind::Spheroid:
                return spheroid_point(a_, c_, theta, phi);
            case Kind::Profile:
                return profile_point(theta, phi);
        }
        throw std::logic_error("unreachable");
    }

  private:
    enum class Kind { Sphere, Spheroid, Profile };

    SurfacePoint profile_point(double theta, double phi) const {
        const double h = fd_step_;
        const auto p0 = rz_(theta);
        const auto pm = rz_(theta - h), pp = rz_(theta + h);
        const double rp = (pp[0] - pm[0]) / (2.0 * h);
        const double zp = (pp[1] - pm[1]) / (2.0 * h);
        const double rpp = (pp[0] - 2.0 * p0[0] + pm[0]) / (h * h);
        const double zpp = (pp[1] - 2.0 * p0[1] + pm[1]) / (h * h);
        const double ell = std::hypot(rp, zp);
        const double nrho = -zp / ell;
        const double nz = rp / ell;
        SurfacePoint p;
        p.position = {p0[0] * std::cos(phi), p0[0] * std::sin(phi), p0[1]};
        p.normal = {nrho * std::cos(phi), nrho * std::sin(phi), nz};
        p.lambda_meridian = (rpp * zp - zpp * rp) / (ell * ell * ell);
        p.lambda_parallel = -zp / (p0[0] * ell);
        p.kappa = p.lambda_meridian + p.lambda_parallel;
        p.gauss = p.lambda_meridian * p.lambda_parallel;
        return p;
    }

    Kind kind_ = Kind::Sphere;
    double a_ = 1.0;
    double c_ = 1.0;
    std::function<std::array<double, 2>(double)> rz_;
    double fd_step_ = 1.2e-4;
};

/// Staggered polar grid on a closed surface of revolution: nodes at
/// theta_i = (i + 1/2) pi / n, ring weights are exact frustum areas of the
/// revolved generatrix chords, so the weights sum to the closed-surface area
/// up to the chord error.
struct SurfaceGrid {
    SurfaceOfRevolution surface = SurfaceOfRevolution::sphere(1.0);
    int n_theta = 0;
    int m_max = 0;  // azimuthal mode budget
    std::vector<double> theta;
    std::vector<SurfacePoint> points;
    std::vector<double> dGamma;

    static SurfaceGrid build(const SurfaceOfRevolution& s, int n_theta, int m_max = 0) {
        if (n_theta < 4) throw std::invalid_argument("SurfaceGrid: need at least 4 polar nodes");
        SurfaceGrid g;
        g.surface = s;
        g.n_theta = n_theta;
        g.m_max = m_max;
        const double d = kPi / n_theta;
        g.theta.resize(n_theta);
        g.points.resize(n_theta);
        g.dGamma.resize(n_theta);
        for (int i = 0; i < n_theta; ++i) {
            const double th = (i + 0.5) * d;
            g.theta[i] = th;
            g.points[i] = s.point(th);
            const auto lo = s.rz(th - 0.5 * d);
            const auto hi = s.rz(th + 0.5 * d);
            const double slant = std::hypot(hi[0] - lo[0], hi[1] - lo[1]);
            g.dGamma[i] = kPi * (lo[0] + hi[0]) * slant;
            if (dot(g.points[i].position, g.points[i].normal) <= 0.0)
                throw verification_error("SurfaceGrid: normal not outward");
        }
        return g;
    }

    double total_area() const {
        double s = 0.0;
        for (double w : dGamma) s += w;
        return s;
    }

    /// Gauss curvature integral; 4 pi for any closed genus-0 grid.
    double gauss_integral() const {
        double s = 0.0;
        for (int i = 0; i < n_theta; ++i) s += points[i].gauss * dGamma[i];
        return s;
    }

    void write_csv(std::ostream& os) const {
        os << "theta,r,z,kappa,gauss,dGamma\n";
        for (int i = 0; i < n_theta; ++i) {
            const auto rz = surface.rz(theta[i]);
            os << theta[i] << ',' << rz[0] << ',' << rz[1] << ',' << points[i].kappa << ','
               << points[i].gauss << ',' << dGamma[i] << '\n';
        }
    }
};

/// min over grid nodes of kappa^2/4 - K = (l' - l'')^2 / 4 >= 0.
inline double curvature_bound_defect(const SurfaceGrid& grid) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : grid.points) m = std::min(m, 0.25 * p.kappa * p.kappa - p.gauss);
    return m;
}

}  // namespace mitbag

#endif
