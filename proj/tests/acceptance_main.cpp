// Acceptance battery: one line per criterion, wall-clock checked against the
// stated budget, exit code = number of red criteria.
//
// C04 encodes the stated second-order target for the lowest positive level
// verbatim.  The computed coefficient converges to half that value (see the
// output line), so the criterion is expected red; it is reported, not patched.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "mitbag/asymptotics.hpp"
#include "mitbag/clifford.hpp"
#include "mitbag/io.hpp"
#include "mitbag/robin.hpp"

using namespace mitbag;

namespace {

struct Outcome {
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

std::string g_cli_path;
int g_failures = 0;

void run_criterion(int id, const std::string& name, double budget_s,
                   const std::function<std::pair<bool, std::string>()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [p, d] = body();
        pass = p;
        detail = d;
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs < budget_s;
    const bool ok = pass && in_budget;
    if (!ok) ++g_failures;
    std::printf("C%02d [%s] %6.2fs (< %.0fs)  %s: %s%s\n", id, ok ? "PASS" : "FAIL", secs, budget_s,
                name.c_str(), detail.c_str(), in_budget ? "" : " [over budget]");
    std::fflush(stdout);
}

double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        if ((fa > 0) == (f(m) > 0)) {
            a = m;
            fa = f(m);
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------- criterion 1
std::pair<bool, std::string> c1_clifford() {
    std::mt19937_64 rng(0xC1);
    std::normal_distribution<double> g(0.0, 1.0);
    auto rv = [&] { return Vec3{g(rng), g(rng), g(rng)}; };
    double worst = 0.0;
    const auto I = SpinorMatrix::identity();
    for (int t = 0; t < 1000; ++t) {
        const Vec3 x = rv(), y = rv();
        const auto ax = alpha_dot(x), ay = alpha_dot(y);
        worst = std::max(worst, entrywise_distance(ax * ay, cplx(dot(x, y)) * I +
                                                                cplx(0, 1) * (dirac_gamma5() * alpha_dot(cross(x, y)))));
        worst = std::max(worst, (dirac_beta() * ax + ax * dirac_beta()).max_abs());
        worst = std::max(worst, (dirac_gamma5() * ax - ax * dirac_gamma5()).max_abs());
        worst = std::max(worst, (dirac_gamma5() * dirac_beta() + dirac_beta() * dirac_gamma5()).max_abs());

        const auto n = UnitVector3::normalized(rv());
        const auto B = boundary_matrix(n);
        worst = std::max(worst, entrywise_distance(B * B, I));
        const auto P = diagonalizer(n);
        worst = std::max(worst, entrywise_distance(P.adjoint() * (B * P), dirac_beta()));

        Spinor psi;
        for (int i = 0; i < 4; ++i) psi[i] = cplx(g(rng), g(rng));
        const auto cc = discrete_symmetry(DiscreteSymmetry::C, discrete_symmetry(DiscreteSymmetry::C, psi));
        const auto tt = discrete_symmetry(DiscreteSymmetry::T, discrete_symmetry(DiscreteSymmetry::T, psi));
        for (int i = 0; i < 4; ++i) {
            worst = std::max(worst, std::abs(cc[i] - psi[i]));
            worst = std::max(worst, std::abs(tt[i] + psi[i]));
        }
        worst = std::max(worst, std::abs(inner(psi, discrete_symmetry(DiscreteSymmetry::T, psi))) /
                                    std::sqrt(std::abs(inner(psi, psi))));

        // curvature commutator on a random right-handed frame
        Vec3 a = rv(), b = rv();
        const double na = norm(a);
        for (auto& q : a) q /= na;
        const double ab = dot(a, b);
        for (int i = 0; i < 3; ++i) b[i] -= ab * a[i];
        const double nb = norm(b);
        for (auto& q : b) q /= nb;
        const SurfaceFrame f(UnitVector3(cross(a, b)), UnitVector3(a), UnitVector3(b));
        const double lp = g(rng), lpp = g(rng);
        const auto M = curvature_commutator_core(f, lp, lpp);
        worst = std::max(worst, entrywise_distance(
                                    M, cplx(0, -(lp + lpp)) * (dirac_gamma5() * alpha_dot(f.n.vec()))) /
                                    std::max(1.0, std::abs(lp) + std::abs(lpp)));
    }
    std::ostringstream os;
    os << "max entrywise defect " << std::scientific << worst << " over 1000 random inputs";
    return {worst <= 1e-13, os.str()};
}

// ---------------------------------------------------------------- criterion 2
std::pair<bool, std::string> c2_massless_ground() {
    auto f = [](double x) { return std::tan(x) - x / (1.0 - x); };
    const double oracle = bisect(f, 1.8, 2.2);
    const auto roots = channel_roots(RadialChannel::make(-1), 0.0, 1.0, 1e-12, 3.0);
    const auto fdm = fdm_levels_extrapolated(RadialChannel::make(-1), 0.0, 1.0, 2000, 3.0);
    if (roots.empty() || fdm.empty()) return {false, "no root found"};
    const double d1 = std::abs(roots[0] - oracle);
    const double d2 = std::abs(fdm[0] - oracle);
    std::ostringstream os;
    os << "root " << std::setprecision(10) << roots[0] << ", |bessel-oracle| = " << std::scientific << d1
       << ", |fdm-oracle| = " << d2;
    return {d1 <= 1e-6 && d2 <= 1e-6, os.str()};
}

// ---------------------------------------------------------------- criterion 3
std::pair<bool, std::string> c3_positive_mass() {
    const auto rep = check_theorem_positive({});
    bool monotone = true;
    for (int n = 0; n < 3; ++n)
        for (std::size_t i = 0; i + 1 < rep.sweep.size(); ++i)
            if (!(rep.residuals[n][i] > rep.residuals[n][i + 1])) monotone = false;
    std::ostringstream os;
    os << "min fitted order " << std::setprecision(3) << rep.fitted_order << ", |m res| monotone="
       << (monotone ? "yes" : "no");
    return {monotone && rep.fitted_order > 0.3, os.str()};
}

// ---------------------------------------------------------------- criterion 4
std::pair<bool, std::string> c4_second_order_coefficient() {
    const double measured = first_level_m2_residual(100.0, 1.0);
    const double target = -kPi * kPi;  // stated reference value
    const bool within = std::abs(measured - target) <= 0.05 * std::abs(target);
    std::ostringstream os;
    os << "m=100: m^2 residual = " << std::setprecision(6) << measured << ", stated target -pi^2 = "
       << target << " (5%)";
    if (!within)
        os << "; computed value sits at -pi^2/2 = " << -0.5 * kPi * kPi
           << " + O(1/m), consistent with the curvature-corrected Robin reduction; the stated "
              "constant appears to carry a factor-2 slip, criterion left red";
    return {within, os.str()};
}

// ---------------------------------------------------------------- criterion 5
std::pair<bool, std::string> c5_robin_expansion() {
    const std::vector<double> hbars{0.4, 0.2, 0.1, 0.05};
    double min_order = 1e9, min_l2 = 1e9, max_h1_ratio = 0.0;
    for (auto [k, K] : {std::pair{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {2.0, 1.0}}) {
        const auto rep = check_expansion(hbars, k, K, 3000);
        min_order = std::min(min_order, rep.fitted_order);
        min_l2 = std::min(min_l2, rep.residuals[1].back());
        for (double hb : hbars) {
            ModelParams p;
            p.hbar = hb;
            p.kappa = k;
            p.gauss = K;
            max_h1_ratio = std::max(max_h1_ratio, ground_state_distance(p, 3000) / (hb * hb));
        }
    }
    std::ostringstream os;
    os << "min order " << std::setprecision(3) << min_order << ", lambda2(0.05) >= " << min_l2
       << ", max H1 distance/hbar^2 = " << max_h1_ratio;
    return {min_order >= 5.5 && min_l2 >= -0.5 && max_h1_ratio <= 5.0, os.str()};
}

// ---------------------------------------------------------------- criterion 6
std::pair<bool, std::string> c6_effective_sphere() {
    const auto grid = SurfaceGrid::build(SurfaceOfRevolution::sphere(1.0), 200, 8);
    const auto spec = effective_spectrum(grid, 8, 12);
    const int ladder[12] = {1, 1, 1, 1, 4, 4, 4, 4, 4, 4, 4, 4};
    double worst = 0.0;
    for (int i = 0; i < 10; ++i)
        worst = std::max(worst, std::abs(spec.extrapolated[i] - ladder[i]) / ladder[i]);
    bool even = true;
    for (const auto& lv : spec.levels)
        if (lv.multiplicity % 2 != 0 && lv.value < spec.eigenvalues[9] * 1.001) even = false;
    std::ostringstream os;
    os << "max ladder deviation " << std::scientific << worst << ", multiplicities";
    for (const auto& lv : spec.levels) os << " " << lv.multiplicity;
    return {worst <= 0.01 && even, os.str()};
}

// ---------------------------------------------------------------- criterion 7
std::pair<bool, std::string> c7_form_lower_bound() {
    const auto sph = SurfaceGrid::build(SurfaceOfRevolution::sphere(1.0), 128, 8);
    const auto sphd = SurfaceGrid::build(SurfaceOfRevolution::spheroid(1.0, 2.0), 128, 8);
    const double a = verify_form_lower_bound(sph, 100);
    const double b = verify_form_lower_bound(sphd, 100);
    std::ostringstream os;
    os << "relative defects: sphere " << std::scientific << a << ", spheroid " << b;
    return {a >= -1e-8 && b >= -1e-8, os.str()};
}

// ---------------------------------------------------------------- criterion 8
std::pair<bool, std::string> c8_negative_mass() {
    TheoremNegativeOptions o;
    o.masses = {20.0, 40.0, 80.0, 160.0};
    std::vector<SandwichDetail> det;
    const auto rep = check_theorem_negative(o, &det);
    int viol = 0, checked = 0;
    for (const auto& d : det) {
        viol += d.violations;
        checked += d.n_checked;
    }
    std::ostringstream os;
    os << checked << " levels sandwiched, " << viol << " violations, |mu1 - 1| order "
       << std::setprecision(3) << rep.fitted_order;
    return {rep.pass && viol == 0 && rep.fitted_order >= 0.5, os.str()};
}

// ---------------------------------------------------------------- criterion 9
std::pair<bool, std::string> c9_square_identities() {
    double worst = 0.0;
    int count = 0;
    for (double mass : {-20.0, 0.0, 20.0}) {
        for (int kap : {-2, -1, 1, 2}) {
            const auto modes =
                solve_channel_bessel(RadialChannel::make(kap), mass, 1.0, std::abs(mass) + 6.0, 4000);
            if (modes.empty()) continue;
            const auto [r1, r2] = verify_square_identities(modes.front());
            worst = std::max({worst, r1, r2});
            ++count;
        }
    }
    std::ostringstream os;
    os << count << " modes, worst relative residual " << std::scientific << worst;
    return {count >= 10 && worst <= 1e-6, os.str()};
}

// --------------------------------------------------------------- criterion 10
std::pair<bool, std::string> c10_agmon() {
    const auto r40 = solve_channel_fdm(RadialChannel::make(-1), -40.0, 1.0, 4000, 40.0 * std::sqrt(0.5));
    const auto r80 = solve_channel_fdm(RadialChannel::make(-1), -80.0, 1.0, 4000, 80.0 * std::sqrt(0.5));
    if (r40.modes.empty() || r80.modes.empty()) return {false, "gap modes not found"};
    const auto p40 = agmon_decay_profile(r40.modes.front());
    const auto p80 = agmon_decay_profile(r80.modes.front());
    const double ratio = p80.slope / p40.slope;
    std::ostringstream os;
    os << "fractions " << std::setprecision(5) << p40.boundary_mass_fraction << ", "
       << p80.boundary_mass_fraction << "; slope ratio " << ratio;
    return {p40.boundary_mass_fraction >= 0.99 && p80.boundary_mass_fraction >= 0.99 && ratio >= 1.7 &&
                ratio <= 2.3,
            os.str()};
}

// --------------------------------------------------------------- criterion 11
std::pair<bool, std::string> c11_determinism() {
    if (g_cli_path.empty()) return {false, "CLI path not provided (--cli)"};
    auto runcli = [&](const std::string& args) {
        const std::string cmd = g_cli_path + " " + args + " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    auto slurp = [](const char* p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream os;
        os << f.rdbuf();
        return os.str();
    };
    if (runcli("ball-spectrum --mass -12 --emax 4.5 --json /tmp/mitbag_acc1.json") != 0)
        return {false, "CLI run failed"};
    if (runcli("ball-spectrum --mass -12 --emax 4.5 --json /tmp/mitbag_acc2.json") != 0)
        return {false, "CLI rerun failed"};
    const auto a = slurp("/tmp/mitbag_acc1.json"), b = slurp("/tmp/mitbag_acc2.json");
    if (a.empty()) return {false, "no output produced"};
    std::ostringstream os;
    os << a.size() << " bytes, byte-identical = " << (a == b ? "yes" : "no");
    return {a == b, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];
    std::printf("acceptance battery (11 criteria)\n");
    run_criterion(1, "Dirac algebra identity suite", 1.0, c1_clifford);
    run_criterion(2, "massless ground state, two routes", 5.0, c2_massless_ground);
    run_criterion(3, "positive-mass level law", 30.0, c3_positive_mass);
    run_criterion(4, "second-order coefficient of the lowest level", 10.0, c4_second_order_coefficient);
    run_criterion(5, "half-line model expansion", 30.0, c5_robin_expansion);
    run_criterion(6, "effective sphere ladder", 60.0, c6_effective_sphere);
    run_criterion(7, "curvature lower bound of the boundary form", 60.0, c7_form_lower_bound);
    run_criterion(8, "negative-mass spectral sandwich", 60.0, c8_negative_mass);
    run_criterion(9, "square-identity residuals", 20.0, c9_square_identities);
    run_criterion(10, "boundary localization of gap modes", 20.0, c10_agmon);
    run_criterion(11, "deterministic CLI output", 5.0, c11_determinism);
    std::printf("%d/11 criteria green\n", 11 - g_failures);
    return g_failures;
}
