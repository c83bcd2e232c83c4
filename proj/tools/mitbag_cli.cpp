// Command-line front end: every computation of the library is exposed as a
// subcommand with machine-readable JSON/CSV output and deterministic results.
//
// Exit codes: 0 success/pass, 1 verification failure, 2 usage error,
//             3 numerical non-convergence.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mitbag/io.hpp"

namespace {

using namespace mitbag;

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
}

void maybe_write_json(const std::string& path, const json& j) {
    if (path.empty()) return;
    write_text(path, j.dump(2) + "\n");
}

int cmd_ball_spectrum(double mass, double radius, double emax, int kappa_max, int samples,
                      const std::string& json_path, const std::string& csv_path,
                      const std::string& profile_path, bool fdm_check) {
    if (kappa_max <= 0) kappa_max = sufficient_kappa_max(mass, radius, emax);
    const auto spec = assemble_spectrum(mass, radius, emax, kappa_max);
    if (fdm_check) {
        for (const auto& c : spec.channels) {
            const int nb = static_cast<int>(c.eigenvalues.size());
            const int nf = fdm_count_in_window(RadialChannel::make(c.kappa), mass, radius, 1200, emax);
            if (nb != nf)
                throw convergence_error("ball-spectrum: scan-step insufficiency detected (matching found " +
                                        std::to_string(nb) + " levels, grid solver " + std::to_string(nf) +
                                        "); refine the scan");
        }
    }
    maybe_write_json(json_path, to_json(spec));
    if (!csv_path.empty()) {
        std::ostringstream os;
        os << std::setprecision(17) << "energy,degeneracy\n";
        for (const auto& lv : spec.levels) os << lv.energy << ',' << lv.degeneracy << '\n';
        write_text(csv_path, os.str());
    }
    if (!profile_path.empty()) {
        if (spec.levels.empty()) throw std::invalid_argument("ball-spectrum: empty window, no profile");
        const int kap = spec.levels.front().contributions.front().first;
        const auto modes = solve_channel_bessel(RadialChannel::make(kap), mass, radius,
                                                spec.levels.front().energy * (1.0 + 1e-9), samples);
        std::ostringstream os;
        write_profile_csv(os, modes.front());
        write_text(profile_path, os.str());
    }
    std::cout << "levels in (0, " << emax << "]: " << spec.levels.size() << "\n";
    for (const auto& lv : spec.levels)
        std::cout << "  E = " << std::setprecision(12) << lv.energy << "  x" << lv.degeneracy << "\n";
    return 0;
}

int cmd_robin_model(double kappa, double gauss, const std::string& hbars_csv, int grid,
                    const std::string& csv_path, const std::string& json_path) {
    const auto hbars = parse_list(hbars_csv);
    std::vector<RobinSweepRow> rows;
    auto rep = check_expansion(hbars, kappa, gauss, grid, &rows);
    for (auto& row : rows) {
        ModelParams p;
        p.hbar = row.hbar;
        p.kappa = kappa;
        p.gauss = gauss;
        row.h1_distance = ground_state_distance(p, grid);
        row.bo_correction = born_oppenheimer_correction(p, 1e-3, 1e-3, std::min(grid, 2000));
    }
    if (!csv_path.empty()) {
        std::ostringstream os;
        write_robin_csv(os, rows);
        write_text(csv_path, os.str());
    }
    maybe_write_json(json_path, to_json(rep));
    std::cout << "expansion order " << rep.fitted_order << " (pass = " << rep.pass << ")\n";
    return rep.pass ? 0 : 1;
}

int cmd_effective_spectrum(double sphere_r, const std::vector<double>& spheroid, int modes, int count,
                           int n_theta, const std::string& json_path, const std::string& csv_path,
                           const std::string& grid_csv) {
    SurfaceOfRevolution surf = SurfaceOfRevolution::sphere(sphere_r);
    if (!spheroid.empty()) {
        if (spheroid.size() != 2) throw std::invalid_argument("--spheroid needs two values a,c");
        surf = SurfaceOfRevolution::spheroid(spheroid[0], spheroid[1]);
    }
    const auto grid = SurfaceGrid::build(surf, n_theta, modes);
    if (!grid_csv.empty()) {
        std::ostringstream os;
        grid.write_csv(os);
        write_text(grid_csv, os.str());
    }
    const auto spec = effective_spectrum(grid, modes, count);
    maybe_write_json(json_path, to_json(spec));
    if (!csv_path.empty()) {
        std::ostringstream os;
        os << std::setprecision(17) << "eigenvalue,extrapolated\n";
        for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
            os << spec.eigenvalues[i] << ',' << spec.extrapolated[i] << '\n';
        write_text(csv_path, os.str());
    }
    std::cout << "lowest " << count << " effective eigenvalues (" << spec.geometry << "):\n";
    for (const auto& lv : spec.levels)
        std::cout << "  " << std::setprecision(10) << lv.extrapolated << "  x" << lv.multiplicity << "\n";
    return 0;
}

int cmd_verify(const std::string& theorem, double radius, const std::string& masses_csv, double C,
               int n_max, const std::string& json_path, const std::string& csv_path) {
    AsymptoticReport rep;
    if (theorem == "positive-mass") {
        TheoremPositiveOptions o;
        o.radius = radius;
        o.n_max = n_max;
        if (!masses_csv.empty()) o.masses = parse_list(masses_csv);
        rep = check_theorem_positive(o);
    } else if (theorem == "negative-mass") {
        TheoremNegativeOptions o;
        o.radius = radius;
        o.C = C;
        if (!masses_csv.empty()) o.masses = parse_list(masses_csv);
        rep = check_theorem_negative(o);
    } else {
        throw std::invalid_argument("unknown theorem id: " + theorem);
    }
    maybe_write_json(json_path, to_json(rep));
    if (!csv_path.empty()) {
        std::ostringstream os;
        os << std::setprecision(17) << "sweep,residual\n";
        for (std::size_t i = 0; i < rep.sweep.size(); ++i)
            os << rep.sweep[i] << ',' << rep.residuals[0][i] << '\n';
        write_text(csv_path, os.str());
    }
    std::cout << rep.theorem_id << ": " << (rep.pass ? "PASS" : "FAIL") << " (fitted order "
              << rep.fitted_order << ")\n";
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the confined Dirac operator on the ball and its boundary operators"};
    app.set_config("--config");
    app.require_subcommand(1);

    // ball-spectrum
    double mass = 0.0, radius = 1.0, emax = 6.0;
    int kappa_max = 0, samples = 2000;
    std::string out_json, out_csv, out_profile;
    bool fdm_check = false;
    auto* ball = app.add_subcommand("ball-spectrum", "merged positive spectrum on the ball");
    ball->add_option("--mass", mass, "mass parameter (sign selects the problem)")->required();
    ball->add_option("--radius", radius, "ball radius")->check(CLI::PositiveNumber);
    ball->add_option("--emax", emax, "window (0, emax)")->required()->check(CLI::PositiveNumber);
    ball->add_option("--kappa-max", kappa_max, "channel cutoff (0 = automatic)");
    ball->add_option("--samples", samples, "radial samples for profiles");
    ball->add_option("--json", out_json, "write SpectrumResult JSON here");
    ball->add_option("--csv", out_csv, "write the merged levels (energy,degeneracy) CSV here");
    ball->add_option("--profile-csv", out_profile, "write the lowest mode (r,u,v) CSV here");
    ball->add_flag("--fdm-check", fdm_check, "cross-check level counts with the grid solver");

    // robin-model
    double rb_kappa = 0.0, rb_gauss = 0.0;
    std::string hbars = "0.4,0.2,0.1,0.05";
    int rb_grid = 3000;
    std::string rb_csv, rb_json;
    auto* robin = app.add_subcommand("robin-model", "half-line model operator sweep");
    robin->add_option("--kappa", rb_kappa, "mean-curvature parameter");
    robin->add_option("--gauss", rb_gauss, "Gauss-curvature parameter");
    robin->add_option("--hbars", hbars, "descending comma-separated sweep");
    robin->add_option("--grid", rb_grid, "intervals per solve");
    robin->add_option("--csv", rb_csv, "write the sweep CSV here");
    robin->add_option("--json", rb_json, "write the expansion report JSON here");

    // effective-spectrum
    double sphere_r = 1.0;
    std::vector<double> spheroid;
    int modes = 8, count = 10, n_theta = 200;
    std::string eff_json, eff_csv, grid_csv;
    auto* eff = app.add_subcommand("effective-spectrum", "boundary operator spectrum on a surface of revolution");
    eff->add_option("--sphere", sphere_r, "sphere radius")->check(CLI::PositiveNumber);
    eff->add_option("--spheroid", spheroid, "spheroid semi-axes a c")->expected(2);
    eff->add_option("--modes", modes, "azimuthal mode budget");
    eff->add_option("--count,-k", count, "number of eigenvalues");
    eff->add_option("--n-theta", n_theta, "meridian grid nodes");
    eff->add_option("--json", eff_json, "write the spectrum JSON here");
    eff->add_option("--csv", eff_csv, "write the spectrum (eigenvalue,extrapolated) CSV here");
    eff->add_option("--grid-csv", grid_csv, "export the grid (theta,r,z,kappa,K,dGamma)");

    // verify
    std::string theorem, masses_csv, verify_json, verify_csv;
    double vc = 5.0, vradius = 1.0;
    int vn_max = 3;
    auto* verify = app.add_subcommand("verify", "run a full theorem pipeline");
    verify->add_option("--theorem", theorem, "positive-mass | negative-mass")->required();
    verify->add_option("--radius", vradius, "ball radius");
    verify->add_option("--masses", masses_csv, "comma-separated mass sweep");
    verify->add_option("--constant,-C", vc, "sandwich constant");
    verify->add_option("--n-max", vn_max, "levels checked (positive-mass)");
    verify->add_option("--json", verify_json, "write the report JSON here");
    verify->add_option("--csv", verify_csv, "write the sweep (sweep,residual) CSV here");

    try {
        app.parse(argc, argv);
        if (*ball)
            return cmd_ball_spectrum(mass, radius, emax, kappa_max, samples, out_json, out_csv,
                                     out_profile, fdm_check);
        if (*robin) return cmd_robin_model(rb_kappa, rb_gauss, hbars, rb_grid, rb_csv, rb_json);
        if (*eff)
            return cmd_effective_spectrum(sphere_r, spheroid, modes, count, n_theta, eff_json, eff_csv,
                                          grid_csv);
        if (*verify) return cmd_verify(theorem, vradius, masses_csv, vc, vn_max, verify_json, verify_csv);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const mitbag::convergence_error& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const mitbag::verification_error& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
