#ifndef MITBAG_IO_HPP
#define MITBAG_IO_HPP

/** \file io.hpp
 *  Machine-readable output: JSON serialization of spectra and reports and the
 *  fixed, versioned CSV writers.  All writers are deterministic functions of
 *  their inputs.
 */

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "mitbag/asymptotics.hpp"
#include "mitbag/ball.hpp"
#include "mitbag/effective.hpp"
#include "mitbag/robin.hpp"

namespace mitbag {

using json = nlohmann::json;

inline json to_json(const SpectrumResult& s) {
    json j;
    j["mass"] = s.mass;
    j["radius"] = s.radius;
    j["window"] = {{"emin", 0.0}, {"emax", s.e_max}};
    j["kappa_max"] = s.kappa_max;
    json channels = json::array();
    for (const auto& c : s.channels) {
        json jc;
        jc["kappa"] = c.kappa;
        jc["degeneracy"] = c.degeneracy;
        jc["eigenvalues"] = c.eigenvalues;
        channels.push_back(jc);
    }
    j["channels"] = channels;
    json merged = json::array();
    for (const auto& lv : s.levels) {
        json jl;
        jl["energy"] = lv.energy;
        jl["degeneracy"] = lv.degeneracy;
        json contr = json::array();
        for (const auto& [k, d] : lv.contributions) contr.push_back({{"kappa", k}, {"degeneracy", d}});
        jl["contributions"] = contr;
        merged.push_back(jl);
    }
    j["merged"] = merged;
    return j;
}

inline json to_json(const EffectiveSpectrum& s) {
    json j;
    j["geometry"] = s.geometry;
    j["modes"] = s.m_max;
    j["grid_sizes"] = {s.n_theta, s.n_theta_fine};
    j["eigenvalues"] = s.eigenvalues;
    j["extrapolated"] = s.extrapolated;
    j["mode_of"] = s.mode_of;
    json levels = json::array();
    for (const auto& lv : s.levels)
        levels.push_back({{"value", lv.value}, {"extrapolated", lv.extrapolated}, {"multiplicity", lv.multiplicity}});
    j["levels"] = levels;
    return j;
}

inline json to_json(const AsymptoticReport& r) {
    json j;
    j["theorem"] = r.theorem_id;
    j["sweep"] = r.sweep;
    json res = json::object();
    for (std::size_t i = 0; i < r.residual_names.size(); ++i) res[r.residual_names[i]] = r.residuals[i];
    j["residuals"] = res;
    j["fitted_order"] = r.fitted_order;
    j["fitted_constant"] = r.fitted_constant;
    j["pass"] = r.pass;
    j["tolerance"] = r.tolerance_note;
    std::ostringstream h;
    h << "0x" << std::hex << std::setw(16) << std::setfill('0') << r.input_hash;
    j["input_hash"] = h.str();
    return j;
}

/// (r, u, v) of a radial mode, fixed header, full double round-trip precision.
inline void write_profile_csv(std::ostream& os, const BallMode& m) {
    os << std::setprecision(17);
    os << "r,u,v\n";
    for (std::size_t i = 0; i < m.r.size(); ++i) os << m.r[i] << ',' << m.u[i] << ',' << m.v[i] << '\n';
}

inline void write_robin_csv(std::ostream& os, const std::vector<RobinSweepRow>& rows) {
    os << std::setprecision(17);
    os << "hbar,kappa,gauss,lambda1,lambda2,predicted,residual,h1_distance,bo_correction\n";
    for (const auto& r : rows)
        os << r.hbar << ',' << r.kappa << ',' << r.gauss << ',' << r.lambda1 << ',' << r.lambda2 << ','
           << r.predicted << ',' << r.residual << ',' << r.h1_distance << ',' << r.bo_correction << '\n';
}

}  // namespace mitbag

#endif
