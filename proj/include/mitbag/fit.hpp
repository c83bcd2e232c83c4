#ifndef MITBAG_FIT_HPP
#define MITBAG_FIT_HPP

/** \file fit.hpp
 *  Log-log order fitting and the report record shared by the asymptotic
 *  verification pipelines.
 */

#include <cmath>
#include <string>

#include "mitbag/common.hpp"

namespace mitbag {

struct FitResult {
    double order = 0.0;
    double constant = 0.0;
    std::vector<std::size_t> excluded;  // residuals at/below the 1e-14 floor
};

/// Least-squares slope/intercept of log(residual) against log(x).
/// residual ~ constant * x^order.  Nonpositive residuals are treated as below
/// the 1e-14 floor and excluded (recorded in the result).
inline FitResult fit_order(const std::vector<double>& xs, const std::vector<double>& residuals) {
    if (xs.size() != residuals.size() || xs.size() < 3)
        throw std::invalid_argument("fit_order: need >= 3 sweep points");
    FitResult out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0)) throw std::invalid_argument("fit_order: sweep values must be positive");
        if (!(residuals[i] > 1e-14)) {
            out.excluded.push_back(i);
            continue;
        }
        const double lx = std::log(xs[i]);
        const double ly = std::log(residuals[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_order: fewer than 2 usable residuals above the floor");
    out.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.constant = std::exp((sy - out.order * sx) / n);
    return out;
}

/// One theorem/one geometry/one sweep verification record.
struct AsymptoticReport {
    std::string theorem_id;
    std::vector<double> sweep;                  // sweep variable values
    std::vector<std::string> residual_names;
    std::vector<std::vector<double>> residuals;  // residual_names.size() rows
    double fitted_order = 0.0;
    double fitted_constant = 0.0;
    bool pass = false;
    std::string tolerance_note;
    std::uint64_t input_hash = 0;

    void stamp_hash() {
        std::vector<double> all = sweep;
        for (const auto& row : residuals) all.insert(all.end(), row.begin(), row.end());
        input_hash = fnv1a_hash(all);
    }
};

}  // namespace mitbag

#endif
