#pragma once

#include <Eigen/Dense>
#include <array>
#include <atomic>
#include <cmath>
#include <iostream>
#include <vector>

#include "dopf/battery.hpp"
#include "dopf/common.hpp"

namespace dopf {

// =========================================================================
// Quadratic efficiency surfaces
// =========================================================================
//
// The exact one-way efficiencies vary smoothly with SoC and power; a
// six-term bivariate quadratic captures them to a fraction of a percent
// over the operating box. The controller evaluates these surfaces once per
// interval, which keeps its optimisation problem convex. Convention: SoC as
// a fraction, power as a positive magnitude in watts for the direction in
// question. The charge surface approximates eta_ch, the discharge surface
// approximates 1/eta_dis.

/// Terms: 1, soc, soc^2, p, p^2, soc*p.
using PolyCoeffs = std::array<double, 6>;

[[nodiscard]] inline double poly_eval(const PolyCoeffs& c, double soc, double p) {
    return c[0] + c[1] * soc + c[2] * soc * soc + c[3] * p + c[4] * p * p + c[5] * soc * p;
}

struct EffPoly {
    PolyCoeffs charge{};    ///< eta_ch(soc, p_ch)
    PolyCoeffs discharge{}; ///< 1/eta_dis(soc, p_dis)
    double soc_min = 0.2;
    double soc_max = 1.0;
    double p_max = 100e3;

    mutable std::atomic<bool> warned{false};

    EffPoly() = default;
    EffPoly(const EffPoly& o)
        : charge(o.charge), discharge(o.discharge),
          soc_min(o.soc_min), soc_max(o.soc_max), p_max(o.p_max) {}
    EffPoly& operator=(const EffPoly& o) {
        charge = o.charge;
        discharge = o.discharge;
        soc_min = o.soc_min;
        soc_max = o.soc_max;
        p_max = o.p_max;
        return *this;
    }
};

enum class EffDirection { charge, discharge };

/// Evaluates a surface with inputs clamped into the fitted box (a clamp is
/// reported once per surface on stderr) and the result clamped to the
/// physical range: the charge value into (0, 1], the discharge value to at
/// least 1.
[[nodiscard]] inline double eval_eff(const EffPoly& poly, double soc, double p, EffDirection dir) {
    const double sc = std::clamp(soc, poly.soc_min, poly.soc_max);
    const double pc = std::clamp(p, 0.0, poly.p_max);
    if ((sc != soc || pc != p) && !poly.warned.exchange(true))
        std::cerr << "eval_eff: operating point (" << soc << ", " << p
                  << " W) outside fitted box, clamped\n";
    if (dir == EffDirection::charge) {
        const double v = poly_eval(poly.charge, sc, pc);
        return std::clamp(v, 1e-3, 1.0);
    }
    const double v = poly_eval(poly.discharge, sc, pc);
    return std::max(v, 1.0);
}

/// The well-known published surface pair for a 100 kWh pack, kept as a
/// named preset for cross-checks against an independently fitted set.
[[nodiscard]] inline EffPoly reference_eff_poly() {
    EffPoly e;
    e.charge = {1.00, 4.00e-3, -3.11e-3, -4.77e-7, 3.06e-13, 9.66e-8};
    e.discharge = {1.00, -4.60e-3, 4.13e-3, 5.00e-7, 4.23e-13, -1.36e-7};
    return e;
}

namespace detail {

[[nodiscard]] inline PolyCoeffs fit_surface(const std::vector<double>& socs,
                                            const std::vector<double>& powers,
                                            const std::vector<double>& values) {
    const auto n = socs.size();
    Eigen::MatrixXd a(n, 6);
    Eigen::VectorXd b(n);
    for (size_t k = 0; k < n; ++k) {
        const double s = socs[k];
        const double p = powers[k];
        a.row(static_cast<Eigen::Index>(k)) << 1.0, s, s * s, p, p * p, s * p;
        b(static_cast<Eigen::Index>(k)) = values[k];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < 6)
        throw numeric_error("fit_surface: sample grid does not determine all six terms");
    const Eigen::VectorXd x = qr.solve(b);
    PolyCoeffs c;
    for (int i = 0; i < 6; ++i) c[static_cast<size_t>(i)] = x(i);
    return c;
}

} // namespace detail

/// Least-squares fit of both surfaces to the exact pack model over a SoC x
/// power grid (at least 3 distinct values per axis; power grid nonnegative).
/// Throws when the worst residual exceeds half a percentage point, which
/// indicates a pack outside the quadratic regime.
[[nodiscard]] inline EffPoly fit_eff_polynomials(const BatteryPack& pack,
                                                 const std::vector<double>& soc_grid,
                                                 const std::vector<double>& power_grid) {
    if (soc_grid.size() < 3 || power_grid.size() < 3)
        throw validation_error("fit_eff_polynomials: need at least 3 grid values per axis");
    std::vector<double> socs, powers, ch, dis;
    socs.reserve(soc_grid.size() * power_grid.size());
    for (const double s : soc_grid) {
        for (const double p : power_grid) {
            if (p < 0.0) throw validation_error("fit_eff_polynomials: power grid must be nonnegative");
            socs.push_back(s);
            powers.push_back(p);
            ch.push_back(pack_efficiency(pack, s, -p));
            dis.push_back(1.0 / pack_efficiency(pack, s, p));
        }
    }
    EffPoly poly;
    poly.charge = detail::fit_surface(socs, powers, ch);
    poly.discharge = detail::fit_surface(socs, powers, dis);
    poly.soc_min = *std::min_element(soc_grid.begin(), soc_grid.end());
    poly.soc_max = *std::max_element(soc_grid.begin(), soc_grid.end());
    poly.p_max = *std::max_element(power_grid.begin(), power_grid.end());

    double worst = 0.0;
    for (size_t k = 0; k < socs.size(); ++k) {
        worst = std::max(worst, std::abs(poly_eval(poly.charge, socs[k], powers[k]) - ch[k]));
        worst = std::max(worst, std::abs(poly_eval(poly.discharge, socs[k], powers[k]) - dis[k]));
    }
    if (worst > 5e-3)
        throw numeric_error("fit_eff_polynomials: worst residual " + std::to_string(worst) +
                            " exceeds 0.005");
    return poly;
}

/// Convenience fit over the default operating box.
[[nodiscard]] inline EffPoly fit_eff_polynomials(const BatteryPack& pack,
                                                 int soc_points = 17, int power_points = 21) {
    std::vector<double> socs, powers;
    for (int i = 0; i < soc_points; ++i)
        socs.push_back(0.2 + 0.8 * i / (soc_points - 1));
    for (int i = 0; i < power_points; ++i)
        powers.push_back(100e3 * i / (power_points - 1));
    return fit_eff_polynomials(pack, socs, powers);
}

} // namespace dopf
